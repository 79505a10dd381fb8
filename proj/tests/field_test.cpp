#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "../src/fft_engine.hpp"
#include "lfholo/field.hpp"
#include "oracles.hpp"

using namespace lfholo;

namespace {

GridSpec grid(int nx, int ny) { return {nx, ny, 2e-6, 3e-6, 500e-9}; }

} // namespace

TEST(Field, GridValidation) {
    EXPECT_NO_THROW(grid(2, 2).validate());
    EXPECT_THROW(grid(1, 4).validate(), DomainError);
    EXPECT_THROW((GridSpec{4, 4, 0.0, 1e-6, 5e-7}.validate()), DomainError);
    EXPECT_THROW((GridSpec{4, 4, 1e-6, 1e-6, -1.0}.validate()), DomainError);
    EXPECT_THROW(ComplexField(grid(4, 4), std::vector<cplx>(3)), StructuralError);
}

TEST(Field, DftMatchesNaiveOracle) {
    std::mt19937_64 rng(1);
    for (auto [nx, ny] : {std::pair{4, 4}, {5, 3}, {8, 6}, {7, 9}, {16, 12}}) {
        const ComplexField u = oracle::random_field(grid(nx, ny), rng);
        const auto ref = oracle::naive_dft2(u.values(), nx, ny);
        const ComplexField f = dft2(u);
        EXPECT_EQ(f.domain(), Domain::frequency);
        EXPECT_LT(oracle::max_abs_diff(f.values(), ref), 1e-12 * oracle::max_abs(ref)) << nx << "x" << ny;
        const auto back = oracle::naive_dft2(ref, nx, ny, true);
        EXPECT_LT(oracle::max_abs_diff(idft2(f).values(), back), 1e-12 * oracle::max_abs(back));
    }
}

TEST(Field, SinglePrecisionCloseToDouble) {
    std::mt19937_64 rng(2);
    const ComplexField u = oracle::random_field(grid(12, 10), rng);
    const ComplexField a = dft2(u);
    const ComplexField b = dft2(u, Precision::f32);
    EXPECT_LT(oracle::max_abs_diff(a.values(), b.values()), 1e-5 * oracle::max_abs(a.values()));
}

TEST(Field, DeltaAndConstant) {
    ComplexField d(grid(6, 4));
    d(0, 0) = 1.0;
    const ComplexField fd = dft2(d);
    for (const cplx& v : fd.values()) {
        EXPECT_NEAR(std::abs(v - cplx(1.0 / std::sqrt(24.0))), 0.0, 1e-15);
    }
}

TEST(Field, DomainChecks) {
    ComplexField u(grid(4, 4));
    EXPECT_THROW(idft2(u), StructuralError);
    EXPECT_THROW(dft2(dft2(u)), StructuralError);
    EXPECT_THROW(inner(u, ComplexField(grid(4, 6))), StructuralError);
}

TEST(Field, FreqCoordsOrder) {
    const GridSpec g = grid(5, 4);
    const FrequencyAxes ax = freq_coords(g);
    const double df = g.df_x();
    EXPECT_DOUBLE_EQ(ax.fx[0], 0.0);
    EXPECT_DOUBLE_EQ(ax.fx[2], 2 * df);
    EXPECT_DOUBLE_EQ(ax.fx[3], -2 * df);
    EXPECT_DOUBLE_EQ(ax.fy[2], -2 * g.df_y());
    EXPECT_EQ(signed_bin(2, 4), -2);
    EXPECT_EQ(signed_bin(2, 5), 2);
}

TEST(Field, CenterRoundTripOddAndEven) {
    for (auto [nx, ny] : {std::pair{4, 6}, {5, 7}, {3, 4}}) {
        std::vector<int> v(nx * ny);
        std::iota(v.begin(), v.end(), 0);
        const auto c = center<int>(v, nx, ny);
        EXPECT_EQ(c[(ny / 2) * nx + nx / 2], 0);
        EXPECT_EQ(uncenter<int>(c, nx, ny), v);
    }
}

TEST(Field, Circshift) {
    std::vector<int> v{0, 1, 2, 3, 4, 5};
    const auto s = circshift<int>(v, 3, 2, 1, 1);
    // out(x + 1, y + 1) = in(x, y)
    EXPECT_EQ(s[1 * 3 + 1], 0);
    EXPECT_EQ(s[0 * 3 + 0], 5);
    EXPECT_EQ(circshift<int>(s, 3, 2, -1, -1), v);
}

TEST(Field, EnergyAndInner) {
    const GridSpec g = grid(3, 2);
    ComplexField u(g, std::vector<cplx>(6, cplx(1.0, 1.0)));
    EXPECT_DOUBLE_EQ(energy(u), 12.0 * g.pitch_x * g.pitch_y);
    EXPECT_DOUBLE_EQ(norm(u), std::sqrt(12.0));
    EXPECT_EQ(inner(u, u), cplx(12.0, 0.0));
}

TEST(FftEngine, RowPrunedInverseMatchesFull) {
    std::mt19937_64 rng(3);
    for (Precision p : {Precision::f64, Precision::f32}) {
        const int nx = 12;
        const int ny = 10;
        std::vector<unsigned char> rows(ny, 0);
        rows[1] = rows[4] = rows[9] = 1;
        auto data = oracle::random_complex(nx * ny, rng);
        for (int y = 0; y < ny; ++y) {
            if (!rows[y]) {
                std::fill_n(data.begin() + y * nx, nx, cplx{});
            }
        }
        auto full = data;
        detail::fft2(full, nx, ny, detail::FftDirection::inverse, p);
        detail::fft2_rows(data, nx, ny, detail::FftDirection::inverse, p, rows);
        EXPECT_LT(oracle::max_abs_diff(full, data), 1e-5 * oracle::max_abs(full));
    }
}

TEST(FftEngine, RowPrunedForwardNeededRows) {
    std::mt19937_64 rng(4);
    const int nx = 8;
    const int ny = 6;
    std::vector<unsigned char> rows(ny, 0);
    rows[0] = rows[5] = 1;
    auto data = oracle::random_complex(nx * ny, rng);
    auto full = data;
    detail::fft2(full, nx, ny, detail::FftDirection::forward, Precision::f64);
    detail::fft2_rows(data, nx, ny, detail::FftDirection::forward, Precision::f64, rows);
    for (int y : {0, 5}) {
        for (int x = 0; x < nx; ++x) {
            EXPECT_LT(std::abs(full[y * nx + x] - data[y * nx + x]), 1e-12);
        }
    }
}
