#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "lfholo/slm.hpp"
#include "oracles.hpp"

using namespace lfholo;

namespace {

double circular_distance(double a, double b) {
    double d = std::fmod(std::abs(a - b), 2 * std::numbers::pi);
    return std::min(d, 2 * std::numbers::pi - d);
}

std::filesystem::path temp_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("lfholo_slm_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

} // namespace

TEST(Quantization, NearestLevelByBruteForce) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> d(-20.0, 20.0);
    for (int levels : {2, 4, 16}) {
        for (int i = 0; i < 2000; ++i) {
            const double phi = d(rng);
            int best = 0;
            for (int m = 1; m < levels; ++m) {
                const double lm = -std::numbers::pi + 2 * std::numbers::pi * m / levels;
                const double lb = -std::numbers::pi + 2 * std::numbers::pi * best / levels;
                if (circular_distance(phi, lm) < circular_distance(phi, lb)) {
                    best = m;
                }
            }
            EXPECT_EQ(level_index(phi, levels), best) << phi;
            EXPECT_DOUBLE_EQ(quantize_value(phi, levels),
                             -std::numbers::pi + 2 * std::numbers::pi * best / levels);
        }
    }
}

TEST(Quantization, PatternProperties) {
    std::mt19937_64 rng(12);
    const GridSpec g = GridSpec::square(16, 8e-6, 633e-9);
    std::vector<double> v(g.size());
    std::uniform_real_distribution<double> d(-10.0, 10.0);
    for (double& x : v) {
        x = d(rng);
    }
    const PhasePattern phi(g, v);
    const PhasePattern q = quantize_phase(phi, 16);
    std::set<double> distinct(q.values().begin(), q.values().end());
    EXPECT_LE(distinct.size(), 16u);
    EXPECT_EQ(quantize_phase(q, 16), q);
    EXPECT_EQ(quantize_phase(phi, 0), phi);
    EXPECT_THROW(quantize_phase(phi, 1), DomainError);
    for (double x : q.values()) {
        EXPECT_GE(x, -std::numbers::pi);
        EXPECT_LT(x, std::numbers::pi);
    }
}

TEST(Quantization, WrapPhase) {
    EXPECT_DOUBLE_EQ(wrap_phase(std::numbers::pi), -std::numbers::pi);
    EXPECT_NEAR(wrap_phase(7.0), 7.0 - 2 * std::numbers::pi, 1e-15);
    EXPECT_NEAR(wrap_phase(-4.0), -4.0 + 2 * std::numbers::pi, 1e-15);
}

TEST(Hdo, BlockGeometry) {
    EXPECT_EQ((HdoModel{3, 1.0}.active_width()), 3);
    EXPECT_EQ((HdoModel{3, 0.67}.active_width()), 2);
    EXPECT_EQ((HdoModel{4, 0.5}.active_offset()), 1);
    EXPECT_EQ((HdoModel{3, 0.1}.active_width()), 1);
    EXPECT_THROW((HdoModel{0, 1.0}.validate()), DomainError);
    EXPECT_THROW((HdoModel{2, 0.0}.validate()), DomainError);
    EXPECT_THROW((HdoModel{2, 1.5}.validate()), DomainError);
}

TEST(Hdo, IdentityForUnitFactor) {
    std::mt19937_64 rng(13);
    const GridSpec g = GridSpec::square(6, 8e-6, 633e-9);
    const ComplexField u = oracle::random_field(g, rng);
    const ComplexField s = supersample_hdo(u, {1, 1.0});
    EXPECT_EQ(s.grid(), g);
    EXPECT_LT(oracle::max_abs_diff(s.values(), u.values()), 1e-300);
}

TEST(Hdo, MatchesHoldOracleAndAdjoint) {
    std::mt19937_64 rng(14);
    const GridSpec g{5, 4, 8e-6, 8e-6, 633e-9};
    for (HdoModel m : {HdoModel{2, 1.0}, HdoModel{3, 1.0}, HdoModel{3, 0.67}, HdoModel{4, 0.5}}) {
        const ComplexField u = oracle::random_field(g, rng);
        const ComplexField s = supersample_hdo(u, m);
        EXPECT_EQ(s.grid(), m.supersampled(g));
        const auto ref = oracle::hold(u.values(), g.nx, g.ny, m.q, m.fill_factor);
        EXPECT_EQ(oracle::max_abs_diff(s.values(), ref), 0.0);
        const ComplexField v = oracle::random_field(s.grid(), rng);
        const cplx lhs = inner(s, v);
        const cplx rhs = inner(u, supersample_hdo_adjoint(v, m, g));
        EXPECT_LT(std::abs(lhs - rhs), 1e-12 * std::abs(lhs));
    }
}

TEST(Hdo, EnvelopeMatchesDirectDft) {
    // A single lit pixel at the origin: its spectrum is the envelope itself.
    const int n = 4;
    for (HdoModel m : {HdoModel{3, 1.0}, HdoModel{3, 0.67}}) {
        const GridSpec g = GridSpec::square(n, 8e-6, 633e-9);
        ComplexField d(g);
        d(0, 0) = 1.0;
        const ComplexField s = supersample_hdo(d, m);
        const int big = n * m.q;
        const auto spec = oracle::naive_dft2(s.values(), big, big);
        for (int ky = 0; ky < big; ++ky) {
            for (int kx = 0; kx < big; ++kx) {
                const cplx expected = hdo_envelope(kx, n, m) * hdo_envelope(ky, n, m) / static_cast<double>(n);
                EXPECT_LT(std::abs(spec[ky * big + kx] - expected), 1e-13);
            }
        }
    }
}

TEST(Hdo, SpectrumReplicaProperty) {
    std::mt19937_64 rng(15);
    const int n = 8;
    const HdoModel m{3, 1.0};
    const GridSpec g = GridSpec::square(n, 8e-6, 633e-9);
    const ComplexField u = oracle::random_field(g, rng);
    const ComplexField native = dft2(u);
    const ComplexField super = dft2(supersample_hdo(u, m));
    const int big = n * m.q;
    double worst = 0.0;
    for (int ky = 0; ky < big; ++ky) {
        for (int kx = 0; kx < big; ++kx) {
            const cplx expected =
                hdo_envelope(kx, n, m) * hdo_envelope(ky, n, m) * native(kx % n, ky % n);
            worst = std::max(worst, std::abs(super(kx, ky) - expected) / oracle::max_abs(native.values()));
        }
    }
    EXPECT_LT(worst, 1e-10);
}

TEST(PhaseIo, RoundTripAndLevels) {
    const auto dir = temp_dir("roundtrip");
    std::mt19937_64 rng(16);
    const GridSpec g{7, 5, 8e-6, 8e-6, 633e-9};
    std::vector<double> v(g.size());
    for (double& x : v) {
        x = std::uniform_real_distribution<double>(-4.0, 4.0)(rng);
    }
    const PhasePattern q = quantize_phase(PhasePattern(g, v), 16);
    export_phase(q, 16, dir / "phi");
    EXPECT_TRUE(std::filesystem::exists(dir / "phi.png"));
    EXPECT_EQ(std::filesystem::file_size(dir / "phi.f32"), g.size() * 4);
    int levels = 0;
    const PhasePattern back = import_phase(dir / "phi", &levels);
    EXPECT_EQ(levels, 16);
    EXPECT_EQ(back, q);
}

TEST(PhaseIo, TruncatedFileIsIoError) {
    const auto dir = temp_dir("truncated");
    const GridSpec g = GridSpec::square(4, 8e-6, 633e-9);
    export_phase(PhasePattern(g, 0.5), 16, dir / "phi");
    std::filesystem::resize_file(dir / "phi.f32", 10);
    EXPECT_THROW(import_phase(dir / "phi"), IoError);
    EXPECT_THROW(import_phase(dir / "missing"), IoError);
}
