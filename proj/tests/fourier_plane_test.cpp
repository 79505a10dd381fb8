#include <gtest/gtest.h>

#include <filesystem>
#include <numeric>
#include <random>

#include "lfholo/fourier_plane.hpp"
#include "oracles.hpp"

using namespace lfholo;

namespace {

const GridSpec kGrid{12, 10, 4e-6, 4e-6, 633e-9};

int block_of(int c, const std::vector<int>& edges) {
    for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
        if (c >= edges[b] && c < edges[b + 1]) {
            return static_cast<int>(b);
        }
    }
    return -1;
}

} // namespace

TEST(FourierPlane, Sigmoid) {
    EXPECT_DOUBLE_EQ(sigmoid(0.0), 0.5);
    EXPECT_NEAR(sigmoid(2.0) + sigmoid(-2.0), 1.0, 1e-15);
    EXPECT_GT(sigmoid(-800.0), -1e-300);
    EXPECT_LE(sigmoid(800.0), 1.0);
}

TEST(FourierPlane, BlockEdges) {
    EXPECT_EQ(block_edges(10, 5), (std::vector<int>{0, 2, 4, 6, 8, 10}));
    EXPECT_EQ(block_edges(7, 3), (std::vector<int>{0, 2, 5, 7}));
    EXPECT_EQ(block_edges(192, 20).back(), 192);
}

TEST(FourierPlane, UpsampleIsBlockwiseConstantInCenteredOrder) {
    const int mx = 4;
    const int my = 3;
    std::vector<double> native(mx * my);
    std::iota(native.begin(), native.end(), 1.0);
    const FrequencyMask up = upsample_blocks(native, mx, my, kGrid);
    const auto c = center<double>(up.values(), kGrid.nx, kGrid.ny);
    const auto ex = block_edges(kGrid.nx, mx);
    const auto ey = block_edges(kGrid.ny, my);
    for (int y = 0; y < kGrid.ny; ++y) {
        for (int x = 0; x < kGrid.nx; ++x) {
            EXPECT_EQ(c[y * kGrid.nx + x], native[block_of(y, ey) * mx + block_of(x, ex)]);
        }
    }
}

TEST(FourierPlane, BlockSumsIsAdjointOfUpsample) {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> d;
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> native(5 * 4);
        std::vector<double> full(kGrid.size());
        for (double& v : native) v = d(rng);
        for (double& v : full) v = d(rng);
        const FrequencyMask up = upsample_blocks(native, 5, 4, kGrid);
        const auto sums = block_sums(full, 5, 4, kGrid);
        double lhs = 0.0;
        double rhs = 0.0;
        for (std::size_t i = 0; i < full.size(); ++i) lhs += up.values()[i] * full[i];
        for (std::size_t i = 0; i < native.size(); ++i) rhs += native[i] * sums[i];
        EXPECT_NEAR(lhs, rhs, 1e-12 * std::abs(lhs) + 1e-12);
    }
}

TEST(FourierPlane, RealizeModes) {
    const FrequencyMask open = realize_mask(FourierMask::open(), kGrid);
    for (double v : open.values()) EXPECT_EQ(v, 1.0);

    const Aperture ap{kGrid.df_x(), 0.0, 2.5 * kGrid.df_x()};
    EXPECT_EQ(realize_mask(FourierMask::circular(ap), kGrid), disk_mask(ap, kGrid));

    const FourierMask fr = FourierMask::fixed_random(6, 5, 3);
    const auto amps = fr.native_amplitudes();
    for (double a : amps) EXPECT_TRUE(a == 0.0 || a == 1.0);
    EXPECT_EQ(FourierMask::fixed_random(6, 5, 3).pattern, fr.pattern);
    EXPECT_NE(FourierMask::fixed_random(6, 5, 4).pattern, fr.pattern);

    FourierMask opt = FourierMask::optimizable(3, 2, 0.3);
    opt.logits[4] = -1.0;
    const auto na = opt.native_amplitudes();
    EXPECT_DOUBLE_EQ(na[0], sigmoid(0.3));
    EXPECT_DOUBLE_EQ(na[4], sigmoid(-1.0));
    EXPECT_EQ(realize_mask(opt, kGrid), upsample_blocks(na, 3, 2, kGrid));
}

TEST(FourierPlane, FixedRandomOpenFraction) {
    const FourierMask m = FourierMask::fixed_random(40, 40, 9, 0.25);
    double open = 0.0;
    for (double a : m.native_amplitudes()) open += a;
    EXPECT_NEAR(open / 1600.0, 0.25, 0.05);
}

TEST(FourierPlane, LogitGradientMatchesFiniteDifference) {
    std::mt19937_64 rng(22);
    std::normal_distribution<double> d;
    FourierMask m = FourierMask::optimizable(4, 3);
    for (double& l : m.logits) l = d(rng);
    std::vector<double> w(kGrid.size());
    for (double& v : w) v = d(rng);
    auto objective = [&](const FourierMask& mm) {
        const FrequencyMask realized = realize_mask(mm, kGrid);
        const auto r = realized.values();
        double s = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i) s += w[i] * r[i];
        return s;
    };
    const auto g = mask_logit_gradient(m, kGrid, w);
    for (std::size_t k = 0; k < m.logits.size(); ++k) {
        FourierMask a = m;
        FourierMask b = m;
        const double h = 1e-6;
        a.logits[k] += h;
        b.logits[k] -= h;
        const double fd = (objective(a) - objective(b)) / (2 * h);
        EXPECT_NEAR(g[k], fd, 1e-7 * (1.0 + std::abs(fd)));
    }
}

TEST(FourierPlane, DiskMaskBySampleCentre) {
    const Aperture ap{0.0, 0.0, 1.5 * std::max(kGrid.df_x(), kGrid.df_y())};
    const FrequencyMask m = disk_mask(ap, kGrid);
    double count = 0.0;
    for (double v : m.values()) count += v;
    EXPECT_EQ(count, 9.0);
    EXPECT_EQ(m(0, 0), 1.0);
    EXPECT_EQ(m(kGrid.nx - 1, 0), 1.0);
}

TEST(FourierPlane, EyeboxMapping) {
    const double g = 75e-3;
    const double lambda = 632.8e-9;
    const double f = eyebox_to_freq(2e-3, g, lambda);
    EXPECT_NEAR(f, 2e-3 / (lambda * g), 1e-9 * f);
    EXPECT_NEAR(freq_to_eyebox(f, g, lambda), 2e-3, 1e-18);
}

TEST(FourierPlane, UniformPupilLayout) {
    const PupilLayout l = PupilLayout::uniform(3, 9e-3, 1e-3, 75e-3);
    ASSERT_EQ(l.count(), 9u);
    EXPECT_DOUBLE_EQ(l.spacing(), 3e-3);
    EXPECT_DOUBLE_EQ(l.pupils[0].cx, -3e-3);
    EXPECT_DOUBLE_EQ(l.pupils[0].cy, -3e-3);
    EXPECT_DOUBLE_EQ(l.pupils[5].cx, 3e-3);
    EXPECT_DOUBLE_EQ(l.pupils[5].cy, 0.0);
    EXPECT_EQ(l.row(5), 1);
    EXPECT_EQ(l.col(5), 2);
    EXPECT_DOUBLE_EQ(l.step_x(0), -1.0);
    EXPECT_DOUBLE_EQ(PupilLayout::uniform(2, 4e-3, 1e-3, 1.0).step_x(1), 0.5);
    EXPECT_THROW(PupilLayout::uniform(0, 1.0, 1.0, 1.0), DomainError);
}

TEST(FourierPlane, PupilMask) {
    const double g = 10e-3;
    const PupilSpec p{0.0, 0.0, 3 * kGrid.df_x() * kGrid.wavelength * g, g};
    const FrequencyMask m = pupil_mask(p, kGrid);
    EXPECT_EQ(m, disk_mask(p.in_frequency(kGrid.wavelength), kGrid));
    const PupilSpec far{1.0, 1.0, 1e-9, g};
    EXPECT_THROW(pupil_mask(far, kGrid), DomainError);
}

TEST(FourierPlane, ExportMaskFiles) {
    const auto dir = std::filesystem::temp_directory_path() / "lfholo_mask_export";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    const std::vector<double> v{0.0, 0.25, 0.5, 1.0, 1.0, 0.0};
    export_mask(v, 3, 2, dir / "m", "optimizable_lowres");
    EXPECT_EQ(std::filesystem::file_size(dir / "m.f32"), 24u);
    EXPECT_TRUE(std::filesystem::exists(dir / "m.png"));
    EXPECT_TRUE(std::filesystem::exists(dir / "m.json"));
}
