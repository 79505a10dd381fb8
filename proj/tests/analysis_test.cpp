#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "lfholo/analysis.hpp"

using namespace lfholo;

namespace {

double naive_ssim(const std::vector<double>& a, const std::vector<double>& b, int nx, int ny) {
    double g[11];
    double gs = 0.0;
    for (int u = 0; u < 11; ++u) {
        g[u] = std::exp(-(u - 5.0) * (u - 5.0) / (2 * 1.5 * 1.5));
        gs += g[u];
    }
    const double c1 = 0.01 * 0.01;
    const double c2 = 0.03 * 0.03;
    double total = 0.0;
    int count = 0;
    for (int y0 = 0; y0 + 11 <= ny; ++y0) {
        for (int x0 = 0; x0 + 11 <= nx; ++x0) {
            double ma = 0, mb = 0, saa = 0, sbb = 0, sab = 0;
            for (int v = 0; v < 11; ++v) {
                for (int u = 0; u < 11; ++u) {
                    const double w = g[u] * g[v] / (gs * gs);
                    const double pa = a[(y0 + v) * nx + x0 + u];
                    const double pb = b[(y0 + v) * nx + x0 + u];
                    ma += w * pa;
                    mb += w * pb;
                    saa += w * pa * pa;
                    sbb += w * pb * pb;
                    sab += w * pa * pb;
                }
            }
            const double va = saa - ma * ma;
            const double vb = sbb - mb * mb;
            const double cov = sab - ma * mb;
            total += (2 * ma * mb + c1) * (2 * cov + c2) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
            ++count;
        }
    }
    return total / count;
}

std::vector<double> random_image(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> d(0.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v) x = d(rng);
    return v;
}

} // namespace

TEST(Analysis, Etendue) {
    EXPECT_EQ(etendue_slm(1280, 800, 532e-9), 532e-9 * 532e-9 * 1280.0 * 800.0);
    EXPECT_EQ(etendue_slm(0, 800, 532e-9), 0.0);
    EXPECT_THROW(etendue_slm(4, 4, 0.0), DomainError);
}

TEST(Analysis, FovEyeboxAndParaxialLimit) {
    EtendueParams p{1280, 800, 8e-6, 532e-9, 0.2, 3};
    const FovEyebox fe = fov_eyebox(p);
    EXPECT_NEAR(fe.fov_x, 2 * std::atan(1280 * 8e-6 / 0.4), 1e-15);
    EXPECT_NEAR(fe.eyebox, 3 * 0.2 * 532e-9 / 8e-6, 1e-18);
    const double g = etendue_slm(1280, 800, 532e-9);
    EXPECT_LT(fe.fov_x * 180 / std::numbers::pi, 10.0);
    EXPECT_NEAR(paraxial_product(fe) / (9 * g), 1.0, 0.01);
    EXPECT_NEAR(std::sin(p.half_angle()), 532e-9 / 16e-6, 1e-15);
    p.g = -1.0;
    EXPECT_THROW(fov_eyebox(p), DomainError);
}

TEST(Analysis, TradeoffTable) {
    const EtendueParams p{64, 64, 10.8e-6, 632.8e-9, 0.05, 1};
    const std::vector<double> gs{0.05, 0.1};
    const std::vector<int> alphas{1, 3};
    const auto rows = tradeoff_table(p, gs, alphas);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[3].alpha, 3);
    EXPECT_DOUBLE_EQ(rows[3].g, 0.1);
    EXPECT_DOUBLE_EQ(rows[3].etendue, 9 * etendue_slm(64, 64, 632.8e-9));
    // Longer focal lengths trade field of view for eyebox.
    EXPECT_GT(rows[0].fov_x_deg, rows[1].fov_x_deg);
    EXPECT_LT(rows[0].eyebox_mm, rows[1].eyebox_mm);
    const std::string csv = tradeoff_csv(rows);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "alpha,g_m,fov_x_deg,fov_y_deg,eyebox_mm,etendue_m2sr");
    int n = 0;
    while (std::getline(in, line)) ++n;
    EXPECT_EQ(n, 4);
}

TEST(Analysis, Angles) {
    EXPECT_NEAR(illumination_angle_deg(8.17e-3, 200e-3), 2.34, 0.01);
    EXPECT_NEAR(first_order_angle_deg(632.8e-9, 10.8e-6), std::asin(632.8e-9 / 10.8e-6) * 180 / std::numbers::pi,
                1e-12);
}

TEST(Analysis, PsnrNaive) {
    std::mt19937_64 rng(41);
    const auto a = random_image(rng, 400);
    const auto b = random_image(rng, 400);
    double mse = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) mse += (a[i] - b[i]) * (a[i] - b[i]);
    mse /= a.size();
    EXPECT_NEAR(psnr(a, b), 10 * std::log10(1.0 / mse), 1e-12);
    EXPECT_TRUE(std::isinf(psnr(a, a)));
    EXPECT_EQ(format_db(psnr(a, a)), "inf");
}

TEST(Analysis, SsimMatchesDirectWindows) {
    std::mt19937_64 rng(42);
    for (auto [nx, ny] : {std::pair{11, 11}, {20, 16}, {33, 25}}) {
        const auto a = random_image(rng, nx * ny);
        auto b = a;
        for (double& x : b) x = std::clamp(x + std::normal_distribution<double>(0, 0.1)(rng), 0.0, 1.0);
        EXPECT_NEAR(ssim(a, b, nx, ny), naive_ssim(a, b, nx, ny), 1e-12);
        EXPECT_NEAR(ssim(a, a, nx, ny), 1.0, 1e-12);
    }
    std::vector<double> small(100, 0.5);
    EXPECT_THROW(ssim(small, small, 10, 10), DomainError);
}

TEST(Analysis, NormalizedIntensities) {
    const GridSpec g = GridSpec::square(12, 1e-6, 633e-9);
    ViewImage target(g, 0.5);
    target(3, 3) = 1.0;
    ViewImage recon(g, 0.25);
    recon(0, 0) = 10.0;
    const IntensityPair ip = normalized_intensities(recon, target, 2.0);
    EXPECT_DOUBLE_EQ(ip.target[3 * 12 + 3], 1.0);
    EXPECT_DOUBLE_EQ(ip.target[0 + 1], 0.25);
    EXPECT_DOUBLE_EQ(ip.reconstruction[1], 0.25);
    EXPECT_DOUBLE_EQ(ip.reconstruction[0], 1.0);  // clamped
    const ViewMetrics m = view_metrics(target, target, 1.0);
    EXPECT_TRUE(std::isinf(m.psnr_db));
    EXPECT_NEAR(m.ssim, 1.0, 1e-12);
    // Scale acts on amplitude.
    ViewImage half(g);
    for (std::size_t i = 0; i < g.size(); ++i) half.values()[i] = target.values()[i] / 2;
    EXPECT_TRUE(std::isinf(view_metrics(half, target, 2.0).psnr_db));
}
