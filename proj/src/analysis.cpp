#include "lfholo/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <numbers>
#include <sstream>

#include "lfholo/illumination.hpp"

namespace lfholo {

namespace {

constexpr double kDeg = 180.0 / std::numbers::pi;

} // namespace

double EtendueParams::half_angle() const { return std::asin(wavelength / (2.0 * pitch)); }

void EtendueParams::validate() const {
    if (nx <= 0 || ny <= 0 || !(pitch > 0.0) || !(wavelength > 0.0) || !(g > 0.0) || alpha < 1) {
        throw DomainError("etendue parameters must be positive");
    }
}

double etendue_slm(long nx, long ny, double wavelength) {
    if (nx <= 0 || ny <= 0) {
        return 0.0;
    }
    if (!(wavelength > 0.0)) {
        throw DomainError("etendue_slm: wavelength must be positive");
    }
    return wavelength * wavelength * static_cast<double>(nx) * static_cast<double>(ny);
}

FovEyebox fov_eyebox(const EtendueParams& params) {
    params.validate();
    FovEyebox fe;
    fe.fov_x = 2.0 * std::atan(params.extent_x() / (2.0 * params.g));
    fe.fov_y = 2.0 * std::atan(params.extent_y() / (2.0 * params.g));
    fe.eyebox = params.alpha * params.g * params.wavelength / params.pitch;
    return fe;
}

double paraxial_product(const FovEyebox& fe) { return fe.fov_x * fe.fov_y * fe.eyebox * fe.eyebox; }

std::vector<TradeoffRow> tradeoff_table(const EtendueParams& params, std::span<const double> g_values,
                                        std::span<const int> alphas) {
    std::vector<TradeoffRow> rows;
    for (int alpha : alphas) {
        for (double g : g_values) {
            EtendueParams p = params;
            p.alpha = alpha;
            p.g = g;
            const FovEyebox fe = fov_eyebox(p);
            rows.push_back({alpha, g, fe.fov_x * kDeg, fe.fov_y * kDeg, fe.eyebox * 1e3,
                            alpha * alpha * etendue_slm(p.nx, p.ny, p.wavelength)});
        }
    }
    return rows;
}

std::string tradeoff_csv(const std::vector<TradeoffRow>& rows) {
    std::ostringstream out;
    out << "alpha,g_m,fov_x_deg,fov_y_deg,eyebox_mm,etendue_m2sr\n";
    for (const TradeoffRow& r : rows) {
        out << fmt::format("{},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g}\n", r.alpha, r.g, r.fov_x_deg, r.fov_y_deg,
                           r.eyebox_mm, r.etendue);
    }
    return out.str();
}

double illumination_angle_deg(double spacing, double focal) { return collimated_incidence_deg(spacing, focal); }

double first_order_angle_deg(double wavelength, double pitch) {
    if (!(pitch > 0.0) || !(wavelength > 0.0) || wavelength >= pitch) {
        throw DomainError("first_order_angle_deg: need 0 < wavelength < pitch");
    }
    return std::asin(wavelength / pitch) * kDeg;
}

IntensityPair normalized_intensities(const ViewImage& reconstruction, const ViewImage& target, double scale) {
    if (!(reconstruction.grid() == target.grid())) {
        throw StructuralError("normalized_intensities: image grids differ");
    }
    IntensityPair out;
    out.reconstruction.resize(target.size());
    out.target.resize(target.size());
    double peak = 0.0;
    for (double t : target.values()) {
        peak = std::max(peak, t * t);
    }
    const double inv = peak > 0.0 ? 1.0 / peak : 1.0;
    for (std::size_t i = 0; i < target.size(); ++i) {
        const double r = scale * reconstruction.values()[i];
        out.reconstruction[i] = std::clamp(r * r * inv, 0.0, 1.0);
        out.target[i] = target.values()[i] * target.values()[i] * inv;
    }
    return out;
}

double psnr(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.empty()) {
        throw StructuralError("psnr: image sizes differ");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    const double mse = sum / static_cast<double>(a.size());
    if (mse == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return 10.0 * std::log10(1.0 / mse);
}

double psnr(const ViewImage& a, const ViewImage& b) {
    if (!(a.grid() == b.grid())) {
        throw StructuralError("psnr: image grids differ");
    }
    return psnr(a.values(), b.values());
}

namespace {

constexpr int kWin = 11;
constexpr double kSigma = 1.5;

std::array<double, kWin> gaussian_taps() {
    std::array<double, kWin> w{};
    double sum = 0.0;
    for (int i = 0; i < kWin; ++i) {
        const double d = i - kWin / 2;
        w[i] = std::exp(-d * d / (2.0 * kSigma * kSigma));
        sum += w[i];
    }
    for (double& v : w) {
        v /= sum;
    }
    return w;
}

// Separable "valid" Gaussian filtering: output is (nx - 10) x (ny - 10).
std::vector<double> filter_valid(std::span<const double> in, int nx, int ny, const std::array<double, kWin>& w) {
    const int ox = nx - kWin + 1;
    const int oy = ny - kWin + 1;
    std::vector<double> rows(static_cast<std::size_t>(ny) * ox);
    for (int y = 0; y < ny; ++y) {
        for (int x = 0; x < ox; ++x) {
            double s = 0.0;
            for (int k = 0; k < kWin; ++k) {
                s += w[k] * in[static_cast<std::size_t>(y) * nx + x + k];
            }
            rows[static_cast<std::size_t>(y) * ox + x] = s;
        }
    }
    std::vector<double> out(static_cast<std::size_t>(oy) * ox);
    for (int y = 0; y < oy; ++y) {
        for (int x = 0; x < ox; ++x) {
            double s = 0.0;
            for (int k = 0; k < kWin; ++k) {
                s += w[k] * rows[static_cast<std::size_t>(y + k) * ox + x];
            }
            out[static_cast<std::size_t>(y) * ox + x] = s;
        }
    }
    return out;
}

} // namespace

double ssim(std::span<const double> a, std::span<const double> b, int nx, int ny) {
    if (a.size() != b.size() || a.size() != static_cast<std::size_t>(nx) * ny) {
        throw StructuralError("ssim: image sizes differ");
    }
    if (nx < kWin || ny < kWin) {
        throw DomainError("ssim: images must be at least 11x11");
    }
    const auto w = gaussian_taps();
    std::vector<double> aa(a.size()), bb(a.size()), ab(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        aa[i] = a[i] * a[i];
        bb[i] = b[i] * b[i];
        ab[i] = a[i] * b[i];
    }
    const auto mu_a = filter_valid(a, nx, ny, w);
    const auto mu_b = filter_valid(b, nx, ny, w);
    const auto m_aa = filter_valid(aa, nx, ny, w);
    const auto m_bb = filter_valid(bb, nx, ny, w);
    const auto m_ab = filter_valid(ab, nx, ny, w);
    const double c1 = 0.01 * 0.01;
    const double c2 = 0.03 * 0.03;
    double sum = 0.0;
    for (std::size_t i = 0; i < mu_a.size(); ++i) {
        const double va = m_aa[i] - mu_a[i] * mu_a[i];
        const double vb = m_bb[i] - mu_b[i] * mu_b[i];
        const double cov = m_ab[i] - mu_a[i] * mu_b[i];
        sum += ((2.0 * mu_a[i] * mu_b[i] + c1) * (2.0 * cov + c2)) /
               ((mu_a[i] * mu_a[i] + mu_b[i] * mu_b[i] + c1) * (va + vb + c2));
    }
    return sum / static_cast<double>(mu_a.size());
}

double ssim(const ViewImage& a, const ViewImage& b) {
    if (!(a.grid() == b.grid())) {
        throw StructuralError("ssim: image grids differ");
    }
    return ssim(a.values(), b.values(), a.grid().nx, a.grid().ny);
}

ViewMetrics view_metrics(const ViewImage& reconstruction, const ViewImage& target, double scale) {
    const IntensityPair pair = normalized_intensities(reconstruction, target, scale);
    const GridSpec& g = target.grid();
    return {psnr(pair.reconstruction, pair.target), ssim(pair.reconstruction, pair.target, g.nx, g.ny)};
}

std::string format_db(double db) { return std::isinf(db) ? std::string("inf") : fmt::format("{:.6f}", db); }

} // namespace lfholo
