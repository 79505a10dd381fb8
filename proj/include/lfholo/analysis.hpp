#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "lfholo/field.hpp"

namespace lfholo {

struct EtendueParams {
    long nx = 0;
    long ny = 0;
    double pitch = 0.0;
    double wavelength = 0.0;
    double g = 0.0;
    int alpha = 1;

    double extent_x() const { return nx * pitch; }
    double extent_y() const { return ny * pitch; }
    double area() const { return extent_x() * extent_y(); }
    /// Diffraction half-angle asin(lambda / 2p).
    double half_angle() const;
    void validate() const;
};

/// lambda^2 * nx * ny. Zero pixel counts give 0.
double etendue_slm(long nx, long ny, double wavelength);

struct FovEyebox {
    double fov_x = 0.0;  ///< radians
    double fov_y = 0.0;
    double eyebox = 0.0;  ///< alpha * g * lambda / p, meters
};

FovEyebox fov_eyebox(const EtendueParams& params);

/// fov_x * fov_y * w^2; tends to alpha^2 * lambda^2 * nx * ny in the paraxial limit.
double paraxial_product(const FovEyebox& fe);

struct TradeoffRow {
    int alpha = 1;
    double g = 0.0;
    double fov_x_deg = 0.0;
    double fov_y_deg = 0.0;
    double eyebox_mm = 0.0;
    double etendue = 0.0;  ///< alpha^2 * lambda^2 * nx * ny
};

std::vector<TradeoffRow> tradeoff_table(const EtendueParams& params, std::span<const double> g_values,
                                        std::span<const int> alphas);
/// Header `alpha,g_m,fov_x_deg,fov_y_deg,eyebox_mm,etendue_m2sr`.
std::string tradeoff_csv(const std::vector<TradeoffRow>& rows);

/// Incidence angle (degrees) of a collimated source displaced `spacing`
/// from the optical axis in front of a lens of focal length `focal`.
double illumination_angle_deg(double spacing, double focal);
/// First-order diffraction angle asin(lambda / p) in degrees.
double first_order_angle_deg(double wavelength, double pitch);

/// Intensity images on [0, 1]: amplitude^2 divided by the target's peak intensity.
struct IntensityPair {
    std::vector<double> reconstruction;
    std::vector<double> target;
};
IntensityPair normalized_intensities(const ViewImage& reconstruction, const ViewImage& target, double scale = 1.0);

/// 10 log10(1 / MSE) for images on [0, 1]; +inf when identical.
double psnr(std::span<const double> a, std::span<const double> b);
double psnr(const ViewImage& a, const ViewImage& b);

/// Mean SSIM over all fully contained 11x11 Gaussian windows (sigma 1.5,
/// K1 0.01, K2 0.03, data range 1).
double ssim(std::span<const double> a, std::span<const double> b, int nx, int ny);
double ssim(const ViewImage& a, const ViewImage& b);

struct ViewMetrics {
    double psnr_db = 0.0;
    double ssim = 0.0;
};
/// PSNR/SSIM of scale * reconstruction against target on normalized intensities.
ViewMetrics view_metrics(const ViewImage& reconstruction, const ViewImage& target, double scale = 1.0);

/// Formats a PSNR value for CSV/JSON ("inf" for identical images).
std::string format_db(double db);

} // namespace lfholo
