#include "lfholo/illumination.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace lfholo {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

SourceSpec SourceSpec::from_sines(double sin_x, double sin_y, double wavelength, double weight) {
    const double s2 = sin_x * sin_x + sin_y * sin_y;
    if (!(s2 < 1.0)) {
        throw DomainError("SourceSpec: direction sines describe a non-propagating wave");
    }
    const double k = kTwoPi / wavelength;
    SourceSpec spec;
    spec.kx = k * sin_x;
    spec.ky = k * sin_y;
    spec.kz = k * std::sqrt(1.0 - s2);
    spec.weight = weight;
    return spec;
}

double SourceSpec::sin_x(double wavelength) const { return kx * wavelength / kTwoPi; }
double SourceSpec::sin_y(double wavelength) const { return ky * wavelength / kTwoPi; }
double SourceSpec::freq_x() const { return kx / kTwoPi; }
double SourceSpec::freq_y() const { return ky / kTwoPi; }

void SourceSpec::validate(double wavelength) const {
    if (!(kz > 0.0)) {
        throw DomainError("SourceSpec: backward-traveling wavevector (kz <= 0)");
    }
    const double k = kTwoPi / wavelength;
    const double mag2 = kx * kx + ky * ky + kz * kz;
    if (std::abs(mag2 - k * k) > 1e-12 * k * k) {
        throw DomainError("SourceSpec: |k| does not equal 2 pi / lambda");
    }
    if (!(weight >= 0.0)) {
        throw DomainError("SourceSpec: weight must be non-negative");
    }
}

std::vector<int> SourceArray::active_sources(int frame, int frames) const {
    std::vector<int> active;
    if (schedule == Schedule::simultaneous) {
        for (int j = 0; j < static_cast<int>(sources.size()); ++j) {
            active.push_back(j);
        }
        return active;
    }
    if (frames != static_cast<int>(sources.size())) {
        throw StructuralError("sequential schedule needs one frame per source");
    }
    active.push_back(frame);
    return active;
}

ComplexField tilt_field(const SourceSpec& spec, const GridSpec& grid) {
    spec.validate(grid.wavelength);
    if (spec.deviation && spec.deviation->grid() != grid) {
        throw StructuralError("tilt_field: deviation field grid does not match");
    }
    ComplexField out(grid);
    for (int y = 0; y < grid.ny; ++y) {
        const double py = spec.ky * y * grid.pitch_y;
        for (int x = 0; x < grid.nx; ++x) {
            cplx v = std::polar(spec.weight, spec.kx * x * grid.pitch_x + py);
            if (spec.deviation) {
                v *= (*spec.deviation)(x, y);
            }
            out(x, y) = v;
        }
    }
    return out;
}

SourceArray grid_angles_matching_orders(int alpha, double pitch_slm, double lambda_ref, double wavelength) {
    if (alpha < 1 || alpha % 2 == 0) {
        throw DomainError("grid_angles_matching_orders: alpha must be a positive odd integer");
    }
    if (!(pitch_slm > 0.0) || !(lambda_ref > 0.0) || !(wavelength > 0.0)) {
        throw DomainError("grid_angles_matching_orders: pitch and wavelengths must be positive");
    }
    const int half = (alpha - 1) / 2;
    SourceArray array;
    array.alpha = alpha;
    for (int my = -half; my <= half; ++my) {
        for (int mx = -half; mx <= half; ++mx) {
            const double sx = mx * lambda_ref / pitch_slm;
            const double sy = my * lambda_ref / pitch_slm;
            if (std::abs(sx) >= 1.0 || std::abs(sy) >= 1.0 || sx * sx + sy * sy >= 1.0) {
                throw DomainError("grid_angles_matching_orders: order (" + std::to_string(mx) + ", " +
                                  std::to_string(my) + ") needs sin(theta) >= 1");
            }
            array.sources.push_back(SourceSpec::from_sines(sx, sy, wavelength));
        }
    }
    return array;
}

double collimated_incidence_deg(double spacing, double focal) {
    return std::atan(spacing / focal) * 180.0 / std::numbers::pi;
}

std::optional<BinShift> exact_bin_shift(const SourceSpec& spec, const GridSpec& grid) {
    if (spec.deviation) {
        return std::nullopt;
    }
    const double bx = spec.freq_x() * grid.nx * grid.pitch_x;
    const double by = spec.freq_y() * grid.ny * grid.pitch_y;
    const double rx = std::round(bx);
    const double ry = std::round(by);
    if (std::abs(bx - rx) > 1e-9 || std::abs(by - ry) > 1e-9) {
        return std::nullopt;
    }
    return BinShift{static_cast<int>(rx), static_cast<int>(ry)};
}

} // namespace lfholo
