#pragma once

#include <optional>
#include <vector>

#include "lfholo/field.hpp"

namespace lfholo {

/// One collimated source. The wavevector is stored in rad/m; `deviation`
/// is an optional complex field multiplying the ideal plane wave.
struct SourceSpec {
    double kx = 0.0;
    double ky = 0.0;
    double kz = 0.0;
    double weight = 1.0;
    std::optional<ComplexField> deviation;

    /// Builds the wavevector from direction sines at the given wavelength.
    /// Throws DomainError if sx^2 + sy^2 >= 1.
    static SourceSpec from_sines(double sin_x, double sin_y, double wavelength, double weight = 1.0);

    double sin_x(double wavelength) const;
    double sin_y(double wavelength) const;

    /// Spatial-frequency offset (cycles/m) that this tilt imprints on a spectrum.
    double freq_x() const;
    double freq_y() const;

    /// Throws DomainError unless kz > 0, |k| = 2 pi / lambda (1e-12 rel) and weight >= 0.
    void validate(double wavelength) const;
};

enum class Schedule { simultaneous, sequential };

struct SourceArray {
    std::vector<SourceSpec> sources;
    Schedule schedule = Schedule::simultaneous;
    int alpha = 1;  ///< sources per axis for grid layouts

    std::size_t count() const { return sources.size(); }

    /// Indices of the sources lit during frame t of `frames`.
    std::vector<int> active_sources(int frame, int frames) const;
};

/// weight * u_src(x, y) * exp(i (kx x + ky y)) with x = ix * pitch_x.
ComplexField tilt_field(const SourceSpec& spec, const GridSpec& grid);

/// alpha x alpha sources whose tilts match the +-m-th diffraction orders of
/// an SLM with the given pitch at lambda_ref: sin(theta_m) = m lambda_ref / pitch.
/// `wavelength` is the wavelength the sources actually emit.
SourceArray grid_angles_matching_orders(int alpha, double pitch_slm, double lambda_ref, double wavelength);
inline SourceArray grid_angles_matching_orders(int alpha, double pitch_slm, double lambda_ref) {
    return grid_angles_matching_orders(alpha, pitch_slm, lambda_ref, lambda_ref);
}

/// Incidence angle (degrees) of a source displaced `spacing` from the axis of
/// a collimating lens of focal length `focal`.
double collimated_incidence_deg(double spacing, double focal);

/// Integer DFT-bin offset of a source tilt on `grid`, if the tilt lands
/// exactly (within 1e-9 bins) on a bin and the source is ideal.
struct BinShift {
    int dx = 0;
    int dy = 0;
};
std::optional<BinShift> exact_bin_shift(const SourceSpec& spec, const GridSpec& grid);

} // namespace lfholo
