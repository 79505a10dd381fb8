#pragma once

#include <cstdint>

#include "lfholo/baseline_id.hpp"
#include "lfholo/forward_model.hpp"

namespace lfholo {

/// Parameters shared by every configuration of a comparison.
struct BaseParams {
    GridSpec slm_grid;
    int q = 3;
    double fill_factor = 1.0;
    int alpha = 3;
    double lambda_ref = 0.0;  ///< 0: use slm_grid.wavelength
    double z = 2e-3;
    double eyepiece_g = 75e-3;
    int views_per_axis = 3;
    double pupil_radius = 2e-3;
    int mask_resolution = 20;
    std::uint64_t mask_seed = 1234;
    std::uint64_t phase_screen_seed = 4321;
    int quant_levels = 16;
    int frames = 1;  ///< time-multiplexed frames for V / V*

    double reference_wavelength() const { return lambda_ref > 0.0 ? lambda_ref : slm_grid.wavelength; }
    /// alpha * g * lambda / p: the eyebox spanned by the matched-order sources.
    double expanded_eyebox() const;
};

/// Builds the SystemConfig of one baseline. Only the fields that tell the
/// baselines apart depend on `id`. Throws ConfigError on unsupported input.
SystemConfig make_config(BaselineId id, const BaseParams& base);

/// Radius (cycles/m) of the circular filter passing one SLM band.
double single_band_radius(const GridSpec& slm_grid);

} // namespace lfholo
