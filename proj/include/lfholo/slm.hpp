#pragma once

#include <filesystem>

#include "lfholo/field.hpp"

namespace lfholo {

/// Per-pixel phase (radians) at SLM-native resolution.
using PhasePattern = RealArray<struct PhasePatternTag>;

/// Pixel-aperture model used to produce higher diffraction orders: each SLM
/// pixel becomes a q x q block of subpixels, of which the central
/// round(fill_factor * q) per axis carry the pixel value.
struct HdoModel {
    int q = 1;
    double fill_factor = 1.0;

    void validate() const;
    /// Number of lit subpixels per axis and their offset inside the block.
    int active_width() const;
    int active_offset() const;
    /// Grid of the supersampled field: q times the samples, pitch / q.
    GridSpec supersampled(const GridSpec& slm_grid) const;
};

/// exp(i phi), unit magnitude at native resolution.
ComplexField phasor(const PhasePattern& phi);

/// Wraps to [-pi, pi) and snaps to the nearest of `levels` uniform levels
/// -pi + 2 pi m / levels. levels == 0 disables quantization (identity).
/// The backward pass is the identity (straight-through); see ForwardModel.
PhasePattern quantize_phase(const PhasePattern& phi, int levels = 16);

double wrap_phase(double phi);
double quantize_value(double phi, int levels);
/// Index m in [0, levels) of the level nearest to phi.
int level_index(double phi, int levels);

/// Zero-order-hold supersampling of a native field onto the HDO grid.
ComplexField supersample_hdo(const ComplexField& u, const HdoModel& model);

/// Adjoint of supersample_hdo: sums the lit subpixels of every block.
ComplexField supersample_hdo_adjoint(const ComplexField& g, const HdoModel& model, const GridSpec& slm_grid);

/// Per-axis spectral envelope of the zero-order hold at DFT bin k of the
/// supersampled axis (length n * q): sum over lit subpixels r of
/// exp(-2 pi i k r / (n q)), divided by sqrt(q).
cplx hdo_envelope(int k, int n, const HdoModel& model);

/// Writes `<stem>.png` (8-bit level index * 256/levels), `<stem>.f32`
/// (raw little-endian float32, row-major) and `<stem>.json` (grid, levels).
void export_phase(const PhasePattern& phi, int levels, const std::filesystem::path& stem);

/// Reads `<stem>.f32` + `<stem>.json`. Values are re-snapped to the level set
/// so the loaded pattern is exactly the quantized double-precision pattern.
PhasePattern import_phase(const std::filesystem::path& stem, int* levels_out = nullptr);

} // namespace lfholo
