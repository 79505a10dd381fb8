#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "lfholo/field.hpp"

namespace lfholo {

enum class MaskMode { none, aperture, fixed_random, optimizable_lowres };

/// Circular pass-band in the frequency plane, cycles/m.
struct Aperture {
    double fx = 0.0;
    double fy = 0.0;
    double radius = 0.0;
};

/// Amplitude display at the Fourier plane. Low-resolution modes are defined
/// on a native_nx x native_ny block grid covering the whole simulated band.
struct FourierMask {
    MaskMode mode = MaskMode::none;
    int native_nx = 0;
    int native_ny = 0;
    std::vector<double> logits;   ///< optimizable_lowres: amplitude = sigmoid(logit)
    std::vector<double> pattern;  ///< fixed_random: binary amplitudes, row-major
    Aperture aperture;            ///< aperture mode

    static FourierMask open();
    static FourierMask circular(const Aperture& aperture);
    /// Binary mask, each block open with probability `open_fraction`.
    static FourierMask fixed_random(int nx, int ny, std::uint64_t seed, double open_fraction = 0.5);
    static FourierMask optimizable(int nx, int ny, double initial_logit = 0.0);

    /// Block amplitudes at native resolution (low-resolution modes only).
    std::vector<double> native_amplitudes() const;
};

double sigmoid(double x);

/// Block edges along one centered axis of n samples split into m blocks:
/// block b spans [round(b n / m), round((b + 1) n / m)).
std::vector<int> block_edges(int n, int m);

/// Nearest-neighbour upsampling of block values onto `grid`'s frequency
/// samples (blocks laid out in centered order, result in DC-origin order).
FrequencyMask upsample_blocks(std::span<const double> native, int native_nx, int native_ny, const GridSpec& grid);

/// Adjoint of upsample_blocks: per-block sums of a DC-origin array.
std::vector<double> block_sums(std::span<const double> values, int native_nx, int native_ny, const GridSpec& grid);

/// Full-resolution amplitude in [0, 1] on the frequency grid of `grid`.
FrequencyMask realize_mask(const FourierMask& mask, const GridSpec& grid);

/// Chain rule through realize_mask: given dL/dP on the frequency grid,
/// returns dL/dlogits (block sums times sigmoid').
std::vector<double> mask_logit_gradient(const FourierMask& mask, const GridSpec& grid, std::span<const double> dloss_dmask);

/// Binary disk: 1 where (fx - cx)^2 + (fy - cy)^2 <= r^2 at the sample centre.
FrequencyMask disk_mask(const Aperture& disk, const GridSpec& grid);

/// Eyebox coordinate (m) to Fourier-plane frequency (cycles/m): x / (lambda g).
double eyebox_to_freq(double x_e, double g, double wavelength);
double freq_to_eyebox(double f, double g, double wavelength);

/// One viewpoint: a disk in eyebox coordinates behind an eyepiece of focal length g.
struct PupilSpec {
    double cx = 0.0;
    double cy = 0.0;
    double radius = 0.0;
    double g = 0.0;

    Aperture in_frequency(double wavelength) const;
};

/// V x V pupils equally spaced across an eyebox of width `eyebox_width`;
/// pupil index p = row * V + col, row along y.
struct PupilLayout {
    int views_per_axis = 1;
    double eyebox_width = 0.0;
    std::vector<PupilSpec> pupils;

    static PupilLayout uniform(int views_per_axis, double eyebox_width, double radius, double g);

    std::size_t count() const { return pupils.size(); }
    int row(std::size_t p) const { return static_cast<int>(p) / views_per_axis; }
    int col(std::size_t p) const { return static_cast<int>(p) % views_per_axis; }
    /// Offset of pupil p from the layout centre in pupil steps (may be half-integer for even V).
    double step_x(std::size_t p) const { return col(p) - (views_per_axis - 1) / 2.0; }
    double step_y(std::size_t p) const { return row(p) - (views_per_axis - 1) / 2.0; }
    double spacing() const { return eyebox_width / views_per_axis; }
};

/// Binary pupil mask on the frequency grid. Throws DomainError
/// ("degenerate pupil") if no sample falls inside.
FrequencyMask pupil_mask(const PupilSpec& spec, const GridSpec& grid);

/// Writes `<stem>.png` (centered display order), `<stem>.f32` and
/// `<stem>.json` for a mask at native or full resolution.
void export_mask(std::span<const double> values, int nx, int ny, const std::filesystem::path& stem,
                 const std::string& kind);

} // namespace lfholo
