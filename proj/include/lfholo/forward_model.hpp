#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "lfholo/baseline_id.hpp"
#include "lfholo/field.hpp"
#include "lfholo/fourier_plane.hpp"
#include "lfholo/illumination.hpp"
#include "lfholo/propagation.hpp"
#include "lfholo/slm.hpp"

namespace lfholo {

/// Everything that defines one display configuration.
struct SystemConfig {
    BaselineId baseline = BaselineId::V;
    GridSpec slm_grid;               ///< SLM-native sampling
    HdoModel hdo;
    SourceArray sources;
    std::vector<FourierMask> masks;  ///< one initial mask per frame
    int frames = 1;
    double z = 0.0;                  ///< SLM to image plane, meters
    double eyepiece_g = 0.0;
    PupilLayout pupils;
    int quant_levels = 16;           ///< 0 disables quantization
    std::optional<std::uint64_t> phase_screen_seed;  ///< baseline II
    bool optimize_source_weights = false;            ///< baseline V*

    GridSpec sim_grid() const { return hdo.supersampled(slm_grid); }
    bool masks_optimizable() const;
    /// Structural checks: frame counts, schedule/frames agreement, grids.
    void validate() const;
};

/// Parameters the optimizer owns: T phase patterns, T Fourier masks and
/// optional per-frame source weights (index t * J + j; empty = SourceSpec::weight).
struct HologramParams {
    std::vector<PhasePattern> phases;
    std::vector<FourierMask> masks;
    std::vector<double> source_weights;
};

struct ParamGradients {
    std::vector<std::vector<double>> phases;       ///< dL/dphi per frame (straight-through)
    std::vector<std::vector<double>> mask_logits;  ///< empty entries for non-optimizable masks
    std::vector<double> source_weights;            ///< t * J + j
};

/// Intermediate values of one view evaluation, kept for the backward pass.
struct ViewTape;
struct ViewTapeFrame;

/// Multi-source Fourier-modulated image formation. Precomputes the
/// propagation kernel, source tilts and fixed screens of a SystemConfig.
class ForwardModel {
public:
    explicit ForwardModel(SystemConfig cfg, Precision precision = Precision::f64, int jobs = 1);
    ~ForwardModel();
    ForwardModel(ForwardModel&&) noexcept;
    ForwardModel& operator=(ForwardModel&&) noexcept;

    const SystemConfig& config() const { return cfg_; }
    const GridSpec& sim_grid() const { return sim_grid_; }
    int source_count() const { return static_cast<int>(cfg_.sources.count()); }

    /// Field at the image plane for source j lit through the given realized
    /// Fourier mask, times the optional extra frequency mask:
    /// F^-1{ F{ hdo(e^{i phi}) * screen * tilt_j } * H(z) * P * M }.
    /// `phi` is used as given (no quantization).
    ComplexField field_at_image(const PhasePattern& phi, const FrequencyMask& mask_realized, int source,
                                const FrequencyMask* extra_freq_mask = nullptr, double weight = -1.0) const;

    /// sqrt((1/T) sum_t sum_{j active at t} |field|^2) through pupil p.
    ViewImage view_amplitude(const HologramParams& params, const PupilSpec& pupil) const;
    std::vector<ViewImage> full_lightfield(const HologramParams& params) const;

    std::shared_ptr<ViewTape> forward(const HologramParams& params, const PupilSpec& pupil) const;
    const ViewImage& amplitude(const ViewTape& tape) const;
    /// Backpropagates dL/d(view amplitude) to every parameter group.
    ParamGradients backward(const ViewTape& tape, const HologramParams& params, std::span<const double> dloss_damp) const;

    /// Realized full-resolution masks for params.masks, one per frame.
    std::vector<FrequencyMask> realized_masks(const HologramParams& params) const;

    double weight(const HologramParams& params, int frame, int source) const;

private:
    SystemConfig cfg_;
    Precision precision_;
    int jobs_;
    GridSpec sim_grid_;
    std::shared_ptr<const PropagationKernel> kernel_;
    std::vector<std::optional<BinShift>> shifts_;  ///< per source, fast path when set
    std::vector<ComplexField> tilts_;              ///< per source, unit weight
    std::optional<ComplexField> screen_;           ///< baseline II phase screen

    // Supersampled, screened SLM field of a (quantized) phase pattern.
    std::vector<cplx> modulated(const PhasePattern& psi) const;
    std::vector<cplx> source_spectrum(std::span<const cplx> modulated, std::span<const cplx> modulated_spectrum,
                                      int source) const;
    // Source spectrum sampled on the nonzero transfer bins of one frame.
    std::vector<cplx> spectrum_on_support(const ViewTapeFrame& frame, int source) const;
};

/// Convenience wrappers matching the operation names used elsewhere.
ViewImage view_amplitude(const std::vector<PhasePattern>& phis, const std::vector<FourierMask>& masks,
                         const PupilSpec& pupil, const SystemConfig& cfg);
std::vector<ViewImage> full_lightfield(const std::vector<PhasePattern>& phis, const std::vector<FourierMask>& masks,
                                       const SystemConfig& cfg);

/// Frequency occupancy of the source bands (fundamental orders; HDO
/// replicas added when include_hdo is set) and its ratio to one SLM band.
struct Coverage {
    FrequencyMask occupancy;
    double area = 0.0;   ///< cycles^2 / m^2
    double ratio = 0.0;  ///< area / single-source band area
};
Coverage eyebox_coverage(const SystemConfig& cfg, bool include_hdo = false);

/// Uniform random phase screen in [0, 2 pi) on `grid`, seeded.
ComplexField random_phase_screen(const GridSpec& grid, std::uint64_t seed);

} // namespace lfholo
