#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include <json.hpp>

#include "lfholo/analysis.hpp"
#include "lfholo/forward_model.hpp"
#include "lfholo/lightfield.hpp"

namespace lfholo {

struct Hyper {
    int iterations = 2000;
    double lr_phase = 2e-2;
    double lr_mask = 5e-2;
    double lr_scale = 1e-3;
    double lr_weights = 1e-2;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::uint64_t seed = 0;
    /// Initial s. When unset, s starts at the least-squares fit of the
    /// initial reconstruction to the whole target light field.
    std::optional<double> initial_scale = 1.0;
    /// Replace the learned s by the per-view least-squares optimum each step.
    bool closed_form_scale = false;
    bool optimize_phases = true;
    bool optimize_masks = true;
    bool optimize_scale = true;

    nlohmann::json to_json() const;
};

/// First-order moment estimates of one parameter group.
struct AdamGroup {
    double lr = 0.0;
    std::vector<double> m;
    std::vector<double> v;

    /// One bias-corrected update of x with gradient g at step number `step` (1-based).
    void step(std::span<double> x, std::span<const double> g, long step, const Hyper& hyper);
};

struct OptimizerState {
    HologramParams params;
    double scale = 1.0;
    long iteration = 0;
    std::mt19937_64 rng;
    std::vector<std::size_t> epoch_order;
    std::size_t epoch_position = 0;
    std::vector<AdamGroup> phase_moments;  ///< per frame
    std::vector<AdamGroup> mask_moments;   ///< per frame, empty vectors when frozen
    AdamGroup scale_moments;
    AdamGroup weight_moments;
};

struct OptimizeReport {
    std::vector<double> losses;
    std::vector<std::size_t> sampled_views;
    std::vector<ViewMetrics> view_metrics;  ///< final, per pupil
    double mean_psnr = 0.0;
    double mean_ssim = 0.0;
    double wall_seconds = 0.0;
    double final_scale = 1.0;
    std::uint64_t seed = 0;
    nlohmann::json hyper;
    nlohmann::json config;

    nlohmann::json to_json() const;
    /// `iteration,view,loss`
    std::string loss_csv() const;
};

/// Fresh state: phases uniform in [-pi, pi) from `hyper.seed`, masks and
/// weights from the model's configuration, s from hyper.initial_scale.
OptimizerState init_state(const ForwardModel& model, const LightFieldTarget& target, const Hyper& hyper);

/// Next pupil of the current epoch; reshuffles after every `count` draws.
std::size_t sample_view(OptimizerState& state, std::size_t count);

/// mean((s * A - target)^2) over one view.
double view_loss(std::span<const double> amplitude, std::span<const double> target, double scale);
/// Average of view_loss over every pupil of the layout.
double full_objective(const ForwardModel& model, const HologramParams& params, double scale,
                      const LightFieldTarget& target);
/// Least-squares s for the given amplitudes against targets.
double best_scale(std::span<const ViewImage> amplitudes, std::span<const ViewImage> targets);

/// Gradients of one view's loss with respect to every parameter group and s.
struct StepGradients {
    double loss = 0.0;
    double scale = 0.0;
    double dloss_dscale = 0.0;
    ParamGradients params;
};
StepGradients view_gradients(const ForwardModel& model, const HologramParams& params, double scale,
                             const ViewImage& target, const PupilSpec& pupil, bool closed_form_scale = false);

/// Samples a view, evaluates its loss, backpropagates and applies one update.
/// Throws NumericalError if the loss is not finite.
double stochastic_step(OptimizerState& state, const ForwardModel& model, const LightFieldTarget& target,
                       const Hyper& hyper, std::size_t* sampled = nullptr);

struct OptimizeResult {
    OptimizerState state;
    OptimizeReport report;
    std::vector<ViewImage> reconstructions;  ///< final, per pupil, already quantized
};

/// Runs hyper.iterations steps, hard-quantizes the final phases and evaluates
/// every view. Phases are left unchanged when iterations == 0. On a
/// non-finite loss `on_failure` sees the state before the error propagates.
OptimizeResult optimize(const ForwardModel& model, const LightFieldTarget& target, const Hyper& hyper,
                        const std::function<void(const OptimizerState&, const NumericalError&)>& on_failure = {});

/// Evaluates every pupil and fills report metrics.
void evaluate(const ForwardModel& model, const LightFieldTarget& target, OptimizeResult& result);

} // namespace lfholo
