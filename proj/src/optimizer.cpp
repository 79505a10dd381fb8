#include "lfholo/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fmt/format.h>
#include <numbers>
#include <numeric>
#include <sstream>

namespace lfholo {

using nlohmann::json;

json Hyper::to_json() const {
    json j = {{"iterations", iterations},
              {"lr_phase", lr_phase},
              {"lr_mask", lr_mask},
              {"lr_scale", lr_scale},
              {"lr_weights", lr_weights},
              {"beta1", beta1},
              {"beta2", beta2},
              {"epsilon", epsilon},
              {"seed", seed},
              {"closed_form_scale", closed_form_scale},
              {"optimize_phases", optimize_phases},
              {"optimize_masks", optimize_masks},
              {"optimize_scale", optimize_scale}};
    j["initial_scale"] = initial_scale ? json(*initial_scale) : json("auto");
    return j;
}

void AdamGroup::step(std::span<double> x, std::span<const double> g, long step, const Hyper& hyper) {
    if (x.size() != g.size()) {
        throw StructuralError("AdamGroup: parameter and gradient sizes differ");
    }
    if (m.size() != x.size()) {
        m.assign(x.size(), 0.0);
        v.assign(x.size(), 0.0);
    }
    const double c1 = 1.0 - std::pow(hyper.beta1, static_cast<double>(step));
    const double c2 = 1.0 - std::pow(hyper.beta2, static_cast<double>(step));
    for (std::size_t i = 0; i < x.size(); ++i) {
        m[i] = hyper.beta1 * m[i] + (1.0 - hyper.beta1) * g[i];
        v[i] = hyper.beta2 * v[i] + (1.0 - hyper.beta2) * g[i] * g[i];
        x[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + hyper.epsilon);
    }
}

double view_loss(std::span<const double> amplitude, std::span<const double> target, double scale) {
    if (amplitude.size() != target.size() || target.empty()) {
        throw StructuralError("view_loss: image sizes differ");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < target.size(); ++i) {
        const double r = scale * amplitude[i] - target[i];
        sum += r * r;
    }
    return sum / static_cast<double>(target.size());
}

double best_scale(std::span<const ViewImage> amplitudes, std::span<const ViewImage> targets) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t p = 0; p < amplitudes.size(); ++p) {
        const auto a = amplitudes[p].values();
        const auto t = targets[p].values();
        for (std::size_t i = 0; i < a.size(); ++i) {
            num += a[i] * t[i];
            den += a[i] * a[i];
        }
    }
    return den > 0.0 ? num / den : 1.0;
}

namespace {

void check_target(const ForwardModel& model, const LightFieldTarget& target) {
    const PupilLayout& layout = model.config().pupils;
    if (target.count() != layout.count()) {
        throw StructuralError(fmt::format("target has {} views but the pupil layout has {}", target.count(),
                                          layout.count()));
    }
    if (!(target.grid() == model.sim_grid())) {
        throw StructuralError("target grid does not match the simulation grid");
    }
}

bool masks_trainable(const FourierMask& mask, const Hyper& hyper) {
    return hyper.optimize_masks && mask.mode == MaskMode::optimizable_lowres;
}

} // namespace

double full_objective(const ForwardModel& model, const HologramParams& params, double scale,
                      const LightFieldTarget& target) {
    check_target(model, target);
    const auto views = model.full_lightfield(params);
    double sum = 0.0;
    for (std::size_t p = 0; p < views.size(); ++p) {
        sum += view_loss(views[p].values(), target.views[p].values(), scale);
    }
    return sum / static_cast<double>(views.size());
}

OptimizerState init_state(const ForwardModel& model, const LightFieldTarget& target, const Hyper& hyper) {
    check_target(model, target);
    const SystemConfig& cfg = model.config();
    OptimizerState state;
    state.rng.seed(hyper.seed);
    for (int t = 0; t < cfg.frames; ++t) {
        std::vector<double> phi(cfg.slm_grid.size());
        for (double& v : phi) {
            v = (static_cast<double>(state.rng() >> 11) * 0x1.0p-53 - 0.5) * 2.0 * std::numbers::pi;
        }
        state.params.phases.emplace_back(cfg.slm_grid, std::move(phi));
    }
    state.params.masks = cfg.masks;
    if (cfg.optimize_source_weights) {
        for (int t = 0; t < cfg.frames; ++t) {
            for (const SourceSpec& s : cfg.sources.sources) {
                state.params.source_weights.push_back(s.weight);
            }
        }
    }
    if (hyper.initial_scale) {
        if (!(*hyper.initial_scale > 0.0)) {
            throw ConfigError("initial scale must be positive");
        }
        state.scale = *hyper.initial_scale;
    } else {
        state.scale = best_scale(model.full_lightfield(state.params), target.views);
    }
    state.phase_moments.assign(cfg.frames, AdamGroup{hyper.lr_phase, {}, {}});
    state.mask_moments.assign(cfg.frames, AdamGroup{hyper.lr_mask, {}, {}});
    state.scale_moments = AdamGroup{hyper.lr_scale, {}, {}};
    state.weight_moments = AdamGroup{hyper.lr_weights, {}, {}};
    return state;
}

std::size_t sample_view(OptimizerState& state, std::size_t count) {
    if (count == 0) {
        throw DomainError("sample_view: no views");
    }
    if (state.epoch_order.size() != count || state.epoch_position >= count) {
        state.epoch_order.resize(count);
        std::iota(state.epoch_order.begin(), state.epoch_order.end(), std::size_t{0});
        std::shuffle(state.epoch_order.begin(), state.epoch_order.end(), state.rng);
        state.epoch_position = 0;
    }
    return state.epoch_order[state.epoch_position++];
}

StepGradients view_gradients(const ForwardModel& model, const HologramParams& params, double scale,
                             const ViewImage& target, const PupilSpec& pupil, bool closed_form_scale) {
    const auto tape = model.forward(params, pupil);
    const ViewImage& amp = model.amplitude(*tape);
    const auto a = amp.values();
    const auto t = target.values();
    StepGradients out;
    out.scale = closed_form_scale ? best_scale(std::span(&amp, 1), std::span(&target, 1)) : scale;
    out.loss = view_loss(a, t, out.scale);
    if (!std::isfinite(out.loss)) {
        return out;
    }
    const double inv_n = 1.0 / static_cast<double>(a.size());
    std::vector<double> dloss_damp(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double r = out.scale * a[i] - t[i];
        dloss_damp[i] = 2.0 * out.scale * r * inv_n;
        out.dloss_dscale += 2.0 * r * a[i] * inv_n;
    }
    out.params = model.backward(*tape, params, dloss_damp);
    return out;
}

double stochastic_step(OptimizerState& state, const ForwardModel& model, const LightFieldTarget& target,
                       const Hyper& hyper, std::size_t* sampled) {
    const PupilLayout& layout = model.config().pupils;
    const std::size_t p = sample_view(state, layout.count());
    if (sampled) {
        *sampled = p;
    }
    StepGradients g =
        view_gradients(model, state.params, state.scale, target.views[p], layout.pupils[p], hyper.closed_form_scale);
    if (!std::isfinite(g.loss)) {
        throw NumericalError(fmt::format("non-finite loss at iteration {} (view {}, scale {})", state.iteration, p,
                                         state.scale));
    }
    const long step = ++state.iteration;
    HologramParams& params = state.params;
    if (hyper.optimize_phases) {
        for (std::size_t t = 0; t < params.phases.size(); ++t) {
            state.phase_moments[t].step(params.phases[t].values(), g.params.phases[t], step, hyper);
            for (double& v : params.phases[t].values()) {
                v = wrap_phase(v);
            }
        }
    }
    for (std::size_t t = 0; t < params.masks.size(); ++t) {
        if (masks_trainable(params.masks[t], hyper) && !g.params.mask_logits[t].empty()) {
            state.mask_moments[t].step(params.masks[t].logits, g.params.mask_logits[t], step, hyper);
        }
    }
    if (model.config().optimize_source_weights && !params.source_weights.empty()) {
        state.weight_moments.step(params.source_weights, g.params.source_weights, step, hyper);
        for (double& w : params.source_weights) {
            w = std::max(w, 0.0);
        }
    }
    if (hyper.closed_form_scale) {
        state.scale = g.scale;
    } else if (hyper.optimize_scale) {
        double s = state.scale;
        const double ds = g.dloss_dscale;
        state.scale_moments.step(std::span(&s, 1), std::span(&ds, 1), step, hyper);
        state.scale = std::max(s, 1e-12);
    }
    return g.loss;
}

void evaluate(const ForwardModel& model, const LightFieldTarget& target, OptimizeResult& result) {
    result.reconstructions = model.full_lightfield(result.state.params);
    OptimizeReport& report = result.report;
    report.view_metrics.clear();
    double sum_psnr = 0.0;
    double sum_ssim = 0.0;
    for (std::size_t p = 0; p < result.reconstructions.size(); ++p) {
        const ViewMetrics m = view_metrics(result.reconstructions[p], target.views[p], result.state.scale);
        report.view_metrics.push_back(m);
        sum_psnr += m.psnr_db;
        sum_ssim += m.ssim;
    }
    report.mean_psnr = sum_psnr / static_cast<double>(report.view_metrics.size());
    report.mean_ssim = sum_ssim / static_cast<double>(report.view_metrics.size());
    report.final_scale = result.state.scale;
}

OptimizeResult optimize(const ForwardModel& model, const LightFieldTarget& target, const Hyper& hyper,
                        const std::function<void(const OptimizerState&, const NumericalError&)>& on_failure) {
    if (hyper.iterations < 0) {
        throw ConfigError("iterations must be non-negative");
    }
    const auto start = std::chrono::steady_clock::now();
    OptimizeResult result{init_state(model, target, hyper), {}, {}};
    OptimizeReport& report = result.report;
    report.seed = hyper.seed;
    report.hyper = hyper.to_json();
    report.losses.reserve(hyper.iterations);
    try {
        for (int it = 0; it < hyper.iterations; ++it) {
            std::size_t p = 0;
            report.losses.push_back(stochastic_step(result.state, model, target, hyper, &p));
            report.sampled_views.push_back(p);
        }
    } catch (const NumericalError& e) {
        if (on_failure) {
            on_failure(result.state, e);
        }
        throw;
    }
    if (hyper.iterations > 0) {
        const int levels = model.config().quant_levels;
        for (PhasePattern& phi : result.state.params.phases) {
            phi = quantize_phase(phi, levels);
        }
        if (hyper.closed_form_scale) {
            result.state.scale = best_scale(model.full_lightfield(result.state.params), target.views);
        }
    }
    evaluate(model, target, result);
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

json OptimizeReport::to_json() const {
    json views = json::array();
    for (std::size_t p = 0; p < view_metrics.size(); ++p) {
        views.push_back({{"view", p}, {"psnr_db", format_db(view_metrics[p].psnr_db)}, {"ssim", view_metrics[p].ssim}});
    }
    return {{"iterations", losses.size()},
            {"seed", seed},
            {"final_loss", losses.empty() ? json(nullptr) : json(losses.back())},
            {"final_scale", final_scale},
            {"mean_psnr_db", format_db(mean_psnr)},
            {"mean_ssim", mean_ssim},
            {"views", views},
            {"wall_seconds", wall_seconds},
            {"hyper", hyper},
            {"config", config}};
}

std::string OptimizeReport::loss_csv() const {
    std::ostringstream out;
    out << "iteration,view,loss\n";
    for (std::size_t i = 0; i < losses.size(); ++i) {
        out << fmt::format("{},{},{:.17g}\n", i, sampled_views[i], losses[i]);
    }
    return out.str();
}

} // namespace lfholo
