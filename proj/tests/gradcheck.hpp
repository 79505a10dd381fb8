#pragma once

#include <cmath>
#include <functional>
#include <random>

#include "fixtures.hpp"
#include "lfholo/optimizer.hpp"

namespace gradcheck {

/// ||analytic - numeric|| / ||numeric|| for each parameter group.
struct Errors {
    double phases = 0.0;
    double logits = 0.0;
    double scale = 0.0;
    double weights = 0.0;
};

inline double rel(const std::vector<double>& a, const std::vector<double>& b) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - b[i]) * (a[i] - b[i]);
        den += b[i] * b[i];
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

/// Central differences of mean((s A - T)^2) through one pupil against the
/// analytic gradients of view_gradients. Quantization must be disabled in
/// `inst` for the phase check to be meaningful.
inline Errors check(const fixture::Instance& inst, std::mt19937_64& rng, double h = 1e-6) {
    using namespace lfholo;
    const ForwardModel model(inst.cfg, Precision::f64);
    const PupilSpec& pupil = inst.cfg.pupils.pupils[rng() % inst.cfg.pupils.count()];
    ViewImage target(model.sim_grid());
    for (double& v : target.values()) {
        v = fixture::uniform(rng, 0.0, 1.0);
    }
    const double scale = fixture::uniform(rng, 0.5, 2.0);
    auto loss = [&](const HologramParams& p, double s) {
        return view_loss(model.view_amplitude(p, pupil).values(), target.values(), s);
    };
    const StepGradients g = view_gradients(model, inst.params, scale, target, pupil);

    Errors e;
    std::vector<double> ana;
    std::vector<double> num;
    for (std::size_t t = 0; t < inst.params.phases.size(); ++t) {
        for (std::size_t i = 0; i < inst.params.phases[t].size(); ++i) {
            HologramParams a = inst.params;
            HologramParams b = inst.params;
            a.phases[t].values()[i] += h;
            b.phases[t].values()[i] -= h;
            num.push_back((loss(a, scale) - loss(b, scale)) / (2 * h));
            ana.push_back(g.params.phases[t][i]);
        }
    }
    e.phases = rel(ana, num);

    ana.clear();
    num.clear();
    for (std::size_t t = 0; t < inst.params.masks.size(); ++t) {
        for (std::size_t i = 0; i < inst.params.masks[t].logits.size(); ++i) {
            HologramParams a = inst.params;
            HologramParams b = inst.params;
            a.masks[t].logits[i] += h;
            b.masks[t].logits[i] -= h;
            num.push_back((loss(a, scale) - loss(b, scale)) / (2 * h));
            ana.push_back(g.params.mask_logits[t][i]);
        }
    }
    e.logits = rel(ana, num);

    e.scale = rel({g.dloss_dscale}, {(loss(inst.params, scale + h) - loss(inst.params, scale - h)) / (2 * h)});

    ana.clear();
    num.clear();
    for (std::size_t i = 0; i < inst.params.source_weights.size(); ++i) {
        HologramParams a = inst.params;
        HologramParams b = inst.params;
        a.source_weights[i] += h;
        b.source_weights[i] -= h;
        num.push_back((loss(a, scale) - loss(b, scale)) / (2 * h));
        ana.push_back(g.params.source_weights[i]);
    }
    e.weights = rel(ana, num);
    return e;
}

} // namespace gradcheck
