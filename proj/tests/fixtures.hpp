#pragma once

#include <random>

#include "lfholo/baselines.hpp"
#include "lfholo/forward_model.hpp"

namespace fixture {

struct Instance {
    lfholo::SystemConfig cfg;
    lfholo::HologramParams params;
};

struct InstanceShape {
    int n = 6;          // SLM pixels per axis
    int q = 2;
    int sources = 2;
    int frames = 1;
    int views = 2;      // pupils per axis
    bool sequential = false;
    bool on_bin = false;
    bool weights = false;
    int levels = 16;
    double fill = 1.0;
};

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Random small configuration with optimizable low-resolution masks, random
/// logits, phases and (optionally) per-frame source weights.
inline Instance random_instance(std::mt19937_64& rng, const InstanceShape& s) {
    const double pitch = 8e-6;
    const double lambda = 633e-9;
    lfholo::SystemConfig cfg;
    cfg.baseline = lfholo::BaselineId::V;
    cfg.slm_grid = lfholo::GridSpec::square(s.n, pitch, lambda);
    cfg.hdo = {s.q, s.fill};
    cfg.z = uniform(rng, 5e-6, 50e-6);
    cfg.eyepiece_g = 10e-3;
    cfg.quant_levels = s.levels;
    cfg.frames = s.sequential ? s.sources : s.frames;
    cfg.sources.schedule = s.sequential ? lfholo::Schedule::sequential : lfholo::Schedule::simultaneous;
    std::uniform_int_distribution<int> order(-(s.q - 1) / 2, (s.q - 1) / 2);
    for (int j = 0; j < s.sources; ++j) {
        double sx;
        double sy;
        if (s.on_bin) {
            sx = order(rng) * lambda / pitch;
            sy = order(rng) * lambda / pitch;
        } else {
            sx = uniform(rng, -0.6, 0.6) * lambda / pitch;
            sy = uniform(rng, -0.6, 0.6) * lambda / pitch;
        }
        cfg.sources.sources.push_back(lfholo::SourceSpec::from_sines(sx, sy, lambda, uniform(rng, 0.5, 1.5)));
    }
    const double band = cfg.eyepiece_g * lambda / pitch;
    cfg.pupils = lfholo::PupilLayout::uniform(s.views, band, 0.4 * band, cfg.eyepiece_g);
    std::normal_distribution<double> normal;
    for (int t = 0; t < cfg.frames; ++t) {
        cfg.masks.push_back(lfholo::FourierMask::optimizable(3, 3));
    }
    cfg.optimize_source_weights = s.weights;
    cfg.validate();

    Instance inst{cfg, {}};
    for (int t = 0; t < cfg.frames; ++t) {
        std::vector<double> phi(cfg.slm_grid.size());
        for (double& v : phi) {
            v = uniform(rng, -3.0, 3.0);
        }
        inst.params.phases.emplace_back(cfg.slm_grid, std::move(phi));
        lfholo::FourierMask m = cfg.masks[t];
        for (double& l : m.logits) {
            l = normal(rng);
        }
        inst.params.masks.push_back(m);
    }
    if (s.weights) {
        for (int i = 0; i < cfg.frames * s.sources; ++i) {
            inst.params.source_weights.push_back(uniform(rng, 0.5, 1.5));
        }
    }
    return inst;
}

/// Desk-scale base parameters used by the comparison runs.
inline lfholo::BaseParams desk_params() {
    lfholo::BaseParams b;
    b.slm_grid = lfholo::GridSpec::square(64, 10.8e-6, 632.8e-9);
    return b;
}

} // namespace fixture
