#include "lfholo/baselines.hpp"

#include <algorithm>
#include <string>

namespace lfholo {

std::string to_string(BaselineId id) {
    switch (id) {
    case BaselineId::I: return "I";
    case BaselineId::II: return "II";
    case BaselineId::III: return "III";
    case BaselineId::IV: return "IV";
    case BaselineId::V: return "V";
    case BaselineId::Vstar: return "V*";
    case BaselineId::VI: return "VI";
    case BaselineId::VII: return "VII";
    }
    return "?";
}

BaselineId parse_baseline(std::string_view text) {
    for (BaselineId id : kAllBaselines) {
        if (text == to_string(id)) {
            return id;
        }
    }
    if (text == "Vstar") {
        return BaselineId::Vstar;
    }
    throw ConfigError("unknown baseline '" + std::string(text) + "' (expected I, II, III, IV, V, V*, VI or VII)");
}

double BaseParams::expanded_eyebox() const {
    return alpha * eyepiece_g * slm_grid.wavelength / slm_grid.pitch_x;
}

double single_band_radius(const GridSpec& slm_grid) { return 0.5 / slm_grid.pitch_x; }

SystemConfig make_config(BaselineId id, const BaseParams& base) {
    try {
        base.slm_grid.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    if (base.alpha < 1 || base.alpha % 2 == 0) {
        throw ConfigError("alpha must be a positive odd integer");
    }
    if (base.q < base.alpha) {
        throw ConfigError("HDO supersampling q must be >= alpha so the shifted bands fit the simulation grid");
    }
    if (base.frames < 1) {
        throw ConfigError("frames must be >= 1");
    }
    if (base.slm_grid.pitch_x != base.slm_grid.pitch_y) {
        throw ConfigError("baseline configurations assume square SLM pixels");
    }

    SystemConfig cfg;
    cfg.baseline = id;
    cfg.slm_grid = base.slm_grid;
    cfg.hdo = HdoModel{base.q, base.fill_factor};
    cfg.z = base.z;
    cfg.eyepiece_g = base.eyepiece_g;
    cfg.quant_levels = base.quant_levels;
    cfg.pupils = PupilLayout::uniform(base.views_per_axis, base.expanded_eyebox(), base.pupil_radius, base.eyepiece_g);

    const GridSpec sim = cfg.sim_grid();
    if (base.mask_resolution < 1 || base.mask_resolution > std::min(sim.nx, sim.ny)) {
        throw ConfigError("mask resolution must lie in [1, simulation grid size]");
    }

    const bool single = id == BaselineId::I || id == BaselineId::II;
    try {
        cfg.sources = single ? grid_angles_matching_orders(1, base.slm_grid.pitch_x, base.reference_wavelength(),
                                                           base.slm_grid.wavelength)
                             : grid_angles_matching_orders(base.alpha, base.slm_grid.pitch_x,
                                                           base.reference_wavelength(), base.slm_grid.wavelength);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    const int sources = static_cast<int>(cfg.sources.count());
    const double band = single_band_radius(base.slm_grid);

    switch (id) {
    case BaselineId::I:
        cfg.frames = 1;
        cfg.masks = {FourierMask::circular({0.0, 0.0, band})};
        break;
    case BaselineId::II:
        cfg.frames = 1;
        cfg.masks = {FourierMask::open()};
        cfg.phase_screen_seed = base.phase_screen_seed;
        break;
    case BaselineId::III:
        cfg.frames = 1;
        cfg.masks = {FourierMask::open()};
        break;
    case BaselineId::IV:
        cfg.frames = 1;
        cfg.masks = {FourierMask::fixed_random(base.mask_resolution, base.mask_resolution, base.mask_seed)};
        break;
    case BaselineId::V:
    case BaselineId::Vstar:
        cfg.frames = base.frames;
        cfg.masks.assign(base.frames, FourierMask::optimizable(base.mask_resolution, base.mask_resolution));
        cfg.optimize_source_weights = id == BaselineId::Vstar;
        break;
    case BaselineId::VI:
        cfg.sources.schedule = Schedule::sequential;
        cfg.frames = sources;
        cfg.masks.assign(sources, FourierMask::open());
        break;
    case BaselineId::VII:
        cfg.sources.schedule = Schedule::sequential;
        cfg.frames = sources;
        for (const SourceSpec& s : cfg.sources.sources) {
            cfg.masks.push_back(FourierMask::circular({s.freq_x(), s.freq_y(), band}));
        }
        break;
    }
    cfg.validate();
    return cfg;
}

} // namespace lfholo
