#include "lfholo/run_config.hpp"

#include <fstream>

#include "lfholo/io.hpp"
#include "strict_json.hpp"

namespace lfholo {

using nlohmann::json;
using detail::boolean;
using detail::integer;
using detail::number;
using detail::reject_unknown;
using detail::text;
using detail::unsigned_integer;

BaseParams default_base_params() {
    BaseParams base;
    base.slm_grid = GridSpec::square(64, 10.8e-6, 632.8e-9);
    return base;
}

Precision parse_precision(const std::string& name) {
    if (name == "f64") {
        return Precision::f64;
    }
    if (name == "f32") {
        return Precision::f32;
    }
    throw ConfigError("precision must be 'f32' or 'f64', got '" + name + "'");
}

std::string to_string(Precision precision) { return precision == Precision::f32 ? "f32" : "f64"; }

BaseParams parse_base_params(const json& j) {
    const std::string where = "system";
    reject_unknown(j,
                   {"slm", "q", "fill_factor", "alpha", "lambda_ref", "z", "eyepiece_g", "views_per_axis",
                    "pupil_radius", "mask_resolution", "mask_seed", "phase_screen_seed", "quant_levels", "frames"},
                   where);
    BaseParams base = default_base_params();
    if (j.contains("slm")) {
        const json& s = j.at("slm");
        reject_unknown(s, {"nx", "ny", "pitch", "wavelength"}, where + ".slm");
        GridSpec& g = base.slm_grid;
        g.nx = integer(s, "nx", g.nx, where + ".slm");
        g.ny = integer(s, "ny", g.ny, where + ".slm");
        g.pitch_x = g.pitch_y = number(s, "pitch", g.pitch_x, where + ".slm");
        g.wavelength = number(s, "wavelength", g.wavelength, where + ".slm");
        try {
            g.validate();
        } catch (const DomainError& e) {
            throw ConfigError(std::string("system.slm: ") + e.what());
        }
    }
    base.q = integer(j, "q", base.q, where);
    base.fill_factor = number(j, "fill_factor", base.fill_factor, where);
    base.alpha = integer(j, "alpha", base.alpha, where);
    base.lambda_ref = number(j, "lambda_ref", base.lambda_ref, where);
    base.z = number(j, "z", base.z, where);
    base.eyepiece_g = number(j, "eyepiece_g", base.eyepiece_g, where);
    base.views_per_axis = integer(j, "views_per_axis", base.views_per_axis, where);
    base.pupil_radius = number(j, "pupil_radius", base.pupil_radius, where);
    base.mask_resolution = integer(j, "mask_resolution", base.mask_resolution, where);
    base.mask_seed = unsigned_integer(j, "mask_seed", base.mask_seed, where);
    base.phase_screen_seed = unsigned_integer(j, "phase_screen_seed", base.phase_screen_seed, where);
    base.quant_levels = integer(j, "quant_levels", base.quant_levels, where);
    base.frames = integer(j, "frames", base.frames, where);
    if (base.views_per_axis < 1) {
        throw ConfigError("system.views_per_axis must be >= 1");
    }
    if (!(base.eyepiece_g > 0.0) || !(base.pupil_radius > 0.0)) {
        throw ConfigError("system.eyepiece_g and system.pupil_radius must be positive");
    }
    if (base.quant_levels == 1 || base.quant_levels < 0) {
        throw ConfigError("system.quant_levels must be 0 (off) or >= 2");
    }
    return base;
}

json base_params_to_json(const BaseParams& base) {
    return {{"slm",
             {{"nx", base.slm_grid.nx},
              {"ny", base.slm_grid.ny},
              {"pitch", base.slm_grid.pitch_x},
              {"wavelength", base.slm_grid.wavelength}}},
            {"q", base.q},
            {"fill_factor", base.fill_factor},
            {"alpha", base.alpha},
            {"lambda_ref", base.lambda_ref},
            {"z", base.z},
            {"eyepiece_g", base.eyepiece_g},
            {"views_per_axis", base.views_per_axis},
            {"pupil_radius", base.pupil_radius},
            {"mask_resolution", base.mask_resolution},
            {"mask_seed", base.mask_seed},
            {"phase_screen_seed", base.phase_screen_seed},
            {"quant_levels", base.quant_levels},
            {"frames", base.frames}};
}

namespace {

Hyper parse_hyper(const json& j) {
    const std::string where = "optimizer";
    reject_unknown(j,
                   {"iterations", "lr_phase", "lr_mask", "lr_scale", "lr_weights", "beta1", "beta2", "epsilon",
                    "initial_scale", "closed_form_scale", "optimize_phases", "optimize_masks", "optimize_scale"},
                   where);
    Hyper h;
    h.iterations = integer(j, "iterations", h.iterations, where);
    if (h.iterations < 0) {
        throw ConfigError("optimizer.iterations must be >= 0");
    }
    h.lr_phase = number(j, "lr_phase", h.lr_phase, where);
    h.lr_mask = number(j, "lr_mask", h.lr_mask, where);
    h.lr_scale = number(j, "lr_scale", h.lr_scale, where);
    h.lr_weights = number(j, "lr_weights", h.lr_weights, where);
    h.beta1 = number(j, "beta1", h.beta1, where);
    h.beta2 = number(j, "beta2", h.beta2, where);
    h.epsilon = number(j, "epsilon", h.epsilon, where);
    if (j.contains("initial_scale")) {
        const json& s = j.at("initial_scale");
        if (s.is_string() && s.get<std::string>() == "auto") {
            h.initial_scale.reset();
        } else if (s.is_number()) {
            h.initial_scale = s.get<double>();
            if (!(*h.initial_scale > 0.0)) {
                throw ConfigError("optimizer.initial_scale must be positive");
            }
        } else {
            throw ConfigError("optimizer.initial_scale: expected a positive number or \"auto\"");
        }
    }
    h.closed_form_scale = boolean(j, "closed_form_scale", h.closed_form_scale, where);
    h.optimize_phases = boolean(j, "optimize_phases", h.optimize_phases, where);
    h.optimize_masks = boolean(j, "optimize_masks", h.optimize_masks, where);
    h.optimize_scale = boolean(j, "optimize_scale", h.optimize_scale, where);
    return h;
}

json hyper_to_json(const Hyper& h) {
    json j = h.to_json();
    j.erase("seed");
    return j;
}

} // namespace

RunConfig parse_run_config(const json& j) {
    reject_unknown(j, {"baseline", "system", "optimizer", "scene", "target", "output", "seed", "precision", "jobs"},
                   "config");
    RunConfig cfg;
    if (!j.contains("baseline") || !j.at("baseline").is_string()) {
        throw ConfigError("config.baseline: expected one of \"I\", \"II\", \"III\", \"IV\", \"V\", \"V*\", \"VI\", \"VII\"");
    }
    cfg.baseline = parse_baseline(j.at("baseline").get<std::string>());
    cfg.base = parse_base_params(j.value("system", json::object()));
    cfg.hyper = parse_hyper(j.value("optimizer", json::object()));
    if (j.contains("scene")) {
        cfg.scene = scene_from_json(j.at("scene"));
    }
    if (j.contains("target")) {
        cfg.target_dir = text(j, "target", "", "config");
    }
    if (cfg.scene && cfg.target_dir) {
        throw ConfigError("config: give either 'scene' or 'target', not both");
    }
    cfg.output = text(j, "output", cfg.output.string(), "config");
    cfg.seed = unsigned_integer(j, "seed", cfg.seed, "config");
    cfg.hyper.seed = cfg.seed;
    cfg.precision = parse_precision(text(j, "precision", "f64", "config"));
    cfg.jobs = integer(j, "jobs", cfg.jobs, "config");
    if (cfg.jobs < 1) {
        throw ConfigError("config.jobs must be >= 1");
    }
    return cfg;
}

json read_config_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

RunConfig load_run_config(const std::filesystem::path& path) { return parse_run_config(read_config_json(path)); }

json run_config_to_json(const RunConfig& cfg) {
    json j = {{"baseline", to_string(cfg.baseline)},
              {"system", base_params_to_json(cfg.base)},
              {"optimizer", hyper_to_json(cfg.hyper)},
              {"output", cfg.output.string()},
              {"seed", cfg.seed},
              {"precision", to_string(cfg.precision)},
              {"jobs", cfg.jobs}};
    if (cfg.scene) {
        j["scene"] = scene_to_json(*cfg.scene);
    }
    if (cfg.target_dir) {
        j["target"] = cfg.target_dir->string();
    }
    return j;
}

namespace {

const char* to_string(MaskMode mode) {
    switch (mode) {
    case MaskMode::none: return "none";
    case MaskMode::aperture: return "aperture";
    case MaskMode::fixed_random: return "fixed_random";
    case MaskMode::optimizable_lowres: return "optimizable_lowres";
    }
    return "?";
}

} // namespace

json system_to_json(const SystemConfig& cfg) {
    json sources = json::array();
    for (const SourceSpec& s : cfg.sources.sources) {
        sources.push_back({{"sin_x", s.sin_x(cfg.slm_grid.wavelength)},
                           {"sin_y", s.sin_y(cfg.slm_grid.wavelength)},
                           {"weight", s.weight}});
    }
    json masks = json::array();
    for (const FourierMask& m : cfg.masks) {
        json mj = {{"mode", to_string(m.mode)}, {"native_nx", m.native_nx}, {"native_ny", m.native_ny}};
        if (m.mode == MaskMode::aperture) {
            mj["aperture"] = {{"fx", m.aperture.fx}, {"fy", m.aperture.fy}, {"radius", m.aperture.radius}};
        }
        masks.push_back(mj);
    }
    json j = {{"baseline", to_string(cfg.baseline)},
              {"slm_grid", io::grid_to_json(cfg.slm_grid)},
              {"sim_grid", io::grid_to_json(cfg.sim_grid())},
              {"hdo", {{"q", cfg.hdo.q}, {"fill_factor", cfg.hdo.fill_factor}}},
              {"sources",
               {{"schedule", cfg.sources.schedule == Schedule::sequential ? "sequential" : "simultaneous"},
                {"alpha", cfg.sources.alpha},
                {"list", sources}}},
              {"masks", masks},
              {"frames", cfg.frames},
              {"z", cfg.z},
              {"eyepiece_g", cfg.eyepiece_g},
              {"pupils", layout_to_json(cfg.pupils)},
              {"quant_levels", cfg.quant_levels},
              {"optimize_source_weights", cfg.optimize_source_weights}};
    j["phase_screen_seed"] = cfg.phase_screen_seed ? json(*cfg.phase_screen_seed) : json(nullptr);
    return j;
}

LightFieldTarget resolve_target(const RunConfig& run, const SystemConfig& system) {
    if (run.target_dir) {
        LightFieldTarget t = load_lightfield(*run.target_dir);
        if (!(t.grid() == system.sim_grid())) {
            throw ConfigError("target grid does not match the simulation grid of the configuration");
        }
        if (t.count() != system.pupils.count()) {
            throw ConfigError("target view count does not match the pupil layout");
        }
        return t;
    }
    if (!run.scene) {
        throw ConfigError("config: a 'scene' or a 'target' directory is required");
    }
    return render_lightfield(*run.scene, system.pupils, system.sim_grid());
}

} // namespace lfholo
