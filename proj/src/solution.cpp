#include "lfholo/solution.hpp"

#include <fmt/format.h>
#include <sstream>

#include "lfholo/io.hpp"

namespace lfholo {

using nlohmann::json;

namespace {

std::filesystem::path stem(const std::filesystem::path& dir, const char* name, std::size_t t) {
    return dir / fmt::format("{}_{}", name, t);
}

} // namespace

std::string metrics_csv(const std::string& scene, const std::string& config, int frames,
                        const std::vector<ViewMetrics>& views) {
    std::ostringstream out;
    out << "scene,config,frames,psnr_db,ssim,view\n";
    double sum_psnr = 0.0;
    double sum_ssim = 0.0;
    for (std::size_t p = 0; p < views.size(); ++p) {
        out << fmt::format("{},{},{},{},{:.6f},{}\n", scene, config, frames, format_db(views[p].psnr_db),
                           views[p].ssim, p);
        sum_psnr += views[p].psnr_db;
        sum_ssim += views[p].ssim;
    }
    if (!views.empty()) {
        const double n = static_cast<double>(views.size());
        out << fmt::format("{},{},{},{},{:.6f},mean\n", scene, config, frames, format_db(sum_psnr / n),
                           sum_ssim / n);
    }
    return out.str();
}

void save_solution(const std::filesystem::path& dir, const RunConfig& run, const SystemConfig& system,
                   const OptimizeResult& result, const LightFieldTarget& target) {
    std::filesystem::create_directories(dir);
    io::write_json(dir / "config_echo.json", run_config_to_json(run));
    io::write_json(dir / "system.json", system_to_json(system));

    const HologramParams& params = result.state.params;
    json masks = json::array();
    const GridSpec sim = system.sim_grid();
    for (std::size_t t = 0; t < params.phases.size(); ++t) {
        export_phase(params.phases[t], system.quant_levels, stem(dir, "phase", t));
        const FourierMask& m = params.masks[t];
        if (m.mode == MaskMode::optimizable_lowres || m.mode == MaskMode::fixed_random) {
            export_mask(m.native_amplitudes(), m.native_nx, m.native_ny, stem(dir, "mask", t),
                        m.mode == MaskMode::fixed_random ? "fixed_random" : "optimizable_lowres");
        } else {
            const FrequencyMask full = realize_mask(m, sim);
            export_mask(center<double>(full.values(), sim.nx, sim.ny), sim.nx, sim.ny, stem(dir, "mask", t),
                        m.mode == MaskMode::aperture ? "aperture" : "none");
        }
        masks.push_back({{"native_nx", m.native_nx}, {"native_ny", m.native_ny}, {"logits", m.logits}});
    }
    io::write_json(dir / "solution.json", {{"format", "lfholo-solution"},
                                           {"version", 1},
                                           {"baseline", to_string(system.baseline)},
                                           {"frames", system.frames},
                                           {"quant_levels", system.quant_levels},
                                           {"scale", result.state.scale},
                                           {"source_weights", params.source_weights},
                                           {"masks", masks}});

    save_lightfield(target, dir / "target", true);
    LightFieldTarget recon;
    recon.layout = system.pupils;
    recon.views = result.reconstructions;
    recon.scene = {{"reconstruction_of", target.scene.value("id", "")}, {"scale", result.state.scale}};
    save_lightfield(recon, dir / "recon", true);

    json report = result.report.to_json();
    report["config"] = run_config_to_json(run);
    io::write_json(dir / "report.json", report);
    io::write_text(dir / "loss.csv", result.report.loss_csv());
    io::write_text(dir / "metrics.csv", metrics_csv(target.scene.value("id", "target"), to_string(system.baseline),
                                                    system.frames, result.report.view_metrics));
}

Solution load_solution(const std::filesystem::path& dir) {
    if (!std::filesystem::exists(dir / "solution.json")) {
        throw IoError(dir.string() + ": missing solution.json (not a solution directory)");
    }
    Solution s;
    s.run = load_run_config(dir / "config_echo.json");
    s.system = make_config(s.run.baseline, s.run.base);
    const json sj = io::read_json(dir / "solution.json");
    try {
        if (sj.at("format").get<std::string>() != "lfholo-solution") {
            throw IoError(dir.string() + "/solution.json: unexpected format");
        }
        if (sj.at("frames").get<int>() != s.system.frames) {
            throw IoError(dir.string() + "/solution.json: frame count does not match the configuration");
        }
        s.scale = sj.at("scale").get<double>();
        s.params.source_weights = sj.at("source_weights").get<std::vector<double>>();
        s.params.masks = s.system.masks;
        const json& masks = sj.at("masks");
        if (masks.size() != s.params.masks.size()) {
            throw IoError(dir.string() + "/solution.json: mask count does not match the configuration");
        }
        for (std::size_t t = 0; t < masks.size(); ++t) {
            FourierMask& m = s.params.masks[t];
            if (m.mode == MaskMode::optimizable_lowres) {
                m.logits = masks[t].at("logits").get<std::vector<double>>();
                if (m.logits.size() != static_cast<std::size_t>(m.native_nx) * m.native_ny) {
                    throw IoError(dir.string() + "/solution.json: mask logit count does not match its grid");
                }
            }
        }
    } catch (const json::exception& e) {
        throw IoError(dir.string() + "/solution.json: " + e.what());
    }
    for (int t = 0; t < s.system.frames; ++t) {
        int levels = 0;
        PhasePattern phi = import_phase(stem(dir, "phase", t), &levels);
        if (!(phi.grid() == s.system.slm_grid)) {
            throw IoError(dir.string() + ": phase pattern grid does not match the configuration");
        }
        s.params.phases.push_back(std::move(phi));
    }
    return s;
}

void save_snapshot(const std::filesystem::path& dir, const OptimizerState& state, const std::string& reason) {
    std::filesystem::create_directories(dir);
    for (std::size_t t = 0; t < state.params.phases.size(); ++t) {
        io::write_f32(stem(dir, "phase", t).replace_extension(".f32"), state.params.phases[t].values());
    }
    json masks = json::array();
    for (const FourierMask& m : state.params.masks) {
        masks.push_back(m.logits);
    }
    io::write_json(dir / "state.json", {{"reason", reason},
                                        {"iteration", state.iteration},
                                        {"scale", state.scale},
                                        {"source_weights", state.params.source_weights},
                                        {"mask_logits", masks}});
}

} // namespace lfholo
