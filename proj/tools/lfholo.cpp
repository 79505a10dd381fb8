#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fmt/format.h>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lfholo/analysis.hpp"
#include "lfholo/io.hpp"
#include "lfholo/solution.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace lfholo;

namespace {

enum Exit { ok = 0, config_error = 2, numerical_error = 3, io_error = 4 };

struct Common {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;
    std::string precision;
};

void add_common(CLI::App* cmd, Common& c, bool config_required) {
    auto* opt = cmd->add_option("--config", c.config, "JSON configuration file");
    if (config_required) {
        opt->required();
    }
    cmd->add_option("--out", c.out, "output directory");
    cmd->add_option("--seed", c.seed, "RNG seed (overrides the config)");
    cmd->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--precision", c.precision, "FFT precision")->check(CLI::IsMember({"f32", "f64"}));
}

void apply_overrides(RunConfig& run, const Common& c) {
    if (!c.out.empty()) {
        run.output = c.out;
    }
    if (c.seed) {
        run.seed = *c.seed;
        run.hyper.seed = *c.seed;
    }
    if (c.jobs) {
        run.jobs = *c.jobs;
    }
    if (!c.precision.empty()) {
        run.precision = parse_precision(c.precision);
    }
}

int cmd_optimize(const Common& c) {
    RunConfig run = load_run_config(c.config);
    apply_overrides(run, c);
    const SystemConfig system = make_config(run.baseline, run.base);
    const LightFieldTarget target = resolve_target(run, system);
    const ForwardModel model(system, run.precision, run.jobs);

    const OptimizeResult result =
        optimize(model, target, run.hyper, [&](const OptimizerState& state, const NumericalError& e) {
            save_snapshot(run.output / "snapshot", state, e.what());
        });
    save_solution(run.output, run, system, result, target);
    std::cout << fmt::format("{}: {} iterations, mean PSNR {} dB, mean SSIM {:.4f} -> {}\n", to_string(run.baseline),
                             run.hyper.iterations, format_db(result.report.mean_psnr), result.report.mean_ssim,
                             run.output.string());
    return ok;
}

double gradient_energy(const ViewImage& img) {
    const GridSpec& g = img.grid();
    double e = 0.0;
    for (int y = 0; y < g.ny; ++y) {
        for (int x = 0; x < g.nx; ++x) {
            const double v = img(x, y) * img(x, y);
            const double dx = img((x + 1) % g.nx, y) * img((x + 1) % g.nx, y) - v;
            const double dy = img(x, (y + 1) % g.ny) * img(x, (y + 1) % g.ny) - v;
            e += dx * dx + dy * dy;
        }
    }
    return e;
}

// Simulate config: {"solution": dir, "views": "all" | [[row, col], ...],
// "pupils": [{"cx": m, "cy": m, "radius": m}], "z_offsets": [m, ...]}.
int cmd_simulate(const Common& c, const std::string& solution_arg) {
    json sim = json::object();
    fs::path solution_dir = solution_arg;
    if (!c.config.empty()) {
        if (fs::is_directory(c.config)) {
            solution_dir = c.config;
        } else {
            sim = read_config_json(c.config);
            for (const auto& [key, value] : sim.items()) {
                if (key != "solution" && key != "views" && key != "pupils" && key != "z_offsets") {
                    throw ConfigError("simulate: unknown key '" + key + "'");
                }
            }
            if (sim.contains("solution")) {
                if (!sim.at("solution").is_string()) {
                    throw ConfigError("simulate.solution: expected a string");
                }
                solution_dir = sim.at("solution").get<std::string>();
            }
        }
    }
    if (solution_dir.empty()) {
        throw ConfigError("simulate: no solution directory given");
    }
    Solution s = load_solution(solution_dir);
    if (c.jobs) {
        s.run.jobs = *c.jobs;
    }
    if (!c.precision.empty()) {
        s.run.precision = parse_precision(c.precision);
    }
    const fs::path out = c.out.empty() ? solution_dir / "simulate" : fs::path(c.out);
    fs::create_directories(out);

    std::vector<double> offsets = {0.0};
    if (sim.contains("z_offsets")) {
        if (!sim.at("z_offsets").is_array()) {
            throw ConfigError("simulate.z_offsets: expected an array of numbers");
        }
        offsets.clear();
        for (const json& v : sim.at("z_offsets")) {
            if (!v.is_number()) {
                throw ConfigError("simulate.z_offsets: expected an array of numbers");
            }
            offsets.push_back(v.get<double>());
        }
    }

    std::vector<std::pair<std::string, PupilSpec>> pupils;
    const PupilLayout& layout = s.system.pupils;
    const json views = sim.value("views", json("all"));
    if (views.is_string() && views.get<std::string>() == "all") {
        for (std::size_t p = 0; p < layout.count(); ++p) {
            pupils.emplace_back(fmt::format("view_{}_{}", layout.row(p), layout.col(p)), layout.pupils[p]);
        }
    } else if (views.is_array()) {
        for (const json& rc : views) {
            if (!rc.is_array() || rc.size() != 2 || !rc[0].is_number_integer() || !rc[1].is_number_integer()) {
                throw ConfigError("simulate.views: expected [row, col] pairs");
            }
            const int r = rc[0].get<int>();
            const int col = rc[1].get<int>();
            if (r < 0 || col < 0 || r >= layout.views_per_axis || col >= layout.views_per_axis) {
                throw ConfigError(fmt::format("simulate.views: view ({}, {}) is outside the layout", r, col));
            }
            pupils.emplace_back(fmt::format("view_{}_{}", r, col),
                                layout.pupils[static_cast<std::size_t>(r) * layout.views_per_axis + col]);
        }
    } else {
        throw ConfigError("simulate.views: expected \"all\" or a list of [row, col] pairs");
    }
    if (sim.contains("pupils")) {
        int i = 0;
        for (const json& pj : sim.at("pupils")) {
            if (!pj.is_object() || !pj.contains("cx") || !pj.contains("cy") || !pj.at("cx").is_number() ||
                !pj.at("cy").is_number()) {
                throw ConfigError("simulate.pupils: expected objects with numeric cx, cy (and optional radius)");
            }
            PupilSpec spec{pj.at("cx").get<double>(), pj.at("cy").get<double>(),
                           pj.value("radius", layout.pupils.front().radius), s.system.eyepiece_g};
            pupils.emplace_back(fmt::format("pupil_{}", i++), spec);
        }
    }

    std::string sharpness = "z_offset_m,name,mean_intensity,gradient_energy\n";
    for (std::size_t zi = 0; zi < offsets.size(); ++zi) {
        SystemConfig cfg = s.system;
        cfg.z += offsets[zi];
        const ForwardModel model(cfg, s.run.precision, s.run.jobs);
        const fs::path dir = offsets.size() == 1 && offsets[0] == 0.0 ? out : out / fmt::format("z_{}", zi);
        fs::create_directories(dir);
        for (const auto& [name, pupil] : pupils) {
            const ViewImage img = model.view_amplitude(s.params, pupil);
            io::write_f32(dir / (name + ".f32"), img.values());
            std::vector<double> preview(img.size());
            double mean = 0.0;
            for (std::size_t i = 0; i < img.size(); ++i) {
                const double v = s.scale * img.values()[i];
                preview[i] = std::min(v * v, 1.0);
                mean += v * v;
            }
            mean /= static_cast<double>(img.size());
            io::write_png_gray8(dir / (name + ".png"), img.grid().nx, img.grid().ny, io::to_gray8(preview, 2.2));
            sharpness += fmt::format("{:.9g},{},{:.9g},{:.9g}\n", offsets[zi], name, mean, gradient_energy(img));
        }
    }
    io::write_text(out / "simulate.csv", sharpness);
    std::cout << fmt::format("simulated {} pupil(s) at {} focal distance(s) -> {}\n", pupils.size(), offsets.size(),
                             out.string());
    return ok;
}

int cmd_render_target(const Common& c) {
    RunConfig run = load_run_config(c.config);
    apply_overrides(run, c);
    if (!run.scene) {
        throw ConfigError("render-target: the config needs a 'scene'");
    }
    const SystemConfig system = make_config(run.baseline, run.base);
    const LightFieldTarget target = render_lightfield(*run.scene, system.pupils, system.sim_grid());
    const fs::path out = c.out.empty() ? run.output / "target" : fs::path(c.out);
    save_lightfield(target, out, true);
    std::cout << fmt::format("rendered {} views of '{}' -> {}\n", target.count(), run.scene->id, out.string());
    return ok;
}

// Etendue config: {"nx", "ny", "pitch", "wavelength", "g_values" | {"g_min", "g_max", "g_count"}, "alphas"}.
int cmd_analyze_etendue(const Common& c) {
    json j = c.config.empty() ? json::object() : read_config_json(c.config);
    for (const auto& [key, value] : j.items()) {
        static const std::vector<std::string> allowed = {"nx", "ny", "pitch", "wavelength", "g_values",
                                                         "g_min", "g_max", "g_count", "alphas"};
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ConfigError("analyze-etendue: unknown key '" + key + "'");
        }
    }
    auto num = [&](const char* key, double fallback) {
        if (!j.contains(key)) {
            return fallback;
        }
        if (!j.at(key).is_number()) {
            throw ConfigError(std::string("analyze-etendue.") + key + ": expected a number");
        }
        return j.at(key).get<double>();
    };
    auto integer = [&](const char* key, long fallback) {
        if (!j.contains(key)) {
            return fallback;
        }
        if (!j.at(key).is_number_integer()) {
            throw ConfigError(std::string("analyze-etendue.") + key + ": expected an integer");
        }
        return j.at(key).get<long>();
    };
    EtendueParams params;
    params.nx = integer("nx", 1000);
    params.ny = integer("ny", 1000);
    params.pitch = num("pitch", 10.8e-6);
    params.wavelength = num("wavelength", 632.8e-9);
    params.g = 1.0;
    try {
        params.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("analyze-etendue: ") + e.what());
    }
    std::vector<double> gs;
    if (j.contains("g_values")) {
        try {
            gs = j.at("g_values").get<std::vector<double>>();
        } catch (const json::exception&) {
            throw ConfigError("analyze-etendue.g_values: expected an array of numbers");
        }
    } else {
        const double g_min = num("g_min", 10e-3);
        const double g_max = num("g_max", 200e-3);
        const long count = integer("g_count", 39);
        if (count < 1 || !(g_min > 0.0) || g_max < g_min) {
            throw ConfigError("analyze-etendue: need 0 < g_min <= g_max and g_count >= 1");
        }
        for (long i = 0; i < count; ++i) {
            gs.push_back(count == 1 ? g_min : g_min + (g_max - g_min) * i / (count - 1));
        }
    }
    std::vector<int> alphas = {1, 2, 3};
    if (j.contains("alphas")) {
        try {
            alphas = j.at("alphas").get<std::vector<int>>();
        } catch (const json::exception&) {
            throw ConfigError("analyze-etendue.alphas: expected an array of integers");
        }
    }
    for (double g : gs) {
        if (!(g > 0.0)) {
            throw ConfigError("analyze-etendue: focal lengths must be positive");
        }
    }
    const auto rows = tradeoff_table(params, gs, alphas);
    const fs::path out = c.out.empty() ? fs::path("etendue") : fs::path(c.out);
    fs::create_directories(out);
    io::write_text(out / "tradeoff.csv", tradeoff_csv(rows));
    io::write_json(out / "summary.json",
                   {{"etendue_slm_m2sr", etendue_slm(params.nx, params.ny, params.wavelength)},
                    {"diffraction_half_angle_deg", params.half_angle() * 180.0 / std::numbers::pi},
                    {"prototype_incidence_deg", illumination_angle_deg(8.17e-3, 200e-3)},
                    {"rows", rows.size()}});
    std::cout << fmt::format("{} tradeoff rows -> {}\n", rows.size(), (out / "tradeoff.csv").string());
    return ok;
}

// Metrics config: {"reference": dir, "test": dir, "scene": str, "config": str, "frames": int, "scale": num}.
int cmd_metrics(const Common& c, const std::vector<std::string>& dirs) {
    json j = c.config.empty() ? json::object() : read_config_json(c.config);
    std::string ref;
    std::string test;
    if (dirs.size() == 2) {
        ref = dirs[0];
        test = dirs[1];
    } else if (dirs.empty()) {
        if (!j.contains("reference") || !j.contains("test") || !j.at("reference").is_string() ||
            !j.at("test").is_string()) {
            throw ConfigError("metrics: give two light-field directories or a config with 'reference' and 'test'");
        }
        ref = j.at("reference").get<std::string>();
        test = j.at("test").get<std::string>();
    } else {
        throw ConfigError("metrics: expected exactly two light-field directories");
    }
    const LightFieldTarget a = load_lightfield(ref);
    const LightFieldTarget b = load_lightfield(test);
    if (a.count() != b.count() || !(a.grid() == b.grid())) {
        throw ConfigError("metrics: light fields differ in view count or grid");
    }
    double scale = b.scene.value("scale", 1.0);
    if (j.contains("scale")) {
        scale = j.at("scale").get<double>();
    }
    std::vector<ViewMetrics> metrics;
    for (std::size_t p = 0; p < a.count(); ++p) {
        metrics.push_back(view_metrics(b.views[p], a.views[p], scale));
    }
    const std::string csv = metrics_csv(j.value("scene", a.scene.value("id", "scene")), j.value("config", "test"),
                                        j.value("frames", 1), metrics);
    if (!c.out.empty()) {
        fs::create_directories(c.out);
        io::write_text(fs::path(c.out) / "metrics.csv", csv);
    }
    std::cout << csv;
    return ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-source light-field hologram optimization and analysis"};
    app.require_subcommand(1);
    Common common;
    std::string solution;
    std::vector<std::string> metric_dirs;

    auto* optimize = app.add_subcommand("optimize", "optimize a hologram for a configuration");
    add_common(optimize, common, true);
    auto* simulate = app.add_subcommand("simulate", "re-render views of a stored solution");
    add_common(simulate, common, false);
    simulate->add_option("solution", solution, "solution directory");
    auto* render = app.add_subcommand("render-target", "render a target light field");
    add_common(render, common, true);
    auto* etendue = app.add_subcommand("analyze-etendue", "etendue / FoV / eyebox tradeoff table");
    add_common(etendue, common, false);
    auto* metrics = app.add_subcommand("metrics", "PSNR/SSIM between two light fields");
    add_common(metrics, common, false);
    metrics->add_option("dirs", metric_dirs, "reference and test light-field directories");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : config_error;
    }

    try {
        if (*optimize) {
            return cmd_optimize(common);
        }
        if (*simulate) {
            return cmd_simulate(common, solution);
        }
        if (*render) {
            return cmd_render_target(common);
        }
        if (*etendue) {
            return cmd_analyze_etendue(common);
        }
        if (*metrics) {
            return cmd_metrics(common, metric_dirs);
        }
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return numerical_error;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return io_error;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return io_error;
    } catch (const Error& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return config_error;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return config_error;
    }
    return ok;
}
