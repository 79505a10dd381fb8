#include "lfholo/lightfield.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <regex>
#include <set>

#include "lfholo/io.hpp"
#include "strict_json.hpp"

namespace lfholo {

using nlohmann::json;
using detail::integer;
using detail::number;
using detail::reject_unknown;
using detail::text;

namespace {

std::vector<double> texture_values(const Texture& tex, int nx, int ny, std::uint64_t seed) {
    std::vector<double> v(static_cast<std::size_t>(nx) * ny);
    const double span = tex.high - tex.low;
    const int period = std::max(tex.period, 1);
    std::vector<double> cells;
    int cells_x = 0;
    if (tex.kind == TextureKind::noise) {
        cells_x = (nx + period - 1) / period;
        const int cells_y = (ny + period - 1) / period;
        std::mt19937_64 engine(seed);
        cells.resize(static_cast<std::size_t>(cells_x) * cells_y);
        for (double& c : cells) {
            c = static_cast<double>(engine() >> 11) * 0x1.0p-53;
        }
    }
    for (int y = 0; y < ny; ++y) {
        for (int x = 0; x < nx; ++x) {
            double t = 1.0;
            const double dx = (x + 0.5) / nx - tex.cx;
            const double dy = (y + 0.5) / ny - tex.cy;
            const double r = std::hypot(dx, dy);
            switch (tex.kind) {
            case TextureKind::constant:
                t = 1.0;
                break;
            case TextureKind::checkerboard:
                t = ((x / period) + (y / period)) % 2 == 0 ? 1.0 : 0.0;
                break;
            case TextureKind::bars:
                t = ((tex.vertical ? x : y) / period) % 2 == 0 ? 1.0 : 0.0;
                break;
            case TextureKind::gradient_disk:
                t = r < tex.radius ? 1.0 - r / tex.radius : 0.0;
                break;
            case TextureKind::rings:
                t = 0.5 + 0.5 * std::cos(2.0 * std::numbers::pi * r * nx / period);
                break;
            case TextureKind::noise:
                t = cells[static_cast<std::size_t>(y / period) * cells_x + x / period];
                break;
            }
            v[static_cast<std::size_t>(y) * nx + x] = tex.low + span * t;
        }
    }
    return v;
}

std::vector<double> shape_values(const Shape& shape, int nx, int ny) {
    std::vector<double> v(static_cast<std::size_t>(nx) * ny, 1.0);
    if (shape.kind == ShapeKind::full) {
        return v;
    }
    for (int y = 0; y < ny; ++y) {
        for (int x = 0; x < nx; ++x) {
            const double dx = ((x + 0.5) / nx - shape.cx) / shape.rx;
            const double dy = ((y + 0.5) / ny - shape.cy) / shape.ry;
            const bool inside = shape.kind == ShapeKind::disk ? dx * dx + dy * dy <= 1.0
                                                              : std::abs(dx) <= 1.0 && std::abs(dy) <= 1.0;
            v[static_cast<std::size_t>(y) * nx + x] = inside ? 1.0 : 0.0;
        }
    }
    return v;
}

int source_index(int i, int shift, int n, EdgeMode edge) {
    const int s = i - shift;
    if (edge == EdgeMode::wrap) {
        return ((s % n) + n) % n;
    }
    return std::clamp(s, 0, n - 1);
}

} // namespace

int disparity_per_step(double depth, double step_freq, double wavelength, double pitch) {
    return static_cast<int>(std::lround(-wavelength * step_freq * depth / pitch));
}

LightFieldTarget render_lightfield(const SceneSpec& scene, const PupilLayout& layout, const GridSpec& grid) {
    if (scene.layers.empty()) {
        throw DomainError("render_lightfield: scene has no layers");
    }
    if (layout.count() == 0) {
        throw DomainError("render_lightfield: pupil layout is empty");
    }
    grid.validate();
    const int nx = grid.nx;
    const int ny = grid.ny;
    const double step_freq = eyebox_to_freq(layout.spacing(), layout.pupils.front().g, grid.wavelength);

    struct Prepared {
        std::vector<double> texture;
        std::vector<double> alpha;
        int disparity_x = 0;
        int disparity_y = 0;
        double depth = 0.0;
    };
    std::vector<Prepared> layers;
    for (std::size_t i = 0; i < scene.layers.size(); ++i) {
        const Layer& l = scene.layers[i];
        if (!std::isfinite(l.depth)) {
            throw DomainError("render_lightfield: layer depth must be finite");
        }
        Prepared p;
        p.texture = texture_values(l.texture, nx, ny, scene.seed + i);
        p.alpha = shape_values(l.shape, nx, ny);
        for (double& a : p.alpha) {
            a *= std::clamp(l.opacity, 0.0, 1.0);
        }
        p.disparity_x = disparity_per_step(l.depth, step_freq, grid.wavelength, grid.pitch_x);
        p.disparity_y = disparity_per_step(l.depth, step_freq, grid.wavelength, grid.pitch_y);
        p.depth = l.depth;
        layers.push_back(std::move(p));
    }
    std::stable_sort(layers.begin(), layers.end(),
                     [](const Prepared& a, const Prepared& b) { return a.depth < b.depth; });

    LightFieldTarget target;
    target.layout = layout;
    target.scene = scene_to_json(scene);
    for (std::size_t p = 0; p < layout.count(); ++p) {
        std::vector<double> out(grid.size(), 0.0);
        for (const Prepared& l : layers) {
            const int sx = static_cast<int>(std::lround(layout.step_x(p) * l.disparity_x));
            const int sy = static_cast<int>(std::lround(layout.step_y(p) * l.disparity_y));
            for (int y = 0; y < ny; ++y) {
                const int ly = source_index(y, sy, ny, scene.edge);
                for (int x = 0; x < nx; ++x) {
                    const int lx = source_index(x, sx, nx, scene.edge);
                    const std::size_t src = static_cast<std::size_t>(ly) * nx + lx;
                    double& o = out[static_cast<std::size_t>(y) * nx + x];
                    o = l.alpha[src] * l.texture[src] + (1.0 - l.alpha[src]) * o;
                }
            }
        }
        for (double& v : out) {
            v = static_cast<double>(static_cast<float>(std::clamp(v, 0.0, 1.0)));
        }
        target.views.emplace_back(grid, std::move(out));
    }
    return target;
}

json layout_to_json(const PupilLayout& layout) {
    json pupils = json::array();
    for (const PupilSpec& p : layout.pupils) {
        pupils.push_back({{"cx", p.cx}, {"cy", p.cy}, {"radius", p.radius}, {"g", p.g}});
    }
    return {{"views_per_axis", layout.views_per_axis}, {"eyebox_width", layout.eyebox_width}, {"pupils", pupils}};
}

PupilLayout layout_from_json(const json& j) {
    try {
        PupilLayout layout;
        layout.views_per_axis = j.at("views_per_axis").get<int>();
        layout.eyebox_width = j.at("eyebox_width").get<double>();
        for (const json& p : j.at("pupils")) {
            layout.pupils.push_back({p.at("cx").get<double>(), p.at("cy").get<double>(), p.at("radius").get<double>(),
                                     p.at("g").get<double>()});
        }
        if (layout.pupils.size() != static_cast<std::size_t>(layout.views_per_axis) * layout.views_per_axis) {
            throw IoError("pupil layout lists " + std::to_string(layout.pupils.size()) + " pupils for " +
                          std::to_string(layout.views_per_axis) + " views per axis");
        }
        return layout;
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed pupil layout: ") + e.what());
    }
}

namespace {

std::string view_name(int row, int col) { return "view_" + std::to_string(row) + "_" + std::to_string(col); }

} // namespace

void save_lightfield(const LightFieldTarget& target, const std::filesystem::path& dir, bool png_previews) {
    if (target.views.size() != target.layout.count()) {
        throw StructuralError("save_lightfield: view count does not match the pupil layout");
    }
    std::filesystem::create_directories(dir);
    json meta = {{"format", "lfholo-lightfield"},
                 {"version", 1},
                 {"grid", io::grid_to_json(target.grid())},
                 {"layout", layout_to_json(target.layout)},
                 {"view_count", target.views.size()},
                 {"scene", target.scene}};
    io::write_json(dir / "meta.json", meta);
    for (std::size_t p = 0; p < target.views.size(); ++p) {
        const std::string name = view_name(target.layout.row(p), target.layout.col(p));
        io::write_f32(dir / (name + ".f32"), target.views[p].values());
        if (png_previews) {
            const GridSpec& g = target.views[p].grid();
            io::write_png_gray8(dir / (name + ".png"), g.nx, g.ny, io::to_gray8(target.views[p].values(), 2.2));
        }
    }
}

LightFieldTarget load_lightfield(const std::filesystem::path& dir) {
    const json meta = io::read_json(dir / "meta.json");
    if (!meta.is_object() || meta.value("format", "") != "lfholo-lightfield") {
        throw IoError(dir.string() + "/meta.json: not a light-field header");
    }
    LightFieldTarget target;
    GridSpec grid;
    std::size_t declared = 0;
    try {
        grid = io::grid_from_json(meta.at("grid"));
        target.layout = layout_from_json(meta.at("layout"));
        declared = meta.at("view_count").get<std::size_t>();
        target.scene = meta.value("scene", json::object());
    } catch (const json::exception& e) {
        throw IoError(dir.string() + "/meta.json: " + e.what());
    }
    if (declared != target.layout.count()) {
        throw IoError(dir.string() + ": header declares " + std::to_string(declared) + " views but the layout has " +
                      std::to_string(target.layout.count()));
    }
    std::set<std::string> expected;
    for (std::size_t p = 0; p < target.layout.count(); ++p) {
        expected.insert(view_name(target.layout.row(p), target.layout.col(p)) + ".f32");
    }
    std::size_t found = 0;
    const std::regex view_file(R"(view_\d+_\d+\.f32)");
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (!std::regex_match(name, view_file)) {
            continue;
        }
        if (!expected.contains(name)) {
            throw IoError(dir.string() + ": payload view " + name + " is not in the header layout");
        }
        ++found;
    }
    if (found != expected.size()) {
        throw IoError(dir.string() + ": header declares " + std::to_string(expected.size()) +
                      " views but the payload has " + std::to_string(found));
    }
    for (std::size_t p = 0; p < target.layout.count(); ++p) {
        const std::string name = view_name(target.layout.row(p), target.layout.col(p)) + ".f32";
        target.views.emplace_back(grid, io::read_f32(dir / name, grid.size()));
    }
    return target;
}

namespace {

const char* to_string(TextureKind k) {
    switch (k) {
    case TextureKind::constant: return "constant";
    case TextureKind::checkerboard: return "checkerboard";
    case TextureKind::bars: return "bars";
    case TextureKind::gradient_disk: return "gradient_disk";
    case TextureKind::rings: return "rings";
    case TextureKind::noise: return "noise";
    }
    return "?";
}

const char* to_string(ShapeKind k) {
    switch (k) {
    case ShapeKind::full: return "full";
    case ShapeKind::disk: return "disk";
    case ShapeKind::rect: return "rect";
    }
    return "?";
}

} // namespace

json scene_to_json(const SceneSpec& scene) {
    json layers = json::array();
    for (const Layer& l : scene.layers) {
        layers.push_back({{"texture",
                           {{"kind", to_string(l.texture.kind)},
                            {"low", l.texture.low},
                            {"high", l.texture.high},
                            {"period", l.texture.period},
                            {"vertical", l.texture.vertical},
                            {"cx", l.texture.cx},
                            {"cy", l.texture.cy},
                            {"radius", l.texture.radius}}},
                          {"shape",
                           {{"kind", to_string(l.shape.kind)},
                            {"cx", l.shape.cx},
                            {"cy", l.shape.cy},
                            {"rx", l.shape.rx},
                            {"ry", l.shape.ry}}},
                          {"opacity", l.opacity},
                          {"depth", l.depth}});
    }
    return {{"id", scene.id},
            {"edge", scene.edge == EdgeMode::wrap ? "wrap" : "clamp"},
            {"seed", scene.seed},
            {"layers", layers}};
}

SceneSpec scene_from_json(const json& j) {
    const std::string where = "scene";
    reject_unknown(j, {"id", "edge", "seed", "layers"}, where);
    SceneSpec scene;
    scene.id = text(j, "id", scene.id, where);
    const std::string edge = text(j, "edge", "wrap", where);
    if (edge != "wrap" && edge != "clamp") {
        throw ConfigError("scene.edge: expected 'wrap' or 'clamp'");
    }
    scene.edge = edge == "wrap" ? EdgeMode::wrap : EdgeMode::clamp;
    scene.seed = detail::unsigned_integer(j, "seed", scene.seed, where);
    if (!j.contains("layers") || !j.at("layers").is_array()) {
        throw ConfigError("scene.layers: expected an array");
    }
    for (const json& lj : j.at("layers")) {
        const std::string lw = "scene.layers[]";
        reject_unknown(lj, {"texture", "shape", "opacity", "depth"}, lw);
        Layer l;
        if (lj.contains("texture")) {
            const json& t = lj.at("texture");
            reject_unknown(t, {"kind", "low", "high", "period", "vertical", "cx", "cy", "radius"}, lw + ".texture");
            const std::string kind = text(t, "kind", "constant", lw + ".texture");
            bool matched = false;
            for (TextureKind k : {TextureKind::constant, TextureKind::checkerboard, TextureKind::bars,
                                  TextureKind::gradient_disk, TextureKind::rings, TextureKind::noise}) {
                if (kind == to_string(k)) {
                    l.texture.kind = k;
                    matched = true;
                }
            }
            if (!matched) {
                throw ConfigError(lw + ".texture.kind: unknown texture '" + kind + "'");
            }
            l.texture.low = number(t, "low", l.texture.low, lw + ".texture");
            l.texture.high = number(t, "high", l.texture.high, lw + ".texture");
            l.texture.period = integer(t, "period", l.texture.period, lw + ".texture");
            l.texture.vertical = detail::boolean(t, "vertical", l.texture.vertical, lw + ".texture");
            l.texture.cx = number(t, "cx", l.texture.cx, lw + ".texture");
            l.texture.cy = number(t, "cy", l.texture.cy, lw + ".texture");
            l.texture.radius = number(t, "radius", l.texture.radius, lw + ".texture");
        }
        if (lj.contains("shape")) {
            const json& s = lj.at("shape");
            reject_unknown(s, {"kind", "cx", "cy", "rx", "ry"}, lw + ".shape");
            const std::string kind = text(s, "kind", "full", lw + ".shape");
            if (kind == "full") {
                l.shape.kind = ShapeKind::full;
            } else if (kind == "disk") {
                l.shape.kind = ShapeKind::disk;
            } else if (kind == "rect") {
                l.shape.kind = ShapeKind::rect;
            } else {
                throw ConfigError(lw + ".shape.kind: unknown shape '" + kind + "'");
            }
            l.shape.cx = number(s, "cx", l.shape.cx, lw + ".shape");
            l.shape.cy = number(s, "cy", l.shape.cy, lw + ".shape");
            l.shape.rx = number(s, "rx", l.shape.rx, lw + ".shape");
            l.shape.ry = number(s, "ry", l.shape.ry, lw + ".shape");
        }
        l.opacity = number(lj, "opacity", l.opacity, lw);
        l.depth = number(lj, "depth", l.depth, lw);
        scene.layers.push_back(l);
    }
    if (scene.layers.empty()) {
        throw ConfigError("scene.layers: at least one layer is required");
    }
    return scene;
}

std::vector<SceneSpec> standard_scenes(double near_depth, double far_depth) {
    std::vector<SceneSpec> scenes;

    SceneSpec checker;
    checker.id = "checker_disk";
    checker.seed = 11;
    checker.layers.push_back({{TextureKind::checkerboard, 0.15, 0.85, 16}, {}, 1.0, far_depth});
    checker.layers.push_back({{TextureKind::gradient_disk, 0.2, 1.0, 8, true, 0.5, 0.5, 0.22},
                              {ShapeKind::disk, 0.5, 0.5, 0.22, 0.22},
                              1.0,
                              near_depth});
    scenes.push_back(checker);

    SceneSpec bars;
    bars.id = "bars_square";
    bars.seed = 12;
    bars.layers.push_back({{TextureKind::bars, 0.2, 0.8, 12, true}, {}, 1.0, far_depth});
    bars.layers.push_back({{TextureKind::bars, 0.1, 0.95, 10, false}, {ShapeKind::rect, 0.45, 0.55, 0.2, 0.18}, 1.0,
                           near_depth});
    scenes.push_back(bars);

    SceneSpec blocks;
    blocks.id = "noise_rings";
    blocks.seed = 13;
    blocks.layers.push_back({{TextureKind::noise, 0.1, 0.9, 12}, {}, 1.0, far_depth});
    blocks.layers.push_back({{TextureKind::rings, 0.3, 1.0, 14, true, 0.55, 0.45, 0.3},
                             {ShapeKind::disk, 0.55, 0.45, 0.25, 0.25},
                             1.0,
                             near_depth});
    scenes.push_back(blocks);
    return scenes;
}

} // namespace lfholo
