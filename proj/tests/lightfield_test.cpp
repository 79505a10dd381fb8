#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "lfholo/lightfield.hpp"

using namespace lfholo;
namespace fs = std::filesystem;

namespace {

const GridSpec kGrid = GridSpec::square(32, 3.6e-6, 632.8e-9);

PupilLayout layout() {
    // One SLM band between pupils: 1 / (3 * pitch) cycles/m on this grid.
    const double g = 75e-3;
    const double step = g * kGrid.wavelength / (3 * kGrid.pitch_x);
    return PupilLayout::uniform(3, 3 * step, 0.3 * step, g);
}

fs::path temp_dir(const std::string& name) {
    auto p = fs::temp_directory_path() / ("lfholo_lf_" + name);
    fs::remove_all(p);
    return p;
}

Layer constant_layer(double value, double depth, Shape shape = {}, double opacity = 1.0) {
    Layer l;
    l.texture.kind = TextureKind::constant;
    l.texture.low = 0.0;
    l.texture.high = value;
    l.shape = shape;
    l.depth = depth;
    l.opacity = opacity;
    return l;
}

} // namespace

TEST(Lightfield, DisparityFormula) {
    const double step = 1.0 / (3 * 3.6e-6);
    // lambda * step * depth / pitch with depth = 1e-3 m.
    const double expected = 632.8e-9 * step * 1e-3 / 3.6e-6;
    EXPECT_EQ(disparity_per_step(1e-3, step, 632.8e-9, 3.6e-6), -std::lround(expected));
    EXPECT_EQ(disparity_per_step(-1e-3, step, 632.8e-9, 3.6e-6), std::lround(expected));
    EXPECT_EQ(disparity_per_step(0.0, step, 632.8e-9, 3.6e-6), 0);
}

TEST(Lightfield, CompositingOracle) {
    // Opaque disk in front of a half-transparent square in front of a constant background.
    SceneSpec scene;
    scene.edge = EdgeMode::wrap;
    scene.layers.push_back(constant_layer(0.9, 2e-4, {ShapeKind::disk, 0.5, 0.5, 0.2, 0.2}));
    scene.layers.push_back(constant_layer(0.2, -3e-4));
    scene.layers.push_back(constant_layer(0.6, 0.0, {ShapeKind::rect, 0.3, 0.6, 0.15, 0.25}, 0.5));
    const PupilLayout lay = layout();
    const LightFieldTarget lf = render_lightfield(scene, lay, kGrid);
    ASSERT_EQ(lf.count(), 9u);

    const double step_freq = 1.0 / (3 * kGrid.pitch_x);
    const int n = kGrid.nx;
    auto inside = [&](const Shape& s, int x, int y) {
        if (s.kind == ShapeKind::full) return true;
        const double dx = ((x + 0.5) / n - s.cx) / s.rx;
        const double dy = ((y + 0.5) / n - s.cy) / s.ry;
        return s.kind == ShapeKind::disk ? dx * dx + dy * dy <= 1.0 : std::abs(dx) <= 1.0 && std::abs(dy) <= 1.0;
    };
    const std::vector<int> order{1, 2, 0};  // back to front
    for (std::size_t p = 0; p < lf.count(); ++p) {
        for (int y = 0; y < n; ++y) {
            for (int x = 0; x < n; ++x) {
                double out = 0.0;
                for (int li : order) {
                    const Layer& l = scene.layers[li];
                    const int d = disparity_per_step(l.depth, step_freq, kGrid.wavelength, kGrid.pitch_x);
                    const int sx = ((x - static_cast<int>(std::lround(lay.step_x(p) * d))) % n + n) % n;
                    const int sy = ((y - static_cast<int>(std::lround(lay.step_y(p) * d))) % n + n) % n;
                    const double a = inside(l.shape, sx, sy) ? l.opacity : 0.0;
                    out = a * l.texture.high + (1 - a) * out;
                }
                EXPECT_FLOAT_EQ(lf.views[p](x, y), static_cast<float>(out)) << p << " " << x << " " << y;
            }
        }
    }
}

TEST(Lightfield, ViewsShiftWithDepth) {
    SceneSpec scene;
    Layer l;
    l.texture.kind = TextureKind::checkerboard;
    l.texture.period = 3;
    l.depth = -4e-4;
    scene.layers = {l};
    const PupilLayout lay = layout();
    const LightFieldTarget lf = render_lightfield(scene, lay, kGrid);
    const int d = disparity_per_step(l.depth, 1.0 / (3 * kGrid.pitch_x), kGrid.wavelength, kGrid.pitch_x);
    ASSERT_NE(d, 0);
    const ViewImage& centre = lf.views[4];
    const ViewImage& right = lf.views[5];
    for (int y = 0; y < kGrid.ny; ++y) {
        for (int x = 0; x < kGrid.nx; ++x) {
            EXPECT_EQ(right(x, y), centre(((x - d) % kGrid.nx + kGrid.nx) % kGrid.nx, y));
        }
    }
    // A layer at the nominal plane looks the same from every pupil.
    scene.layers[0].depth = 0.0;
    const LightFieldTarget flat = render_lightfield(scene, lay, kGrid);
    for (const ViewImage& v : flat.views) EXPECT_EQ(v, flat.views[0]);
}

TEST(Lightfield, ClampEdges) {
    SceneSpec scene;
    Layer l;
    l.texture.kind = TextureKind::bars;
    l.texture.period = 4;
    l.depth = 6e-4;
    scene.layers = {l};
    scene.edge = EdgeMode::clamp;
    const LightFieldTarget lf = render_lightfield(scene, layout(), kGrid);
    const int d = disparity_per_step(l.depth, 1.0 / (3 * kGrid.pitch_x), kGrid.wavelength, kGrid.pitch_x);
    const ViewImage& c = lf.views[4];
    const ViewImage& right = lf.views[5];
    for (int x = 0; x < kGrid.nx; ++x) {
        EXPECT_EQ(right(x, 0), c(std::clamp(x - d, 0, kGrid.nx - 1), 0));
    }
}

TEST(Lightfield, ValuesInUnitRange) {
    const auto scenes = standard_scenes(3e-4, -3e-4);
    ASSERT_EQ(scenes.size(), 3u);
    for (const SceneSpec& s : scenes) {
        const LightFieldTarget lf = render_lightfield(s, layout(), kGrid);
        for (const ViewImage& v : lf.views) {
            for (double x : v.values()) {
                EXPECT_GE(x, 0.0);
                EXPECT_LE(x, 1.0);
                EXPECT_EQ(x, static_cast<double>(static_cast<float>(x)));
            }
        }
    }
    EXPECT_NE(scenes[0].id, scenes[1].id);
}

TEST(Lightfield, RenderErrors) {
    SceneSpec empty;
    EXPECT_THROW(render_lightfield(empty, layout(), kGrid), DomainError);
    SceneSpec bad;
    bad.layers = {constant_layer(1.0, std::numeric_limits<double>::infinity())};
    EXPECT_THROW(render_lightfield(bad, layout(), kGrid), DomainError);
}

TEST(Lightfield, SaveLoadRoundTrip) {
    const auto dir = temp_dir("roundtrip");
    const LightFieldTarget lf = render_lightfield(standard_scenes(3e-4, -3e-4)[2], layout(), kGrid);
    save_lightfield(lf, dir, true);
    EXPECT_TRUE(fs::exists(dir / "meta.json"));
    EXPECT_TRUE(fs::exists(dir / "view_2_1.f32"));
    const LightFieldTarget back = load_lightfield(dir);
    ASSERT_EQ(back.count(), lf.count());
    for (std::size_t p = 0; p < lf.count(); ++p) EXPECT_EQ(back.views[p], lf.views[p]);
    EXPECT_EQ(back.grid(), lf.grid());
    EXPECT_EQ(back.scene, lf.scene);
    EXPECT_EQ(back.layout.pupils.size(), 9u);
    EXPECT_DOUBLE_EQ(back.layout.pupils[3].cx, lf.layout.pupils[3].cx);
}

TEST(Lightfield, CorruptDirectories) {
    const LightFieldTarget lf = render_lightfield(standard_scenes(3e-4, -3e-4)[0], layout(), kGrid);

    auto dir = temp_dir("truncated");
    save_lightfield(lf, dir);
    fs::resize_file(dir / "view_1_1.f32", 100);
    EXPECT_THROW(load_lightfield(dir), IoError);

    dir = temp_dir("missing");
    save_lightfield(lf, dir);
    fs::remove(dir / "view_0_2.f32");
    EXPECT_THROW(load_lightfield(dir), IoError);

    dir = temp_dir("extra");
    save_lightfield(lf, dir);
    fs::copy_file(dir / "view_0_0.f32", dir / "view_3_0.f32");
    EXPECT_THROW(load_lightfield(dir), IoError);

    EXPECT_THROW(load_lightfield(temp_dir("nothing")), IoError);
}

TEST(Lightfield, SceneJsonStrict) {
    const SceneSpec s = standard_scenes(3e-4, -3e-4)[1];
    const nlohmann::json j = scene_to_json(s);
    EXPECT_EQ(scene_to_json(scene_from_json(j)), j);
    nlohmann::json extra = j;
    extra["colour"] = "red";
    EXPECT_THROW(scene_from_json(extra), ConfigError);
    nlohmann::json wrong = j;
    wrong["layers"][0]["depth"] = "deep";
    EXPECT_THROW(scene_from_json(wrong), ConfigError);
    nlohmann::json kind = j;
    kind["layers"][0]["texture"]["kind"] = "plaid";
    EXPECT_THROW(scene_from_json(kind), ConfigError);
    const PupilLayout lay = layout();
    EXPECT_EQ(layout_to_json(layout_from_json(layout_to_json(lay))), layout_to_json(lay));
}
