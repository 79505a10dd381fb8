#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "lfholo/field.hpp"
#include "lfholo/fourier_plane.hpp"

namespace lfholo {

enum class TextureKind { constant, checkerboard, bars, gradient_disk, rings, noise };

/// Procedural amplitude pattern in [low, high]. Geometry is in pixels
/// (period) or fractions of the image size (centre, radius).
struct Texture {
    TextureKind kind = TextureKind::constant;
    double low = 0.0;
    double high = 1.0;
    int period = 8;
    bool vertical = true;  ///< bars orientation
    double cx = 0.5;
    double cy = 0.5;
    double radius = 0.3;
};

enum class ShapeKind { full, disk, rect };

/// Coverage (alpha support) of a layer, in fractions of the image size.
struct Shape {
    ShapeKind kind = ShapeKind::full;
    double cx = 0.5;
    double cy = 0.5;
    double rx = 0.25;
    double ry = 0.25;
};

/// One planar layer. `depth` is its signed distance (m) from the nominal
/// image plane along the propagation axis; positive is toward the viewer.
struct Layer {
    Texture texture;
    Shape shape;
    double opacity = 1.0;
    double depth = 0.0;
};

enum class EdgeMode { wrap, clamp };

struct SceneSpec {
    std::string id = "scene";
    std::vector<Layer> layers;
    EdgeMode edge = EdgeMode::wrap;
    std::uint64_t seed = 0;
};

/// V x V target amplitudes, one view per pupil of `layout` (same order).
/// Values are float32-exact so the on-disk format round-trips bitwise.
struct LightFieldTarget {
    PupilLayout layout;
    std::vector<ViewImage> views;
    nlohmann::json scene;

    const GridSpec& grid() const { return views.front().grid(); }
    std::size_t count() const { return views.size(); }
};

/// Integer pixel shift per pupil step of a layer at `depth`, for pupils
/// spaced `step_freq` cycles/m apart: round(-lambda * step_freq * depth / pitch).
int disparity_per_step(double depth, double step_freq, double wavelength, double pitch);

/// Composites the layers back to front (ascending depth) for every pupil,
/// shifting each layer by its disparity times the pupil offset.
LightFieldTarget render_lightfield(const SceneSpec& scene, const PupilLayout& layout, const GridSpec& grid);

/// Directory format: meta.json + view_{row}_{col}.f32 (little-endian float32, row-major).
void save_lightfield(const LightFieldTarget& target, const std::filesystem::path& dir, bool png_previews = false);
LightFieldTarget load_lightfield(const std::filesystem::path& dir);

nlohmann::json scene_to_json(const SceneSpec& scene);
/// Strict: unknown keys or wrong types raise ConfigError.
SceneSpec scene_from_json(const nlohmann::json& j);

nlohmann::json layout_to_json(const PupilLayout& layout);
PupilLayout layout_from_json(const nlohmann::json& j);

/// The three procedural two-layer test scenes used for desk-scale comparisons.
std::vector<SceneSpec> standard_scenes(double near_depth, double far_depth);

} // namespace lfholo
