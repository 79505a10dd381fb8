#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "lfholo/baselines.hpp"
#include "lfholo/lightfield.hpp"
#include "lfholo/optimizer.hpp"

namespace lfholo {

/// Everything one `optimize` run needs. Parsed strictly from JSON: unknown
/// keys and mistyped values are ConfigErrors, nothing is coerced.
struct RunConfig {
    BaselineId baseline = BaselineId::V;
    BaseParams base;
    Hyper hyper;
    std::optional<SceneSpec> scene;
    std::optional<std::filesystem::path> target_dir;
    std::filesystem::path output = "out";
    std::uint64_t seed = 0;
    Precision precision = Precision::f64;
    int jobs = 1;
};

/// Desk-scale defaults: 64x64 SLM, 10.8 um pitch, 632.8 nm.
BaseParams default_base_params();

RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);
/// Reads a config file: IoError when unreadable, ConfigError when not valid JSON.
nlohmann::json read_config_json(const std::filesystem::path& path);
/// Fully normalized form (every default filled in); parses back to the same config.
nlohmann::json run_config_to_json(const RunConfig& cfg);

BaseParams parse_base_params(const nlohmann::json& j);
nlohmann::json base_params_to_json(const BaseParams& base);

/// Descriptive dump of a built SystemConfig, including the source array.
nlohmann::json system_to_json(const SystemConfig& cfg);

Precision parse_precision(const std::string& name);
std::string to_string(Precision precision);

/// Target of a run: the referenced light-field directory or the scene
/// rendered on the simulation grid with the configuration's pupil layout.
LightFieldTarget resolve_target(const RunConfig& run, const SystemConfig& system);

} // namespace lfholo
