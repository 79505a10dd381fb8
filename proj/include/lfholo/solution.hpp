#pragma once

#include <filesystem>

#include "lfholo/run_config.hpp"

namespace lfholo {

/// A finished optimization as stored on disk.
struct Solution {
    RunConfig run;
    SystemConfig system;
    HologramParams params;
    double scale = 1.0;
};

/// Writes the authoritative artifacts of a run into `dir`:
/// config_echo.json, system.json, solution.json, phase_<t>.{f32,json,png},
/// mask_<t>.{f32,json,png}, target/, recon/, report.json, loss.csv, metrics.csv.
void save_solution(const std::filesystem::path& dir, const RunConfig& run, const SystemConfig& system,
                   const OptimizeResult& result, const LightFieldTarget& target);

/// Rebuilds the configuration and parameters saved by save_solution.
Solution load_solution(const std::filesystem::path& dir);

/// Rows `scene,config,frames,psnr_db,ssim,view`, one per view plus a `mean` row.
std::string metrics_csv(const std::string& scene, const std::string& config, int frames,
                        const std::vector<ViewMetrics>& views);

/// Writes phases and the failing state after a numerical failure.
void save_snapshot(const std::filesystem::path& dir, const OptimizerState& state, const std::string& reason);

} // namespace lfholo
