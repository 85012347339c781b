#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "leray/config.hpp"

namespace leray {

inline constexpr const char* kCodeVersion = "leray 1.0.0";

struct RunManifest {
    std::string config_sha256;
    std::string code_version;
    std::string started_utc;
    std::string finished_utc;
    struct FileEntry {
        std::string path;  ///< relative to the output directory
        std::string sha256;
        std::uint64_t bytes = 0;
    };
    std::vector<FileEntry> files;
    std::string status;  ///< ok | analysis-failed | aborted
    int exit_code = 0;   ///< 0 pass, 2 analysis failure, 3 solver abort
};

/// Runs the solver (only when an analysis needs a trajectory, or when there
/// are no analyses at all), executes the analyses in order, writes
/// CSV/JSON/checkpoints plus manifest.json under the output directory.
/// The LERAY_OUTPUT_DIR environment variable overrides cfg.output_dir.
RunManifest run_experiment(const ExperimentConfig& cfg);

/// Rebuild a trajectory from a run directory (run_meta.json + norms.csv +
/// snapshot checkpoints).
Trajectory load_trajectory(const std::string& dir);

/// Execute analyses against an existing trajectory, writing outputs next to
/// it. Returns 0 or 2 (analysis failure).
int run_analyses_on(const Trajectory& traj, const std::vector<AnalysisSpec>& analyses,
                    const std::string& dir, std::vector<RunManifest::FileEntry>* files);

}  // namespace leray
