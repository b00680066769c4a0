// experiments.hpp — maps a validated RunConfig to the corresponding sweep,
// writes <experiment>.csv and <experiment>.summary.json, and manages the
// result cache.

#pragma once

#include "qpt/run_config.hpp"

#include <filesystem>
#include <string>

namespace qpt {

struct RunOptions {
    std::string out_dir = ".";
    int threads = 1;
};

struct RunResult {
    std::filesystem::path csv_path;
    std::filesystem::path summary_path;
    bool cache_hit = false;
};

// Throws ConfigError for configuration/IO problems and NumericError when a
// whole run (not a single grid point) fails numerically. Per-point numeric
// failures become NaN rows and are counted in the summary.
RunResult run_experiment(const RunConfig& cfg, const RunOptions& opts);

}  // namespace qpt
