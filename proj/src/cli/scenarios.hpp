#pragma once

#include "cli/manifest.hpp"

namespace reparamqm::cli {

/// Executes the configured scenario and writes snapshot files, metrics.csv
/// and manifest.json into the output directory. Startup problems (bad config
/// values, unwritable output directory) throw ConfigError before anything
/// runs; scenario failures are captured in the returned manifest (ok = false,
/// error populated) after the manifest has been written.
RunManifest run(const ExperimentConfig& config);

/// Sweep parallelism cap: REPARAM_QM_THREADS when set (>= 1), else the
/// machine parallelism.
unsigned thread_cap();

}  // namespace reparamqm::cli
