#pragma once

#include <map>
#include <string>
#include <vector>

#include "cli/config.hpp"

namespace reparamqm::cli {

inline constexpr const char* kLibraryVersion = "0.1.0";

/// A scenario threw; the CLI maps this to exit code 2. The manifest is still
/// written, with the error field populated.
struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Run record: config echo, version, wall-clock duration, named scalar
/// metrics, and the per-snapshot/per-point series behind metrics.csv.
struct RunManifest {
  ExperimentConfig config;
  std::string version = kLibraryVersion;
  double duration_seconds = 0.0;
  bool ok = false;
  std::string error;

  std::map<std::string, double> metrics;
  std::vector<std::string> series_columns;
  std::vector<std::vector<double>> series;
};

/// Shortest decimal representation that round-trips the double (<= 17
/// significant digits).
std::string format_double(double value);

/// Writes manifest.json (always, stable key order) and metrics.csv (when the
/// config enables CSV output and a series is present) into `directory`.
void write_manifest(const RunManifest& manifest, const std::string& directory);

/// JSON text of the metrics map alone; used for determinism checks.
std::string metrics_json(const RunManifest& manifest);

}  // namespace reparamqm::cli
