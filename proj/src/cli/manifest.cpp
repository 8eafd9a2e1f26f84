#include "cli/manifest.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>

#include "json.hpp"

namespace reparamqm::cli {

namespace fs = std::filesystem;

std::string format_double(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

namespace {

nlohmann::json config_json(const ExperimentConfig& cfg) {
  // Echo with the same flat dotted keys as the text format.
  nlohmann::json j;
  j["scenario"] = to_string(cfg.scenario);
  if (cfg.grid_n != 0) {
    j["grid.n"] = cfg.grid_n;
    j["grid.length"] = cfg.grid_length;
  }
  j["constants.hbar"] = cfg.hbar;
  j["constants.c"] = cfg.c;
  j["constants.mass"] = cfg.mass;
  switch (cfg.initial_kind) {
    case InitialKind::Unset:
      break;
    case InitialKind::Gaussian:
      j["initial.kind"] = "gaussian";
      j["initial.center"] = cfg.initial_center;
      j["initial.width"] = cfg.initial_width;
      j["initial.momentum"] = cfg.initial_momentum;
      break;
    case InitialKind::PlaneWave:
      j["initial.kind"] = "plane-wave";
      j["initial.mode"] = cfg.initial_mode;
      break;
    case InitialKind::CustomFile:
      j["initial.kind"] = "custom-file";
      j["initial.path"] = cfg.initial_path;
      break;
  }
  if (cfg.potential_kind == PotentialKind::Harmonic) {
    j["potential.kind"] = "harmonic";
    j["potential.strength"] = cfg.potential_strength;
    j["potential.center"] = cfg.potential_center;
  }
  if (cfg.dt != 0.0) j["time.dt"] = cfg.dt;
  if (cfg.steps >= 0) j["time.steps"] = cfg.steps;
  j["time.stride"] = cfg.resolved_stride();
  j["output.directory"] = cfg.output_directory;
  j["output.formats"] =
      cfg.format_csv && cfg.format_json ? "csv,json"
                                        : (cfg.format_csv ? "csv" : "json");
  j["seed"] = cfg.seed;
  if (cfg.scenario == Scenario::NonrelLimitScan) {
    j["scan.c_values"] = cfg.scan_c_values;
  }
  if (cfg.scenario == Scenario::RiConstraint) {
    j["mechanics.model"] = cfg.mechanics_model;
  }
  if (cfg.scenario == Scenario::KgEquivalence) {
    j["equivalence.band_fraction"] = cfg.band_fraction;
  }
  return j;
}

}  // namespace

std::string metrics_json(const RunManifest& manifest) {
  nlohmann::json j(manifest.metrics);
  return j.dump();
}

void write_manifest(const RunManifest& manifest, const std::string& directory) {
  const fs::path dir(directory);
  fs::create_directories(dir);

  nlohmann::json j;
  j["config"] = config_json(manifest.config);
  j["version"] = manifest.version;
  j["duration_seconds"] = manifest.duration_seconds;
  j["ok"] = manifest.ok;
  j["error"] = manifest.ok ? nlohmann::json() : nlohmann::json(manifest.error);
  j["metrics"] = nlohmann::json(manifest.metrics);
  if (manifest.config.format_json && !manifest.series.empty()) {
    j["series"] = {{"columns", manifest.series_columns},
                   {"rows", manifest.series}};
  }

  std::ofstream out(dir / "manifest.json");
  if (!out) {
    throw ScenarioError("cannot write manifest.json in '" + directory + "'");
  }
  out << j.dump(2) << "\n";

  if (manifest.config.format_csv && !manifest.series.empty()) {
    std::ofstream csv(dir / "metrics.csv");
    if (!csv) {
      throw ScenarioError("cannot write metrics.csv in '" + directory + "'");
    }
    for (size_t i = 0; i < manifest.series_columns.size(); ++i) {
      if (i > 0) csv << ",";
      csv << manifest.series_columns[i];
    }
    csv << "\n";
    for (const auto& row : manifest.series) {
      for (size_t i = 0; i < row.size(); ++i) {
        if (i > 0) csv << ",";
        csv << format_double(row[i]);
      }
      csv << "\n";
    }
  }
}

}  // namespace reparamqm::cli
