#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace reparamqm::cli {

/// Invalid or inconsistent configuration; the CLI maps this to exit code 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Scenario {
  EvolveNonrel,
  EvolveSqrt,
  EvolveKg,
  KgEquivalence,
  NonrelLimitScan,
  RiConstraint,
  GaugeInvariance,
  Uncertainty,
};

std::string to_string(Scenario scenario);
Scenario scenario_from_string(const std::string& name);

enum class InitialKind { Unset, Gaussian, PlaneWave, CustomFile };
enum class PotentialKind { None, Harmonic };

/// Flat, typed key-value configuration with dotted sections; the grammar is
/// documented in the README. Unknown keys are rejected by name.
struct ExperimentConfig {
  Scenario scenario = Scenario::EvolveNonrel;

  int grid_n = 0;            // 0 = not provided
  double grid_length = 0.0;  // 0 = not provided

  double hbar = 1.0;
  double c = 1.0;
  double mass = 1.0;

  InitialKind initial_kind = InitialKind::Unset;
  double initial_center = 0.0;
  double initial_width = 0.0;
  double initial_momentum = 0.0;
  int initial_mode = 0;
  std::string initial_path;

  PotentialKind potential_kind = PotentialKind::None;
  double potential_strength = 1.0;
  double potential_center = 0.0;

  double dt = 0.0;  // 0 = not provided
  long steps = -1;  // -1 = not provided
  long stride = 0;  // 0 = default (= steps, or 1 when steps == 0)

  std::string output_directory = "out";
  bool format_csv = true;
  bool format_json = true;

  std::uint64_t seed = 0;

  std::vector<double> scan_c_values{5.0, 10.0, 20.0, 40.0};
  std::string mechanics_model = "all";  // free | harmonic | relativistic | all
  double band_fraction = 0.125;

  long resolved_stride() const;

  friend bool operator==(const ExperimentConfig&,
                         const ExperimentConfig&) = default;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);
std::string serialize_config(const ExperimentConfig& config);

}  // namespace reparamqm::cli
