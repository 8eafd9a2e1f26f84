#include "cli/presets.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cli/manifest.hpp"
#include "cli/scenarios.hpp"

namespace reparamqm::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string check_line(const std::string& what, double value, bool ok) {
  return (ok ? "  [ok]   " : "  [FAIL] ") + what + " = " + format_double(value);
}

/// metric < threshold, appended to the result.
void check_below(PresetResult& result, const RunManifest& manifest,
                 const std::string& metric, double threshold) {
  const auto it = manifest.metrics.find(metric);
  if (it == manifest.metrics.end()) {
    result.passed = false;
    result.lines.push_back("  [FAIL] missing metric '" + metric + "'");
    return;
  }
  const bool ok = it->second < threshold;
  result.passed = result.passed && ok;
  result.lines.push_back(check_line(
      metric + " (< " + format_double(threshold) + ")", it->second, ok));
}

void check_run_ok(PresetResult& result, const RunManifest& manifest) {
  if (!manifest.ok) {
    result.passed = false;
    result.lines.push_back("  [FAIL] scenario error: " + manifest.error);
  }
}

ExperimentConfig equivalence_config(const std::string& outdir) {
  ExperimentConfig cfg;
  cfg.scenario = Scenario::KgEquivalence;
  cfg.grid_n = 256;
  cfg.grid_length = kTwoPi;
  cfg.dt = 0.01;
  cfg.steps = 100;  // T = 1.0
  cfg.stride = 10;  // 10 snapshots
  cfg.seed = 20;
  cfg.output_directory = outdir;
  return cfg;
}

ExperimentConfig mechanics_config(const std::string& outdir, long steps) {
  ExperimentConfig cfg;
  cfg.scenario = Scenario::RiConstraint;
  cfg.dt = 1e-3;
  cfg.steps = steps;
  cfg.output_directory = outdir;
  cfg.format_csv = true;
  return cfg;
}

std::vector<std::vector<double>> read_numeric_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open '" + path.string() + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
    }
    if (first && !numeric) {
      first = false;
      continue;
    }
    first = false;
    if (numeric) rows.push_back(std::move(row));
  }
  return rows;
}

PresetResult run_strang_convergence(const std::string& outdir) {
  PresetResult result;
  result.passed = true;

  const double horizon = 1.0;
  const std::vector<double> dts{0.02, 0.01, 0.005};
  std::vector<fs::path> snapshots;
  for (double dt : dts) {
    ExperimentConfig cfg;
    cfg.scenario = Scenario::EvolveNonrel;
    cfg.grid_n = 256;
    cfg.grid_length = 32.0;
    cfg.initial_kind = InitialKind::Gaussian;
    cfg.initial_center = 18.0;
    cfg.initial_width = 1.0;
    cfg.potential_kind = PotentialKind::Harmonic;
    cfg.potential_strength = 1.0;
    cfg.potential_center = 16.0;
    cfg.dt = dt;
    cfg.steps = std::lround(horizon / dt);
    cfg.stride = cfg.steps;  // final snapshot only
    cfg.output_directory = outdir + "/dt_" + format_double(dt);
    const RunManifest manifest = run(cfg);
    check_run_ok(result, manifest);
    if (!manifest.ok) return result;
    snapshots.push_back(fs::path(cfg.output_directory) / "snapshot_1.csv");
  }

  // L2 distances between consecutive refinements, read back from the CSVs.
  std::vector<double> errors;
  for (size_t i = 0; i + 1 < snapshots.size(); ++i) {
    const auto coarse = read_numeric_csv(snapshots[i]);
    const auto fine = read_numeric_csv(snapshots[i + 1]);
    if (coarse.size() != fine.size() || coarse.empty()) {
      result.passed = false;
      result.lines.push_back("  [FAIL] snapshot size mismatch");
      return result;
    }
    double acc = 0.0;
    for (size_t j = 0; j < coarse.size(); ++j) {
      const double dr = coarse[j][1] - fine[j][1];
      const double di = coarse[j][2] - fine[j][2];
      acc += dr * dr + di * di;
    }
    errors.push_back(std::sqrt(acc * (32.0 / 256.0)));
  }

  const double ratio = errors[0] / errors[1];
  const bool ok = ratio > 3.6 && ratio < 4.4;
  result.passed = result.passed && ok;
  result.lines.push_back(
      check_line("error ratio per dt halving (4 +/- 10%)", ratio, ok));
  return result;
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> list = {
      {"dispersion-exactness",
       "Free square-root plane wave vs exp(-i c sqrt(mu^2+k^2) t), N=256, t=10",
       [](const std::string& outdir) {
         ExperimentConfig cfg;
         cfg.scenario = Scenario::EvolveSqrt;
         cfg.grid_n = 256;
         cfg.grid_length = kTwoPi;
         cfg.initial_kind = InitialKind::PlaneWave;
         cfg.initial_mode = 3;
         cfg.dt = 10.0;
         cfg.steps = 1;
         cfg.output_directory = outdir;
         PresetResult result;
         result.passed = true;
         const RunManifest manifest = run(cfg);
         check_run_ok(result, manifest);
         check_below(result, manifest, "dispersion_error_max", 1e-12);
         return result;
       }},
      {"equivalence-direction-a",
       "KG-evolved band-limited field mapped to psi solves the square-root "
       "equation",
       [](const std::string& outdir) {
         PresetResult result;
         result.passed = true;
         const RunManifest manifest = run(equivalence_config(outdir));
         check_run_ok(result, manifest);
         check_below(result, manifest, "schrodinger_residual", 1e-10);
         return result;
       }},
      {"equivalence-direction-b",
       "psi -> phi reconstruction solves the discrete KG equation; round trip "
       "is the identity",
       [](const std::string& outdir) {
         PresetResult result;
         result.passed = true;
         const RunManifest manifest = run(equivalence_config(outdir));
         check_run_ok(result, manifest);
         check_below(result, manifest, "kg_equation_residual", 1e-10);
         check_below(result, manifest, "kg_residual", 1e-10);
         check_below(result, manifest, "roundtrip_residual", 1e-10);
         return result;
       }},
      {"density-identity",
       "|psi|^2 equals the KG energy density pointwise along 10 snapshots",
       [](const std::string& outdir) {
         PresetResult result;
         result.passed = true;
         const RunManifest manifest = run(equivalence_config(outdir));
         check_run_ok(result, manifest);
         check_below(result, manifest, "density_residual_max", 1e-12);
         return result;
       }},
      {"energy-probability",
       "kg_energy(phi(t)) = |psi(t)|^2, constant over 10^3 steps",
       [](const std::string& outdir) {
         ExperimentConfig cfg;
         cfg.scenario = Scenario::EvolveKg;
         cfg.grid_n = 256;
         cfg.grid_length = kTwoPi;
         cfg.initial_kind = InitialKind::PlaneWave;
         cfg.initial_mode = 2;
         cfg.dt = 1e-3;
         cfg.steps = 1000;
         cfg.stride = 1;
         cfg.format_csv = false;  // manifest only; 10^3 snapshots are not useful
         cfg.output_directory = outdir;
         PresetResult result;
         result.passed = true;
         const RunManifest manifest = run(cfg);
         check_run_ok(result, manifest);
         check_below(result, manifest, "energy_drift_max", 1e-10);
         check_below(result, manifest, "probability_identity_max", 1e-10);
         return result;
       }},
      {"nonrel-limit",
       "Reduced-phase residual k^4/(8 c^2) at c=10 and the c^-2 scaling law",
       [](const std::string& outdir) {
         ExperimentConfig cfg;
         cfg.scenario = Scenario::NonrelLimitScan;
         cfg.grid_n = 64;
         cfg.grid_length = kTwoPi;
         cfg.initial_kind = InitialKind::PlaneWave;
         cfg.initial_mode = 1;
         cfg.dt = 1.0;
         cfg.steps = 1;
         cfg.output_directory = outdir;
         PresetResult result;
         result.passed = true;
         const RunManifest manifest = run(cfg);
         check_run_ok(result, manifest);
         const auto ratio = manifest.metrics.find("ratio_c10");
         const bool ratio_ok = ratio != manifest.metrics.end() &&
                               std::abs(ratio->second - 1.0) < 0.05;
         result.passed = result.passed && ratio_ok;
         result.lines.push_back(check_line(
             "residual/expected at c=10 (within 5%)",
             ratio == manifest.metrics.end() ? -1.0 : ratio->second, ratio_ok));
         const auto slope = manifest.metrics.find("slope");
         const bool slope_ok = slope != manifest.metrics.end() &&
                               std::abs(slope->second + 2.0) < 0.1;
         result.passed = result.passed && slope_ok;
         result.lines.push_back(check_line(
             "log-log slope (-2.0 +/- 0.1)",
             slope == manifest.metrics.end() ? 0.0 : slope->second, slope_ok));
         return result;
       }},
      {"constraint-vanishing",
       "max |p_t + H| along RK4 trajectories of the three models",
       [](const std::string& outdir) {
         PresetResult result;
         result.passed = true;
         const RunManifest manifest = run(mechanics_config(outdir, 10000));
         check_run_ok(result, manifest);
         check_below(result, manifest, "constraint_max_free", 1e-8);
         check_below(result, manifest, "constraint_max_harmonic", 1e-8);
         check_below(result, manifest, "constraint_max_relativistic", 1e-8);
         return result;
       }},
      {"hamiltonian-factorization",
       "|(p qdot + p_t tdot - L~) - tdot (p_t + H)| at 100 random points per "
       "model",
       [](const std::string& outdir) {
         PresetResult result;
         result.passed = true;
         const RunManifest manifest = run(mechanics_config(outdir, 100));
         check_run_ok(result, manifest);
         check_below(result, manifest, "factorization_max_free", 1e-10);
         check_below(result, manifest, "factorization_max_harmonic", 1e-10);
         check_below(result, manifest, "factorization_max_relativistic", 1e-10);
         return result;
       }},
      {"gauge-invariance",
       "Reconstructed x(t) agrees across tau^3 and exp(tau)-1 gauges",
       [](const std::string& outdir) {
         ExperimentConfig cfg;
         cfg.scenario = Scenario::GaugeInvariance;
         cfg.dt = 1e-3;
         cfg.steps = 6400;
         cfg.output_directory = outdir;
         PresetResult result;
         result.passed = true;
         const RunManifest manifest = run(cfg);
         check_run_ok(result, manifest);
         check_below(result, manifest, "gauge_disagreement_max", 1e-7);
         check_below(result, manifest, "free_linear_error", 1e-9);
         return result;
       }},
      {"mass-shell",
       "p_t = -c sqrt(m^2 c^2 + p^2) across 100 random subluminal velocities",
       [](const std::string& outdir) {
         PresetResult result;
         result.passed = true;
         ExperimentConfig cfg = mechanics_config(outdir, 100);
         cfg.mechanics_model = "relativistic";
         const RunManifest manifest = run(cfg);
         check_run_ok(result, manifest);
         check_below(result, manifest, "mass_shell_max", 1e-12);
         return result;
       }},
      {"robertson",
       "Minimal Gaussian saturates dx dp = hbar/2; 20 random states obey the "
       "bound",
       [](const std::string& outdir) {
         ExperimentConfig cfg;
         cfg.scenario = Scenario::Uncertainty;
         cfg.grid_n = 512;
         cfg.grid_length = 32.0;
         cfg.initial_kind = InitialKind::Gaussian;
         cfg.initial_center = 16.0;
         cfg.initial_width = 1.0;  // L / 32
         cfg.seed = 11;
         cfg.output_directory = outdir;
         PresetResult result;
         result.passed = true;
         const RunManifest manifest = run(cfg);
         check_run_ok(result, manifest);
         const auto saturation = manifest.metrics.find("saturation_rel_error");
         const bool sat_ok = saturation != manifest.metrics.end() &&
                             std::abs(saturation->second) < 1e-6;
         result.passed = result.passed && sat_ok;
         result.lines.push_back(check_line(
             "|dx dp / (hbar/2) - 1| (< 1e-6)",
             saturation == manifest.metrics.end() ? -1.0 : saturation->second,
             sat_ok));
         const auto min_ratio = manifest.metrics.find("min_ratio");
         const bool ratio_ok = min_ratio != manifest.metrics.end() &&
                               min_ratio->second >= 1.0 - 1e-6;
         result.passed = result.passed && ratio_ok;
         result.lines.push_back(check_line(
             "min dx dp / (hbar/2) (>= 1 - 1e-6)",
             min_ratio == manifest.metrics.end() ? 0.0 : min_ratio->second,
             ratio_ok));
         return result;
       }},
      {"poisson-brackets",
       "{x,p} = 1, {t,p_t} = 1, cross brackets vanish",
       [](const std::string& outdir) {
         PresetResult result;
         result.passed = true;
         ExperimentConfig cfg = mechanics_config(outdir, 100);
         cfg.mechanics_model = "free";
         const RunManifest manifest = run(cfg);
         check_run_ok(result, manifest);
         check_below(result, manifest, "bracket_xp_error", 1e-8);
         check_below(result, manifest, "bracket_tpt_error", 1e-8);
         check_below(result, manifest, "bracket_cross_max", 1e-8);
         return result;
       }},
      {"strang-convergence",
       "Split-step error in a harmonic potential shrinks 4x per dt halving",
       run_strang_convergence},
  };
  return list;
}

const Preset* find_preset(const std::string& name) {
  for (const Preset& preset : presets()) {
    if (preset.name == name) return &preset;
  }
  return nullptr;
}

}  // namespace reparamqm::cli
