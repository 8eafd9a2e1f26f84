#include "cli/scenarios.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "reparamqm/equivalence.hpp"
#include "reparamqm/evolution.hpp"
#include "reparamqm/mechanics.hpp"
#include "reparamqm/rng.hpp"
#include "reparamqm/spectral.hpp"
#include "reparamqm/synth.hpp"

namespace reparamqm::cli {

namespace fs = std::filesystem;

unsigned thread_cap() {
  const unsigned hardware = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("REPARAM_QM_THREADS")) {
    const long parsed = std::strtol(env, nullptr, 10);
    if (parsed >= 1) return static_cast<unsigned>(parsed);
  }
  return hardware;
}

namespace {

void parallel_for(size_t count, const std::function<void(size_t)>& body) {
  const unsigned workers =
      std::min<size_t>(thread_cap(), count) > 0
          ? static_cast<unsigned>(std::min<size_t>(thread_cap(), count))
          : 1u;
  if (workers <= 1) {
    for (size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      while (!failed.load()) {
        const size_t i = next.fetch_add(1);
        if (i >= count) break;
        try {
          body(i);
        } catch (...) {
          std::scoped_lock lock(error_mutex);
          if (!error) error = std::current_exception();
          failed.store(true);
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

void write_complex_csv(const fs::path& path, const ComplexField& field) {
  std::ofstream out(path);
  if (!out) throw ScenarioError("cannot write " + path.string());
  out << "x,re,im\n";
  for (int j = 0; j < field.grid.n; ++j) {
    out << format_double(j * field.grid.spacing) << ","
        << format_double(field.values[static_cast<size_t>(j)].real()) << ","
        << format_double(field.values[static_cast<size_t>(j)].imag()) << "\n";
  }
}

void write_kg_csv(const fs::path& path, const KleinGordonState& state) {
  std::ofstream out(path);
  if (!out) throw ScenarioError("cannot write " + path.string());
  out << "x,phi,phi_dot\n";
  for (int j = 0; j < state.phi.grid.n; ++j) {
    out << format_double(j * state.phi.grid.spacing) << ","
        << format_double(state.phi.values[static_cast<size_t>(j)]) << ","
        << format_double(state.phi_dot.values[static_cast<size_t>(j)]) << "\n";
  }
}

std::vector<std::vector<double>> read_csv_rows(const fs::path& path,
                                               size_t columns) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
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
        size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (used != cell.size()) numeric = false;
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
    }
    if (first && !numeric) {  // header line
      first = false;
      continue;
    }
    first = false;
    if (!numeric || row.size() != columns) {
      throw ConfigError("'" + path.string() + "': expected " +
                        std::to_string(columns) + " numeric columns");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

GridSpec build_grid(const ExperimentConfig& cfg) {
  try {
    return GridSpec(cfg.grid_n, cfg.grid_length);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

PhysicalConstants build_constants(const ExperimentConfig& cfg) {
  return PhysicalConstants(cfg.hbar, cfg.c, cfg.mass);
}

ComplexField build_initial_psi(const ExperimentConfig& cfg,
                               const GridSpec& grid) {
  switch (cfg.initial_kind) {
    case InitialKind::Gaussian:
      return gaussian_packet(grid, cfg.initial_center, cfg.initial_width,
                             cfg.initial_momentum / cfg.hbar);
    case InitialKind::PlaneWave:
      return plane_wave(grid, cfg.initial_mode);
    case InitialKind::CustomFile: {
      const auto rows = read_csv_rows(cfg.initial_path, 3);
      if (rows.size() != static_cast<size_t>(grid.n)) {
        throw ConfigError("initial.path: file has " +
                          std::to_string(rows.size()) + " rows, grid.n is " +
                          std::to_string(grid.n));
      }
      std::vector<Complex> values(rows.size());
      for (size_t j = 0; j < rows.size(); ++j) {
        values[j] = Complex(rows[j][1], rows[j][2]);
      }
      return ComplexField(grid, std::move(values));
    }
    case InitialKind::Unset:
      break;
  }
  throw ConfigError("initial.kind: required");
}

KleinGordonState build_initial_kg(const ExperimentConfig& cfg,
                                  const GridSpec& grid,
                                  const PhysicalConstants& pc) {
  switch (cfg.initial_kind) {
    case InitialKind::Gaussian: {
      std::vector<double> phi(static_cast<size_t>(grid.n));
      for (int j = 0; j < grid.n; ++j) {
        const double u = j * grid.spacing - cfg.initial_center;
        phi[static_cast<size_t>(j)] =
            std::exp(-u * u / (4.0 * cfg.initial_width * cfg.initial_width));
      }
      return KleinGordonState(RealField(grid, std::move(phi)),
                              RealField::zero(grid), 0.0);
    }
    case InitialKind::PlaneWave: {
      const double k =
          2.0 * std::numbers::pi * cfg.initial_mode / grid.length;
      const double omega = mode_frequency(k, pc);
      std::vector<double> phi(static_cast<size_t>(grid.n));
      std::vector<double> phi_dot(static_cast<size_t>(grid.n));
      for (int j = 0; j < grid.n; ++j) {
        const double x = j * grid.spacing;
        phi[static_cast<size_t>(j)] = std::cos(k * x);
        phi_dot[static_cast<size_t>(j)] = omega * std::sin(k * x);
      }
      return KleinGordonState(RealField(grid, std::move(phi)),
                              RealField(grid, std::move(phi_dot)), 0.0);
    }
    case InitialKind::CustomFile: {
      const auto rows = read_csv_rows(cfg.initial_path, 3);
      if (rows.size() != static_cast<size_t>(grid.n)) {
        throw ConfigError("initial.path: file has " +
                          std::to_string(rows.size()) + " rows, grid.n is " +
                          std::to_string(grid.n));
      }
      std::vector<double> phi(rows.size()), phi_dot(rows.size());
      for (size_t j = 0; j < rows.size(); ++j) {
        phi[j] = rows[j][1];
        phi_dot[j] = rows[j][2];
      }
      return KleinGordonState(RealField(grid, std::move(phi)),
                              RealField(grid, std::move(phi_dot)), 0.0);
    }
    case InitialKind::Unset:
      break;
  }
  throw ConfigError("initial.kind: required");
}

std::optional<RealField> build_potential(const ExperimentConfig& cfg,
                                         const GridSpec& grid) {
  if (cfg.potential_kind == PotentialKind::None) return std::nullopt;
  std::vector<double> v(static_cast<size_t>(grid.n));
  for (int j = 0; j < grid.n; ++j) {
    const double u = j * grid.spacing - cfg.potential_center;
    v[static_cast<size_t>(j)] = 0.5 * cfg.potential_strength * u * u;
  }
  return RealField(grid, std::move(v));
}

double max_abs_diff(const ComplexField& a, const ComplexField& b) {
  double worst = 0.0;
  for (size_t j = 0; j < a.values.size(); ++j) {
    worst = std::max(worst, std::abs(a.values[j] - b.values[j]));
  }
  return worst;
}

// --- scenario bodies -------------------------------------------------------

void run_evolve_schrodinger_like(const ExperimentConfig& cfg,
                                 RunManifest& manifest, const fs::path& outdir,
                                 bool relativistic) {
  const GridSpec grid = build_grid(cfg);
  const PhysicalConstants pc = build_constants(cfg);
  const ComplexField psi0 = build_initial_psi(cfg, grid);
  const auto potential = build_potential(cfg, grid);
  if (relativistic && potential.has_value()) {
    throw ConfigError(
        "potential.kind: the square-root propagator is free-theory only");
  }

  const long stride = cfg.resolved_stride();
  const long legs = cfg.steps == 0 ? 0 : cfg.steps / stride;
  const double norm0 = norm(psi0);

  manifest.series_columns = {"snapshot", "time", "norm", "norm_drift",
                             "dispersion_error"};
  SchrodingerState state{psi0, 0.0};

  const double k_mode =
      2.0 * std::numbers::pi * cfg.initial_mode / grid.length;
  const bool track_dispersion =
      cfg.initial_kind == InitialKind::PlaneWave && !potential.has_value();

  double drift_max = 0.0;
  double dispersion_max = 0.0;
  auto record = [&](long index) {
    const double nrm = norm(state.psi);
    const double drift = std::abs(nrm - norm0) / norm0;
    drift_max = std::max(drift_max, drift);
    double dispersion_error = 0.0;
    if (track_dispersion) {
      const double omega =
          relativistic
              ? mode_frequency(k_mode, pc)
              : pc.hbar * k_mode * k_mode / (2.0 * pc.mass);
      ComplexField expected = psi0;
      const Complex phase = std::polar(1.0, -omega * state.time);
      for (auto& v : expected.values) v *= phase;
      dispersion_error = max_abs_diff(state.psi, expected);
      dispersion_max = std::max(dispersion_max, dispersion_error);
    }
    manifest.series.push_back({static_cast<double>(index), state.time, nrm,
                               drift, dispersion_error});
    if (cfg.format_csv) {
      write_complex_csv(
          outdir / ("snapshot_" + std::to_string(index) + ".csv"), state.psi);
    }
  };

  record(0);
  const EvolutionParams leg(cfg.dt, stride, pc, potential);
  for (long i = 1; i <= legs; ++i) {
    state = relativistic ? evolve_sqrt_schrodinger(state, leg)
                         : evolve_schrodinger(state, leg);
    record(i);
  }

  manifest.metrics["final_time"] = state.time;
  manifest.metrics["norm_drift_max"] = drift_max;
  if (track_dispersion) {
    manifest.metrics["dispersion_error_max"] = dispersion_max;
  }
}

void run_evolve_kg(const ExperimentConfig& cfg, RunManifest& manifest,
                   const fs::path& outdir) {
  const GridSpec grid = build_grid(cfg);
  const PhysicalConstants pc = build_constants(cfg);
  KleinGordonState state = build_initial_kg(cfg, grid, pc);

  const long stride = cfg.resolved_stride();
  const long legs = cfg.steps == 0 ? 0 : cfg.steps / stride;
  const double e0 = kg_energy(state, pc);

  manifest.series_columns = {"snapshot", "time", "energy", "energy_drift",
                             "probability_identity", "density_residual"};
  double energy_drift_max = 0.0;
  double probability_max = 0.0;
  double density_max = 0.0;

  auto record = [&](long index) {
    const double energy = kg_energy(state, pc);
    const double drift = e0 > 0.0 ? std::abs(energy - e0) / e0 : 0.0;
    const ComplexField psi = psi_from_phi(state, pc);
    const double prob = inner_product(psi, psi).real();
    const double prob_residual =
        e0 > 0.0 ? std::abs(prob - energy) / e0 : std::abs(prob - energy);
    const RealField density = density_from_phi(state, pc);
    double density_residual = 0.0;
    for (size_t j = 0; j < density.values.size(); ++j) {
      density_residual =
          std::max(density_residual,
                   std::abs(std::norm(psi.values[j]) - density.values[j]));
    }
    energy_drift_max = std::max(energy_drift_max, drift);
    probability_max = std::max(probability_max, prob_residual);
    density_max = std::max(density_max, density_residual);
    manifest.series.push_back({static_cast<double>(index), state.time, energy,
                               drift, prob_residual, density_residual});
    if (cfg.format_csv) {
      write_kg_csv(outdir / ("snapshot_" + std::to_string(index) + ".csv"),
                   state);
    }
  };

  record(0);
  const EvolutionParams leg(cfg.dt, stride, pc);
  for (long i = 1; i <= legs; ++i) {
    state = evolve_klein_gordon(state, leg);
    record(i);
  }

  manifest.metrics["final_time"] = state.time;
  manifest.metrics["initial_energy"] = e0;
  manifest.metrics["energy_drift_max"] = energy_drift_max;
  manifest.metrics["probability_identity_max"] = probability_max;
  manifest.metrics["density_residual_max"] = density_max;
}

void run_kg_equivalence(const ExperimentConfig& cfg, RunManifest& manifest,
                        const fs::path& outdir) {
  const GridSpec grid = build_grid(cfg);
  const PhysicalConstants pc = build_constants(cfg);
  SplitMix64 rng(cfg.seed);
  const int max_mode = std::max(
      1, static_cast<int>(std::lround(grid.n * cfg.band_fraction)));

  RealField phi = random_band_limited(grid, max_mode, rng);
  RealField phi_dot = random_band_limited(grid, max_mode, rng);
  KleinGordonState phi0(std::move(phi), std::move(phi_dot), 0.0);
  const double raw_energy = kg_energy(phi0, pc);
  const double scale = raw_energy > 0.0 ? 1.0 / std::sqrt(raw_energy) : 1.0;
  for (auto& v : phi0.phi.values) v *= scale;
  for (auto& v : phi0.phi_dot.values) v *= scale;

  const double horizon = cfg.dt * static_cast<double>(cfg.steps);
  const EvolutionParams params(cfg.dt, cfg.steps, pc);
  const EquivalenceReport report = verify_equivalence(phi0, horizon, params);
  manifest.metrics["schrodinger_residual"] = report.schrodinger_residual;
  manifest.metrics["kg_residual"] = report.kg_residual;
  manifest.metrics["roundtrip_residual"] = report.roundtrip_residual;
  manifest.metrics["density_residual"] = report.density_residual;

  // Independent check that the reconstruction satisfies the discrete
  // Klein-Gordon equation, with the second time derivative taken from the
  // square-root generator of psi.
  {
    const ComplexField psi_0 = psi_from_phi(phi0, pc);
    const KleinGordonState recon = phi_from_psi(psi_0, horizon, pc);
    const std::vector<double> k = wavenumbers(grid);
    ComplexField psi_hat = forward_transform(psi_0);
    ComplexField dpsi_hat = ComplexField::zero(grid);
    for (size_t j = 0; j < psi_hat.values.size(); ++j) {
      const double omega = mode_frequency(k[j], pc);
      const Complex evolved =
          psi_hat.values[j] * std::polar(1.0, -omega * horizon);
      dpsi_hat.values[j] = Complex(0.0, -omega) * evolved;
    }
    const ComplexField dpsi = inverse_transform(dpsi_hat);
    std::vector<double> phi_ddot(dpsi.values.size());
    for (size_t j = 0; j < dpsi.values.size(); ++j) {
      phi_ddot[j] = -pc.c * dpsi.values[j].imag();
    }
    const RealField helmholtz = apply_multiplier(
        recon.phi,
        SpectralMultiplier{[mu = pc.mu](double kj) {
                             return Complex(mu * mu + kj * kj, 0.0);
                           },
                           "mu^2-laplacian"});
    std::vector<Complex> residual_field(dpsi.values.size());
    for (size_t j = 0; j < residual_field.size(); ++j) {
      residual_field[j] =
          Complex(phi_ddot[j] / (pc.c * pc.c) + helmholtz.values[j], 0.0);
    }
    const ComplexField residual_hat =
        forward_transform(ComplexField(grid, std::move(residual_field)));
    double worst = 0.0;
    for (size_t j = 0; j < residual_hat.values.size(); ++j) {
      const double rho = std::hypot(pc.mu, k[j]);
      worst = std::max(worst,
                       std::abs(residual_hat.values[j]) / std::max(1.0, rho));
    }
    manifest.metrics["kg_equation_residual"] = worst;
  }

  // Snapshot series along the evolution: density identity, energy =
  // probability, energy conservation.
  const long stride = cfg.resolved_stride();
  const long legs = cfg.steps == 0 ? 0 : cfg.steps / stride;
  manifest.series_columns = {"snapshot", "time", "energy",
                             "probability_identity", "density_residual"};
  KleinGordonState state = phi0;
  const double e0 = kg_energy(state, pc);
  double density_max = 0.0;
  double prob_max = 0.0;
  double energy_drift_max = 0.0;
  auto record = [&](long index) {
    const double energy = kg_energy(state, pc);
    const ComplexField psi = psi_from_phi(state, pc);
    const double prob = inner_product(psi, psi).real();
    const RealField density = density_from_phi(state, pc);
    double density_residual = 0.0;
    for (size_t j = 0; j < density.values.size(); ++j) {
      density_residual =
          std::max(density_residual,
                   std::abs(std::norm(psi.values[j]) - density.values[j]));
    }
    density_max = std::max(density_max, density_residual);
    prob_max = std::max(prob_max, std::abs(prob - energy) / e0);
    energy_drift_max = std::max(energy_drift_max, std::abs(energy - e0) / e0);
    manifest.series.push_back({static_cast<double>(index), state.time, energy,
                               std::abs(prob - energy) / e0, density_residual});
    if (cfg.format_csv) {
      write_kg_csv(outdir / ("snapshot_" + std::to_string(index) + ".csv"),
                   state);
    }
  };
  record(0);
  const EvolutionParams leg(cfg.dt, stride, pc);
  for (long i = 1; i <= legs; ++i) {
    state = evolve_klein_gordon(state, leg);
    record(i);
  }
  manifest.metrics["density_residual_max"] = density_max;
  manifest.metrics["probability_identity_max"] = prob_max;
  manifest.metrics["energy_drift_max"] = energy_drift_max;
}

void run_nonrel_limit_scan(const ExperimentConfig& cfg, RunManifest& manifest,
                           const fs::path&) {
  const GridSpec grid = build_grid(cfg);
  const int mode = cfg.initial_mode != 0 ? cfg.initial_mode : 1;
  const double horizon = cfg.dt * static_cast<double>(cfg.steps);
  if (!(horizon > 0.0)) {
    throw ConfigError("time.steps: scan needs a positive horizon dt*steps");
  }

  const size_t points = cfg.scan_c_values.size();
  std::vector<double> residuals(points);
  std::vector<double> expected(points);

  parallel_for(points, [&](size_t i) {
    const double c = cfg.scan_c_values[i];
    const PhysicalConstants pc(cfg.hbar, c, cfg.mass);
    const ComplexField psi0 = plane_wave(grid, mode);
    const SchrodingerState rel = evolve_sqrt_schrodinger(
        {psi0, 0.0}, EvolutionParams(horizon, 1, pc));
    const ComplexField chi = nonrel_reduce(rel, pc);
    const SchrodingerState nonrel =
        evolve_schrodinger({psi0, 0.0}, EvolutionParams(horizon, 1, pc));
    const Complex overlap = inner_product(nonrel.psi, chi);
    residuals[i] = std::abs(std::arg(overlap)) / horizon;
    const double k = 2.0 * std::numbers::pi * mode / grid.length;
    expected[i] = std::pow(cfg.hbar * k * k, 2) * cfg.hbar /
                  (8.0 * std::pow(cfg.mass, 3) * c * c);
  });

  manifest.series_columns = {"c", "residual", "expected", "ratio"};
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < points; ++i) {
    const double ratio = residuals[i] / expected[i];
    manifest.series.push_back(
        {cfg.scan_c_values[i], residuals[i], expected[i], ratio});
    const double x = std::log(cfg.scan_c_values[i]);
    const double y = std::log(residuals[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    manifest.metrics["ratio_c" + std::to_string(static_cast<long>(
                                     std::lround(cfg.scan_c_values[i])))] =
        ratio;
  }
  const double n = static_cast<double>(points);
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  manifest.metrics["slope"] = slope;
}

void run_ri_constraint(const ExperimentConfig& cfg, RunManifest& manifest,
                       const fs::path&) {
  const double horizon = cfg.dt * static_cast<double>(cfg.steps);
  if (!(horizon > 0.0)) {
    throw ConfigError("time.steps: trajectory needs a positive horizon");
  }

  struct ModelRun {
    LagrangianModel model;
    Coordinates q0;
    Coordinates v0;
  };
  std::vector<ModelRun> runs;
  const bool all = cfg.mechanics_model == "all";
  if (all || cfg.mechanics_model == "free") {
    runs.push_back({free_particle_model(cfg.mass), {0.0}, {2.0}});
  }
  if (all || cfg.mechanics_model == "harmonic") {
    runs.push_back({harmonic_oscillator_model(cfg.mass, 1.0), {1.0}, {0.0}});
  }
  if (all || cfg.mechanics_model == "relativistic") {
    runs.push_back(
        {relativistic_particle_model(cfg.mass, cfg.c), {0.0}, {0.6 * cfg.c}});
  }

  manifest.series_columns = {"model", "constraint_max", "factorization_max",
                             "pt_drift_max"};
  double constraint_all = 0.0;
  for (size_t m = 0; m < runs.size(); ++m) {
    const ModelRun& r = runs[m];
    const Trajectory traj =
        integrate_physical(r.model, r.q0, r.v0, 0.0, horizon, cfg.dt);
    double constraint_max = 0.0;
    double pt_drift = 0.0;
    const double p_t0 = traj.samples.front().p_t;
    for (const PhaseState& s : traj.samples) {
      constraint_max =
          std::max(constraint_max, std::abs(ri_constraint(r.model, s)));
      pt_drift = std::max(pt_drift, std::abs(s.p_t - p_t0));
    }

    SplitMix64 rng(cfg.seed + 1000 * m);
    double factorization_max = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const double bound = std::isfinite(r.model.velocity_bound)
                               ? 0.9 * r.model.velocity_bound
                               : 4.0;
      const double tdot = rng.uniform(0.2, 3.0);
      const double qdot = rng.uniform(-bound, bound) * tdot;
      const double q = rng.uniform(-2.0, 2.0);
      const auto result =
          canonical_hamiltonian_ri(r.model, {q}, {qdot}, 0.0, tdot);
      factorization_max =
          std::max(factorization_max, result.factorization_residual);
    }

    manifest.metrics["constraint_max_" + r.model.label] = constraint_max;
    manifest.metrics["factorization_max_" + r.model.label] = factorization_max;
    manifest.metrics["pt_drift_max_" + r.model.label] = pt_drift;
    manifest.series.push_back({static_cast<double>(m), constraint_max,
                               factorization_max, pt_drift});
    constraint_all = std::max(constraint_all, constraint_max);
  }
  manifest.metrics["constraint_max"] = constraint_all;

  // Mass shell across random subluminal velocities.
  {
    const PhysicalConstants pc = build_constants(cfg);
    SplitMix64 rng(cfg.seed + 7777);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const double v = rng.uniform(-0.99, 0.99) * pc.c;
      const RelativisticMomenta m = relativistic_momenta({v}, pc);
      const double shell =
          -pc.c * std::sqrt(pc.mass * pc.mass * pc.c * pc.c + m.p[0] * m.p[0]);
      worst = std::max(worst, std::abs(m.p_t - shell) / std::abs(shell));
    }
    manifest.metrics["mass_shell_max"] = worst;
  }

  // Canonical brackets on the extended phase space.
  {
    const PhaseState state{{0.4}, {(-0.8)}, 0.7, -1.3, 0.0};
    const PhaseFunction x = [](const PhaseState& s) { return s.q[0]; };
    const PhaseFunction p = [](const PhaseState& s) { return s.p[0]; };
    const PhaseFunction t = [](const PhaseState& s) { return s.t; };
    const PhaseFunction pt = [](const PhaseState& s) { return s.p_t; };
    manifest.metrics["bracket_xp_error"] =
        std::abs(poisson_bracket(x, p, state) - 1.0);
    manifest.metrics["bracket_tpt_error"] =
        std::abs(poisson_bracket(t, pt, state) - 1.0);
    double cross = std::abs(poisson_bracket(x, pt, state));
    cross = std::max(cross, std::abs(poisson_bracket(t, p, state)));
    cross = std::max(cross, std::abs(poisson_bracket(x, t, state)));
    cross = std::max(cross, std::abs(poisson_bracket(p, pt, state)));
    manifest.metrics["bracket_cross_max"] = cross;
  }
}

void run_gauge_invariance(const ExperimentConfig& cfg, RunManifest& manifest,
                          const fs::path&) {
  const double horizon = cfg.dt * static_cast<double>(cfg.steps);
  if (!(horizon > 0.1)) {
    throw ConfigError("time.steps: gauge study needs a horizon above 0.1");
  }
  const double reach = horizon * 0.98;

  const GaugeFunction cubic{[](double tau) { return tau * tau * tau; },
                            [](double tau) { return 3.0 * tau * tau; }, 0.1,
                            std::cbrt(reach), "tau^3"};
  const GaugeFunction softexp{[](double tau) { return std::expm1(tau); },
                              [](double tau) { return std::exp(tau); }, 0.1,
                              std::log1p(reach), "exp(tau)-1"};

  // Harmonic motion: two gauges must reconstruct the same x(t).
  const LagrangianModel harmonic = harmonic_oscillator_model(cfg.mass, 1.0);
  const Trajectory base =
      integrate_physical(harmonic, {1.0}, {0.0}, 0.0, horizon, cfg.dt);
  const PhysicalPath path_a = reconstruct_physical(lift_to_ri(base, cubic));
  const PhysicalPath path_b = reconstruct_physical(lift_to_ri(base, softexp));
  const double lo = std::max(path_a.t_min(), path_b.t_min());
  const double hi = std::min(path_a.t_max(), path_b.t_max());

  manifest.series_columns = {"t", "x_cubic", "x_exp", "difference"};
  double disagreement = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double t = lo + (hi - lo) * i / 200.0;
    const double xa = path_a(t)[0];
    const double xb = path_b(t)[0];
    disagreement = std::max(disagreement, std::abs(xa - xb));
    manifest.series.push_back({t, xa, xb, std::abs(xa - xb)});
  }
  manifest.metrics["gauge_disagreement_max"] = disagreement;

  // Free particle: the reconstruction is the straight line v t + x0.
  const LagrangianModel free_model = free_particle_model(cfg.mass);
  const Trajectory free_base =
      integrate_physical(free_model, {0.0}, {1.0}, 0.0, horizon, cfg.dt);
  const PhysicalPath free_path =
      reconstruct_physical(lift_to_ri(free_base, cubic));
  double linear_error = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double t =
        free_path.t_min() + (free_path.t_max() - free_path.t_min()) * i / 200.0;
    linear_error = std::max(linear_error, std::abs(free_path(t)[0] - t));
  }
  manifest.metrics["free_linear_error"] = linear_error;
}

void run_uncertainty(const ExperimentConfig& cfg, RunManifest& manifest,
                     const fs::path&) {
  const GridSpec grid = build_grid(cfg);
  const PhysicalConstants pc = build_constants(cfg);
  const ComplexField psi = build_initial_psi(cfg, grid);

  const UncertaintyResult u = uncertainty_product(psi, pc);
  manifest.metrics["dx"] = u.dx;
  manifest.metrics["dp"] = u.dp;
  manifest.metrics["product"] = u.dx * u.dp;
  manifest.metrics["bound"] = u.bound;
  manifest.metrics["saturation_rel_error"] = u.dx * u.dp / u.bound - 1.0;

  // Randomized localized suite.
  SplitMix64 rng(cfg.seed);
  manifest.series_columns = {"state", "dx", "dp", "ratio"};
  double min_ratio = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 20; ++i) {
    const double sigma = rng.uniform(grid.length / 40.0, grid.length / 24.0);
    const double center =
        grid.length / 2.0 +
        rng.uniform(-grid.length / 16.0, grid.length / 16.0);
    const double k0 = rng.uniform(-3.0, 3.0);
    const double beta = rng.uniform(-1.0, 1.0) / (sigma * sigma);
    const ComplexField state = gaussian_packet(grid, center, sigma, k0, beta);
    const UncertaintyResult ur = uncertainty_product(state, pc);
    const double ratio = ur.dx * ur.dp / ur.bound;
    min_ratio = std::min(min_ratio, ratio);
    manifest.series.push_back(
        {static_cast<double>(i), ur.dx, ur.dp, ratio});
  }
  manifest.metrics["min_ratio"] = min_ratio;
}

}  // namespace

RunManifest run(const ExperimentConfig& cfg) {
  RunManifest manifest;
  manifest.config = cfg;

  const fs::path outdir(cfg.output_directory);
  std::error_code ec;
  fs::create_directories(outdir, ec);
  if (ec) {
    throw ConfigError("output.directory: cannot create '" +
                      cfg.output_directory + "': " + ec.message());
  }
  {
    const fs::path probe = outdir / ".write_probe";
    std::ofstream test(probe);
    if (!test) {
      throw ConfigError("output.directory: '" + cfg.output_directory +
                        "' is not writable");
    }
    test.close();
    fs::remove(probe, ec);
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    switch (cfg.scenario) {
      case Scenario::EvolveNonrel:
        run_evolve_schrodinger_like(cfg, manifest, outdir, false);
        break;
      case Scenario::EvolveSqrt:
        run_evolve_schrodinger_like(cfg, manifest, outdir, true);
        break;
      case Scenario::EvolveKg:
        run_evolve_kg(cfg, manifest, outdir);
        break;
      case Scenario::KgEquivalence:
        run_kg_equivalence(cfg, manifest, outdir);
        break;
      case Scenario::NonrelLimitScan:
        run_nonrel_limit_scan(cfg, manifest, outdir);
        break;
      case Scenario::RiConstraint:
        run_ri_constraint(cfg, manifest, outdir);
        break;
      case Scenario::GaugeInvariance:
        run_gauge_invariance(cfg, manifest, outdir);
        break;
      case Scenario::Uncertainty:
        run_uncertainty(cfg, manifest, outdir);
        break;
    }
    manifest.ok = true;
    for (const auto& [name, value] : manifest.metrics) {
      if (!std::isfinite(value)) {
        throw ScenarioError("metric '" + name + "' is not finite");
      }
    }
  } catch (const std::exception& e) {
    manifest.ok = false;
    manifest.error = e.what();
    manifest.metrics.clear();
    manifest.series.clear();
  }
  const auto end = std::chrono::steady_clock::now();
  manifest.duration_seconds =
      std::chrono::duration<double>(end - start).count();

  write_manifest(manifest, cfg.output_directory);
  return manifest;
}

}  // namespace reparamqm::cli
