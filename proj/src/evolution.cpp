#include "reparamqm/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "reparamqm/spectral.hpp"

namespace reparamqm {

KleinGordonState::KleinGordonState(RealField phi_, RealField phi_dot_,
                                   double time_)
    : phi(std::move(phi_)), phi_dot(std::move(phi_dot_)), time(time_) {
  require_same_grid(phi.grid, phi_dot.grid, "KleinGordonState");
}

EvolutionParams::EvolutionParams(double dt_, long steps_,
                                 PhysicalConstants constants_,
                                 std::optional<RealField> potential_)
    : dt(dt_), steps(steps_), constants(constants_),
      potential(std::move(potential_)) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("EvolutionParams: dt must be positive");
  }
  if (steps < 0) {
    throw std::invalid_argument("EvolutionParams: steps must be >= 0");
  }
}

double mode_frequency(double k, double mu, double c) {
  return c * std::hypot(mu, k);
}

double mode_frequency(double k, const PhysicalConstants& constants) {
  return mode_frequency(k, constants.mu, constants.c);
}

SchrodingerState evolve_schrodinger(const SchrodingerState& state,
                                    const EvolutionParams& params) {
  if (params.potential.has_value()) {
    require_same_grid(state.psi.grid, params.potential->grid,
                      "evolve_schrodinger");
  }
  if (params.steps == 0) return state;
  const PhysicalConstants& pc = params.constants;
  const std::vector<double> k = wavenumbers(state.psi.grid);
  const size_t n = state.psi.values.size();

  if (!params.potential.has_value()) {
    // Kinetic-only evolution is diagonal in k, so the whole interval is one
    // exact spectral map.
    const double delta = params.dt * static_cast<double>(params.steps);
    ComplexField coeffs = forward_transform(state.psi);
    for (size_t j = 0; j < n; ++j) {
      const double phase = pc.hbar * k[j] * k[j] * delta / (2.0 * pc.mass);
      coeffs.values[j] *= std::polar(1.0, -phase);
    }
    return {inverse_transform(coeffs), state.time + delta};
  }

  const RealField& v = *params.potential;
  std::vector<Complex> half_kick(n);
  for (size_t j = 0; j < n; ++j) {
    half_kick[j] = std::polar(1.0, -v.values[j] * params.dt / (2.0 * pc.hbar));
  }
  std::vector<Complex> kinetic(n);
  for (size_t j = 0; j < n; ++j) {
    kinetic[j] = std::polar(1.0, -pc.hbar * k[j] * k[j] * params.dt /
                                     (2.0 * pc.mass));
  }

  ComplexField psi = state.psi;
  for (long step = 0; step < params.steps; ++step) {
    for (size_t j = 0; j < n; ++j) psi.values[j] *= half_kick[j];
    ComplexField coeffs = forward_transform(psi);
    for (size_t j = 0; j < n; ++j) coeffs.values[j] *= kinetic[j];
    psi = inverse_transform(coeffs);
    for (size_t j = 0; j < n; ++j) psi.values[j] *= half_kick[j];
  }
  return {std::move(psi), state.time + params.dt * static_cast<double>(params.steps)};
}

SchrodingerState evolve_sqrt_schrodinger(const SchrodingerState& state,
                                         const EvolutionParams& params) {
  if (params.potential.has_value()) {
    throw std::invalid_argument(
        "evolve_sqrt_schrodinger: potentials are not supported (free theory "
        "only)");
  }
  if (params.steps == 0) return state;
  const double delta = params.dt * static_cast<double>(params.steps);
  const std::vector<double> k = wavenumbers(state.psi.grid);
  ComplexField coeffs = forward_transform(state.psi);
  for (size_t j = 0; j < coeffs.values.size(); ++j) {
    const double omega = mode_frequency(k[j], params.constants);
    coeffs.values[j] *= std::polar(1.0, -omega * delta);
  }
  return {inverse_transform(coeffs), state.time + delta};
}

KleinGordonState evolve_klein_gordon(const KleinGordonState& state,
                                     const EvolutionParams& params) {
  if (params.steps == 0) return state;
  const double delta = params.dt * static_cast<double>(params.steps);
  const GridSpec& grid = state.phi.grid;
  const std::vector<double> k = wavenumbers(grid);

  std::vector<Complex> phi_lift(state.phi.values.begin(),
                                state.phi.values.end());
  std::vector<Complex> dot_lift(state.phi_dot.values.begin(),
                                state.phi_dot.values.end());
  ComplexField phi_hat = forward_transform(ComplexField(grid, std::move(phi_lift)));
  ComplexField dot_hat = forward_transform(ComplexField(grid, std::move(dot_lift)));

  for (size_t j = 0; j < phi_hat.values.size(); ++j) {
    const double omega = mode_frequency(k[j], params.constants);
    const Complex p = phi_hat.values[j];
    const Complex d = dot_hat.values[j];
    if (omega == 0.0) {
      // Massless zero mode: free drift, the omega -> 0 limit of the rotation.
      phi_hat.values[j] = p + d * delta;
      dot_hat.values[j] = d;
    } else {
      const double cw = std::cos(omega * delta);
      const double sw = std::sin(omega * delta);
      phi_hat.values[j] = p * cw + d * (sw / omega);
      dot_hat.values[j] = -p * (omega * sw) + d * cw;
    }
  }

  ComplexField phi_new = inverse_transform(phi_hat);
  ComplexField dot_new = inverse_transform(dot_hat);

  double scale = 1.0;
  for (const auto& v : phi_new.values) scale = std::max(scale, std::abs(v));
  for (const auto& v : dot_new.values) scale = std::max(scale, std::abs(v));
  std::vector<double> phi_vals(phi_new.values.size());
  std::vector<double> dot_vals(dot_new.values.size());
  for (size_t j = 0; j < phi_new.values.size(); ++j) {
    if (std::abs(phi_new.values[j].imag()) > 1e-12 * scale ||
        std::abs(dot_new.values[j].imag()) > 1e-12 * scale) {
      throw std::runtime_error(
          "evolve_klein_gordon: imaginary residue exceeds 1e-12; input was "
          "not a real pair");
    }
    phi_vals[j] = phi_new.values[j].real();
    dot_vals[j] = dot_new.values[j].real();
  }
  return KleinGordonState(RealField(grid, std::move(phi_vals)),
                          RealField(grid, std::move(dot_vals)),
                          state.time + delta);
}

double kg_energy(const KleinGordonState& state,
                 const PhysicalConstants& constants) {
  const RealField stretched =
      apply_multiplier(state.phi, sqrt_kg_multiplier(constants));
  double acc = 0.0;
  for (size_t j = 0; j < stretched.values.size(); ++j) {
    const double a = state.phi_dot.values[j] / constants.c;
    const double b = stretched.values[j];
    acc += a * a + b * b;
  }
  return acc * state.phi.grid.spacing;
}

ComplexField nonrel_reduce(const SchrodingerState& state,
                           const PhysicalConstants& constants) {
  const double phase =
      constants.mass * constants.c * constants.c * state.time / constants.hbar;
  const Complex rot = std::polar(1.0, phase);
  ComplexField chi = state.psi;
  for (auto& v : chi.values) v *= rot;
  return chi;
}

double pt_reality_residual(const std::vector<SchrodingerState>& snapshots,
                           const PhysicalConstants& constants) {
  if (snapshots.size() < 3) {
    throw std::invalid_argument(
        "pt_reality_residual: need at least 3 snapshots");
  }
  const double dt = snapshots[1].time - snapshots[0].time;
  if (!(dt > 0.0)) {
    throw std::invalid_argument(
        "pt_reality_residual: snapshot times must increase");
  }
  for (size_t i = 1; i < snapshots.size(); ++i) {
    require_same_grid(snapshots[0].psi.grid, snapshots[i].psi.grid,
                      "pt_reality_residual");
    const double step = snapshots[i].time - snapshots[i - 1].time;
    if (std::abs(step - dt) > 1e-9 * (1.0 + std::abs(dt))) {
      throw std::invalid_argument(
          "pt_reality_residual: snapshots must be equally spaced in time");
    }
  }

  double worst = 0.0;
  for (size_t i = 1; i + 1 < snapshots.size(); ++i) {
    const ComplexField& psi = snapshots[i].psi;
    ComplexField dpsi = ComplexField::zero(psi.grid);
    for (size_t j = 0; j < dpsi.values.size(); ++j) {
      dpsi.values[j] = (snapshots[i + 1].psi.values[j] -
                        snapshots[i - 1].psi.values[j]) /
                       (2.0 * dt);
    }
    const Complex generator_expectation =
        inner_product(psi, dpsi) * Complex(0.0, constants.hbar);
    const double norm_sq = inner_product(psi, psi).real();
    if (norm_sq == 0.0) continue;
    worst = std::max(worst, std::abs(generator_expectation.imag()) / norm_sq);
  }
  return worst;
}

}  // namespace reparamqm
