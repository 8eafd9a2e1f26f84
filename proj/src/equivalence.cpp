#include "reparamqm/equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "reparamqm/spectral.hpp"

namespace reparamqm {

namespace {

ComplexField lift(const RealField& f) {
  return ComplexField(f.grid,
                      std::vector<Complex>(f.values.begin(), f.values.end()));
}

RealField real_part(const ComplexField& f) {
  std::vector<double> values(f.values.size());
  for (size_t j = 0; j < f.values.size(); ++j) values[j] = f.values[j].real();
  return RealField(f.grid, std::move(values));
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

}  // namespace

ComplexField psi_from_phi(const KleinGordonState& state,
                          const PhysicalConstants& constants) {
  const RealField stretched =
      apply_multiplier(state.phi, sqrt_kg_multiplier(constants));
  std::vector<Complex> values(stretched.values.size());
  for (size_t j = 0; j < values.size(); ++j) {
    values[j] = Complex(-stretched.values[j],
                        -state.phi_dot.values[j] / constants.c);
  }
  return ComplexField(state.phi.grid, std::move(values));
}

RealField k_profile(const RealField& psi1_at_0, double mu) {
  if (!(mu >= 0.0)) {
    throw std::invalid_argument("k_profile: mu must be >= 0");
  }
  if (mu == 0.0) {
    const ComplexField coeffs = forward_transform(lift(psi1_at_0));
    double scale = 1.0;
    for (const auto& v : coeffs.values) scale = std::max(scale, std::abs(v));
    if (std::abs(coeffs.values[0]) > 1e-12 * scale) {
      throw std::invalid_argument(
          "k_profile: massless case with occupied zero mode j=0; the spectral "
          "division by sqrt(mu^2 + k^2) is singular there");
    }
  }
  const SpectralMultiplier inverse_stretch{
      [mu](double k) {
        const double denom = std::hypot(mu, k);
        if (denom == 0.0) return Complex(0.0, 0.0);  // unoccupied by the guard
        return Complex(-1.0 / denom, 0.0);
      },
      "-1/sqrt(mu^2+k^2)"};
  return apply_multiplier(psi1_at_0, inverse_stretch);
}

RealField k_profile(const RealField& psi1_at_0,
                    const PhysicalConstants& constants) {
  return k_profile(psi1_at_0, constants.mu);
}

KleinGordonState phi_from_psi(const ComplexField& psi0, double t,
                              const PhysicalConstants& constants) {
  const GridSpec& grid = psi0.grid;
  const std::vector<double> k = wavenumbers(grid);

  const RealField profile = k_profile(real_part(psi0), constants);

  // Closed-form per-mode evolution psi_hat(tau) = exp(-i omega tau) psi_hat(0)
  // and its antiderivative Integral_0^t exp(-i omega tau) dtau.
  ComplexField coeffs = forward_transform(psi0);
  ComplexField integral_coeffs = ComplexField::zero(grid);
  ComplexField evolved_coeffs = ComplexField::zero(grid);
  for (size_t j = 0; j < coeffs.values.size(); ++j) {
    const double omega = mode_frequency(k[j], constants);
    const Complex rot = std::polar(1.0, -omega * t);
    evolved_coeffs.values[j] = coeffs.values[j] * rot;
    if (omega == 0.0) {
      integral_coeffs.values[j] = coeffs.values[j] * t;
    } else {
      integral_coeffs.values[j] =
          coeffs.values[j] * (Complex(1.0, 0.0) - rot) / Complex(0.0, omega);
    }
  }
  const ComplexField integral = inverse_transform(integral_coeffs);
  const ComplexField evolved = inverse_transform(evolved_coeffs);

  std::vector<double> phi(profile.values.size());
  std::vector<double> phi_dot(profile.values.size());
  for (size_t j = 0; j < phi.size(); ++j) {
    phi[j] = profile.values[j] - constants.c * integral.values[j].imag();
    phi_dot[j] = -constants.c * evolved.values[j].imag();
  }
  return KleinGordonState(RealField(grid, std::move(phi)),
                          RealField(grid, std::move(phi_dot)), t);
}

RealField density_from_phi(const KleinGordonState& state,
                           const PhysicalConstants& constants) {
  const RealField stretched =
      apply_multiplier(state.phi, sqrt_kg_multiplier(constants));
  std::vector<double> values(stretched.values.size());
  for (size_t j = 0; j < values.size(); ++j) {
    const double a = state.phi_dot.values[j] / constants.c;
    const double b = stretched.values[j];
    values[j] = a * a + b * b;
  }
  return RealField(state.phi.grid, std::move(values));
}

EquivalenceReport verify_equivalence(const KleinGordonState& phi0, double T,
                                     const EvolutionParams& params) {
  const PhysicalConstants& pc = params.constants;
  const GridSpec& grid = phi0.phi.grid;
  const double ratio = T / params.dt;
  const long steps = std::lround(ratio);
  if (std::abs(ratio - static_cast<double>(steps)) > 1e-9 * (1.0 + ratio)) {
    throw std::invalid_argument(
        "verify_equivalence: T must be an integer multiple of params.dt");
  }
  const EvolutionParams leg(params.dt, steps, pc);

  EquivalenceReport report;
  const std::vector<double> k = wavenumbers(grid);

  // (i) Direction A: evolve the KG pair, map to psi, and measure the
  // square-root-equation residual per mode with the time derivative taken
  // from the KG equation of motion.
  const KleinGordonState phi_T =
      steps == 0 ? phi0 : evolve_klein_gordon(phi0, leg);
  const ComplexField psi_T = psi_from_phi(phi_T, pc);
  {
    const ComplexField phi_hat = forward_transform(lift(phi_T.phi));
    const ComplexField dot_hat = forward_transform(lift(phi_T.phi_dot));
    const ComplexField psi_hat = forward_transform(psi_T);
    double worst = 0.0;
    for (size_t j = 0; j < psi_hat.values.size(); ++j) {
      const double rho = std::hypot(pc.mu, k[j]);
      // d(psi)/dt = -rho * phi_dot + i c rho^2 * phi per mode.
      const Complex dpsi_dt =
          -rho * dot_hat.values[j] +
          Complex(0.0, pc.c * rho * rho) * phi_hat.values[j];
      const Complex residual =
          Complex(0.0, 1.0 / pc.c) * dpsi_dt - rho * psi_hat.values[j];
      // Scaled by the symbol magnitude so empty high-k modes do not turn
      // round-off into a k^2-amplified floor.
      worst = std::max(worst, std::abs(residual) / std::max(1.0, rho));
    }
    report.schrodinger_residual = worst;
  }

  // (ii) Direction B: map at t=0, reconstruct at T, compare with the direct
  // KG evolution.
  const ComplexField psi_0 = psi_from_phi(phi0, pc);
  const KleinGordonState recon = phi_from_psi(psi_0, T, pc);
  report.kg_residual =
      std::max(max_abs_diff(recon.phi.values, phi_T.phi.values),
               max_abs_diff(recon.phi_dot.values, phi_T.phi_dot.values) / pc.c);

  // (iii) Round trip psi -> phi -> psi against the direct square-root
  // evolution.
  {
    const SchrodingerState direct =
        steps == 0 ? SchrodingerState{psi_0, 0.0}
                   : evolve_sqrt_schrodinger({psi_0, 0.0}, leg);
    const ComplexField roundtrip = psi_from_phi(recon, pc);
    ComplexField diff = ComplexField::zero(grid);
    for (size_t j = 0; j < diff.values.size(); ++j) {
      diff.values[j] = roundtrip.values[j] - direct.psi.values[j];
    }
    const double reference = norm(direct.psi);
    report.roundtrip_residual =
        reference > 0.0 ? norm(diff) / reference : norm(diff);
  }

  // (iv) Density identity at T.
  {
    const RealField density = density_from_phi(phi_T, pc);
    double worst = 0.0;
    for (size_t j = 0; j < density.values.size(); ++j) {
      worst = std::max(worst, std::abs(std::norm(psi_T.values[j]) -
                                       density.values[j]));
    }
    report.density_residual = worst;
  }

  return report;
}

}  // namespace reparamqm
