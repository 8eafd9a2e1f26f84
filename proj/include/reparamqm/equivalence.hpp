#pragma once

#include "reparamqm/evolution.hpp"
#include "reparamqm/field.hpp"

namespace reparamqm {

/// Measured residuals of the four equivalence claims between the real
/// Klein-Gordon field and the complex wave function.
struct EquivalenceReport {
  // Direction A: sup over modes of |i d(psi_hat)/(c dt) - rho psi_hat| /
  // max(1, rho), rho = sqrt(mu^2 + k^2).
  double schrodinger_residual = 0.0;
  double kg_residual = 0.0;         // direction B vs direct KG evolution
  double roundtrip_residual = 0.0;  // psi -> phi -> psi, relative L2
  double density_residual = 0.0;    // |psi|^2 vs KG energy density, sup norm
};

/// Direction A: psi = -sqrt(mu^2 - Lap) phi - i phi_dot / c.
ComplexField psi_from_phi(const KleinGordonState& state,
                          const PhysicalConstants& constants);

/// Integration profile with spectral coefficients
/// k_hat(p) = -psi1_hat(p) / sqrt(mu^2 + p^2); solves
/// sqrt(mu^2 - Lap) k(x) = -psi1(x). The mu = 0 overload rejects inputs whose
/// zero mode is occupied (the division is singular there).
RealField k_profile(const RealField& psi1_at_0, double mu);
RealField k_profile(const RealField& psi1_at_0,
                    const PhysicalConstants& constants);

/// Direction B: from a free square-root-equation initial datum psi0, build
/// the Klein-Gordon pair at time t,
///   phi(t)     = k(x) - c * Integral_0^t Im psi(tau, x) dtau,
///   phi_dot(t) = -c * Im psi(t, x),
/// with the time integral evaluated per mode in closed form.
KleinGordonState phi_from_psi(const ComplexField& psi0, double t,
                              const PhysicalConstants& constants);

/// Pointwise (phi_dot/c)^2 + (sqrt(mu^2 - Lap) phi)^2; identical arithmetic
/// to |psi_from_phi|^2.
RealField density_from_phi(const KleinGordonState& state,
                           const PhysicalConstants& constants);

/// Runs the four equivalence checks at time T (must be an integer multiple of
/// params.dt): (i) KG-evolve then map A and measure the square-root-equation
/// residual spectrally, (ii) map A at t=0, reconstruct via map B at T and
/// compare against the direct KG evolution, (iii) round-trip psi -> phi ->
/// psi against the direct square-root evolution, (iv) density identity.
EquivalenceReport verify_equivalence(const KleinGordonState& phi0, double T,
                                     const EvolutionParams& params);

}  // namespace reparamqm
