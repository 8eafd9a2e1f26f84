#pragma once

#include <optional>
#include <vector>

#include "reparamqm/field.hpp"

namespace reparamqm {

struct SchrodingerState {
  ComplexField psi;
  double time = 0.0;
};

/// Real Klein-Gordon pair (phi, dphi/dt) at a time stamp. Both fields must
/// share one grid.
struct KleinGordonState {
  RealField phi;
  RealField phi_dot;
  double time = 0.0;

  KleinGordonState(RealField phi_, RealField phi_dot_, double time_);
};

struct EvolutionParams {
  double dt;
  long steps;
  PhysicalConstants constants;
  std::optional<RealField> potential;  // absent => V = 0 (time-independent V only)

  EvolutionParams(double dt_, long steps_, PhysicalConstants constants_,
                  std::optional<RealField> potential_ = std::nullopt);
};

/// Dispersion shared by the square-root and Klein-Gordon propagators:
/// omega(k) = c * sqrt(mu^2 + k^2).
double mode_frequency(double k, double mu, double c);
double mode_frequency(double k, const PhysicalConstants& constants);

/// Nonrelativistic propagator i hbar dpsi/dt = (-hbar^2/2m Lap + V) psi.
/// Second-order Strang splitting (half potential phase, full kinetic spectral
/// step, half potential phase); spectrally exact for any dt when V = 0.
SchrodingerState evolve_schrodinger(const SchrodingerState& state,
                                    const EvolutionParams& params);

/// Free square-root relativistic propagator: one exact spectral map
/// psi_k -> exp(-i omega_k * steps * dt) psi_k. Rejects configurations with a
/// potential.
SchrodingerState evolve_sqrt_schrodinger(const SchrodingerState& state,
                                         const EvolutionParams& params);

/// Exact per-mode rotation of the real Klein-Gordon pair by steps*dt.
KleinGordonState evolve_klein_gordon(const KleinGordonState& state,
                                     const EvolutionParams& params);

/// sum dx [ (phi_dot/c)^2 + (sqrt(mu^2 - Lap) phi)^2 ], conserved along
/// evolve_klein_gordon.
double kg_energy(const KleinGordonState& state,
                 const PhysicalConstants& constants);

/// Removes the rest-mass phase: chi = exp(+i m c^2 t / hbar) * psi.
ComplexField nonrel_reduce(const SchrodingerState& state,
                           const PhysicalConstants& constants);

/// Hermitian-generator diagnostic: max over interior snapshots of
/// |Im <psi, i hbar dpsi/dt>| / <psi, psi>, with dpsi/dt estimated by central
/// differences. Requires >= 3 snapshots with uniform time spacing.
double pt_reality_residual(const std::vector<SchrodingerState>& snapshots,
                           const PhysicalConstants& constants);

}  // namespace reparamqm
