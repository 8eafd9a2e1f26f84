#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "reparamqm/field.hpp"
#include "reparamqm/interpolation.hpp"

namespace reparamqm {

using Coordinates = std::vector<double>;

/// User-supplied Lagrangian L(q, v, t) with optional analytic momenta. When
/// `momenta` is empty the conjugate momenta come from fourth-order central
/// differences, which requires the velocity Hessian of L to be invertible at
/// the evaluation points. `velocity_bound`, when finite, is the open radius
/// |v| < bound of the velocity domain (c for the relativistic particle);
/// Newton iterates are damped to stay inside it.
struct LagrangianModel {
  int dim = 1;
  std::function<double(const Coordinates& q, const Coordinates& v, double t)>
      lagrangian;
  std::function<Coordinates(const Coordinates& q, const Coordinates& v,
                            double t)>
      momenta;  // optional
  std::string label;
  double velocity_bound = std::numeric_limits<double>::infinity();
};

/// Extended phase-space point (q, p, t, p_t) tagged with the evolution
/// parameter tau.
struct PhaseState {
  Coordinates q;
  Coordinates p;
  double t = 0.0;
  double p_t = 0.0;
  double tau = 0.0;
};

/// Monotone map t = g(tau) with strictly positive derivative on
/// [tau_min, tau_max].
struct GaugeFunction {
  std::function<double(double)> g;
  std::function<double(double)> g_dot;
  double tau_min = 0.0;
  double tau_max = 1.0;
  std::string label;
};

struct TrajectoryMeta {
  std::string model;
  double step = 0.0;
  std::string gauge;
};

struct Trajectory {
  std::vector<PhaseState> samples;
  TrajectoryMeta meta;
};

/// p_A = dL/dv^A (analytic evaluator when supplied, else fourth-order central
/// differences with relative step 1e-5).
Coordinates legendre_momenta(const LagrangianModel& model, const Coordinates& q,
                             const Coordinates& v, double t);

/// Solves legendre_momenta(model, q, v, t) = p for v by damped Newton
/// iteration (tolerance 1e-12, max 50 iterations; accepts |residual| < 1e-10).
Coordinates invert_velocities(const LagrangianModel& model,
                              const Coordinates& q, const Coordinates& p,
                              double t);

/// H(q, p, t) = p . v(q, p, t) - L(q, v(q, p, t), t).
double physical_hamiltonian(const LagrangianModel& model, const Coordinates& q,
                            const Coordinates& p, double t);

/// The constraint value H~ = p_t + H(q, p, t); vanishes on solutions.
double ri_constraint(const LagrangianModel& model, const PhaseState& state);

struct CanonicalHamiltonianResult {
  double value;                  // p . qdot + p_t * tdot - L~
  double factorization_residual; // |value - tdot * (p_t + H)|
};

/// Canonical Hamiltonian of the reparametrization-invariant action evaluated
/// at generalized velocities (qdot, tdot), together with the residual of the
/// proportionality identity value = tdot * (p_t + H). Requires tdot > 0.
CanonicalHamiltonianResult canonical_hamiltonian_ri(const LagrangianModel& model,
                                                    const Coordinates& q,
                                                    const Coordinates& qdot,
                                                    double t, double tdot);

/// Runge-Kutta-4 integration of Hamilton's equations in physical time, with
/// Hamiltonian derivatives by fourth-order central differences (relative step
/// 1e-6). Each sample carries p_t = -H(q, p, t) and tau = t (identity gauge).
Trajectory integrate_physical(const LagrangianModel& model,
                              const Coordinates& q0, const Coordinates& v0,
                              double t0, double t1, double dt);

/// Resamples a physical-time trajectory at t = g(tau) on a uniform tau grid
/// (shape-preserving cubic interpolation). `count` = 0 keeps the input sample
/// count. The gauge image must stay inside the trajectory's time range and
/// g_dot must be positive at every node.
Trajectory lift_to_ri(const Trajectory& traj, const GaugeFunction& gauge,
                      size_t count = 0);

/// The physical content q(t) of a (possibly lifted) trajectory: tau is
/// eliminated by interpolating q against t.
class PhysicalPath {
 public:
  explicit PhysicalPath(const Trajectory& traj);

  Coordinates operator()(double t) const;
  double t_min() const;
  double t_max() const;

 private:
  std::vector<CubicInterpolant> component_;
};

PhysicalPath reconstruct_physical(const Trajectory& traj);

using PhaseFunction = std::function<double(const PhaseState&)>;

/// {f, g} = sum_A (df/dq^A dg/dp_A - df/dp_A dg/dq^A) + df/dt dg/dp_t
///          - df/dp_t dg/dt, with fourth-order central differences
/// (relative step 1e-6).
double poisson_bracket(const PhaseFunction& f, const PhaseFunction& g,
                       const PhaseState& state);

struct RelativisticMomenta {
  Coordinates p;
  double p_t;
};

/// Canonical momenta of the free relativistic particle in the physical-time
/// gauge: p = m v / sqrt(1 - v^2/c^2), p_t = -m c^3 / sqrt(c^2 - v^2). The
/// result is checked against the mass shell p_t = -c sqrt(m^2 c^2 + p^2) to
/// 1e-12 before returning. Rejects |v| >= c.
RelativisticMomenta relativistic_momenta(const Coordinates& v,
                                         const PhysicalConstants& constants);

/// Ready-made models for the verification suites.
LagrangianModel free_particle_model(double mass);
LagrangianModel harmonic_oscillator_model(double mass, double stiffness);
LagrangianModel relativistic_particle_model(double mass, double c);

}  // namespace reparamqm
