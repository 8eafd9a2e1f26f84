#include "reparamqm/mechanics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace reparamqm {

namespace {

// Power-of-two finite-difference step near rel*(1+|x|); keeps x +/- h exact.
double fd_step(double x, double rel) {
  return std::exp2(std::round(std::log2(rel * (1.0 + std::abs(x)))));
}

constexpr double kLegendreStep = 1e-5;
constexpr double kHamiltonStep = 1e-6;

double central4(const std::function<double(double)>& f, double x, double h) {
  const double fm2 = f(x - 2.0 * h);
  const double fm1 = f(x - h);
  const double fp1 = f(x + h);
  const double fp2 = f(x + 2.0 * h);
  if (!std::isfinite(fm2) || !std::isfinite(fm1) || !std::isfinite(fp1) ||
      !std::isfinite(fp2)) {
    throw std::domain_error(
        "finite-difference stencil hit a non-finite function value");
  }
  return (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h);
}

// Gaussian elimination with partial pivoting; a is dim x dim row-major.
Coordinates solve_linear(std::vector<double> a, Coordinates b) {
  const size_t n = b.size();
  for (size_t col = 0; col < n; ++col) {
    size_t pivot = col;
    for (size_t row = col + 1; row < n; ++row) {
      if (std::abs(a[row * n + col]) > std::abs(a[pivot * n + col])) {
        pivot = row;
      }
    }
    if (std::abs(a[pivot * n + col]) < 1e-300) {
      throw std::runtime_error(
          "singular velocity Hessian: the Lagrangian is not regular here");
    }
    if (pivot != col) {
      for (size_t j = 0; j < n; ++j) std::swap(a[col * n + j], a[pivot * n + j]);
      std::swap(b[col], b[pivot]);
    }
    for (size_t row = col + 1; row < n; ++row) {
      const double factor = a[row * n + col] / a[col * n + col];
      for (size_t j = col; j < n; ++j) a[row * n + j] -= factor * a[col * n + j];
      b[row] -= factor * b[col];
    }
  }
  Coordinates x(n);
  for (size_t row = n; row-- > 0;) {
    double acc = b[row];
    for (size_t j = row + 1; j < n; ++j) acc -= a[row * n + j] * x[j];
    x[row] = acc / a[row * n + row];
  }
  return x;
}

// d(momenta)/dv as a dim x dim matrix, by fourth-order differences.
std::vector<double> velocity_hessian(const LagrangianModel& model,
                                     const Coordinates& q, const Coordinates& v,
                                     double t) {
  const size_t dim = static_cast<size_t>(model.dim);
  std::vector<double> hess(dim * dim);
  for (size_t b = 0; b < dim; ++b) {
    const double h = fd_step(v[b], kLegendreStep);
    Coordinates probe = v;
    auto momenta_at = [&](double vb) {
      probe[b] = vb;
      return legendre_momenta(model, q, probe, t);
    };
    const Coordinates m_m2 = momenta_at(v[b] - 2.0 * h);
    const Coordinates m_m1 = momenta_at(v[b] - h);
    const Coordinates m_p1 = momenta_at(v[b] + h);
    const Coordinates m_p2 = momenta_at(v[b] + 2.0 * h);
    for (size_t a = 0; a < dim; ++a) {
      const double d =
          (-m_p2[a] + 8.0 * m_p1[a] - 8.0 * m_m1[a] + m_m2[a]) / (12.0 * h);
      if (!std::isfinite(d)) {
        throw std::domain_error(
            "velocity Hessian stencil hit a non-finite momentum value");
      }
      hess[a * dim + b] = d;
    }
  }
  return hess;
}

double radius(const Coordinates& v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

void check_dimension(const LagrangianModel& model, const Coordinates& value,
                     const char* context) {
  if (model.dim < 1) {
    throw std::invalid_argument(std::string(context) +
                                ": model dimension must be >= 1");
  }
  if (value.size() != static_cast<size_t>(model.dim)) {
    throw std::invalid_argument(std::string(context) +
                                ": vector size does not match model.dim");
  }
}

}  // namespace

Coordinates legendre_momenta(const LagrangianModel& model, const Coordinates& q,
                             const Coordinates& v, double t) {
  check_dimension(model, q, "legendre_momenta");
  check_dimension(model, v, "legendre_momenta");
  if (model.momenta) return model.momenta(q, v, t);

  const size_t dim = static_cast<size_t>(model.dim);
  Coordinates p(dim);
  Coordinates probe = v;
  for (size_t a = 0; a < dim; ++a) {
    const double h = fd_step(v[a], kLegendreStep);
    p[a] = central4(
        [&](double va) {
          probe[a] = va;
          const double value = model.lagrangian(q, probe, t);
          probe[a] = v[a];
          return value;
        },
        v[a], h);
  }
  return p;
}

Coordinates invert_velocities(const LagrangianModel& model,
                              const Coordinates& q, const Coordinates& p,
                              double t) {
  check_dimension(model, p, "invert_velocities");
  const size_t dim = static_cast<size_t>(model.dim);

  const double bound = model.velocity_bound;

  // Start from the small-velocity guess H(v=0) v0 = p, pulled well inside the
  // velocity domain when it lands outside.
  Coordinates v = solve_linear(
      velocity_hessian(model, q, Coordinates(dim, 0.0), t), p);
  if (std::isfinite(bound)) {
    const double r = radius(v);
    if (r >= 0.9 * bound) {
      const double scale = 0.9 * bound / r;
      for (double& x : v) x *= scale;
    }
  }

  Coordinates residual(dim);
  for (int iter = 0; iter < 50; ++iter) {
    const Coordinates current = legendre_momenta(model, q, v, t);
    double worst = 0.0;
    for (size_t a = 0; a < dim; ++a) {
      residual[a] = current[a] - p[a];
      worst = std::max(worst, std::abs(residual[a]));
    }
    if (worst < 1e-12) break;

    Coordinates rhs(dim);
    for (size_t a = 0; a < dim; ++a) rhs[a] = -residual[a];
    Coordinates delta = solve_linear(velocity_hessian(model, q, v, t), rhs);

    // Damped update: halve the step until the iterate stays strictly below
    // the velocity bound.
    Coordinates next(dim);
    for (int halvings = 0; halvings < 80; ++halvings) {
      for (size_t a = 0; a < dim; ++a) next[a] = v[a] + delta[a];
      if (!std::isfinite(bound) || radius(next) < bound * (1.0 - 1e-12)) break;
      for (size_t a = 0; a < dim; ++a) delta[a] *= 0.5;
    }

    double step_size = 0.0;
    double v_scale = 1.0;
    for (size_t a = 0; a < dim; ++a) {
      step_size = std::max(step_size, std::abs(delta[a]));
      v_scale = std::max(v_scale, std::abs(v[a]));
    }
    v = next;
    if (step_size < 1e-13 * v_scale) break;  // at the round-off floor
  }

  const Coordinates final_momenta = legendre_momenta(model, q, v, t);
  for (size_t a = 0; a < dim; ++a) {
    // Negated form so a NaN residual also fails.
    if (!(std::abs(final_momenta[a] - p[a]) <= 1e-10)) {
      throw std::runtime_error(
          "invert_velocities: Newton iteration did not converge (momentum "
          "outside the map's range, or singular Hessian)");
    }
  }
  return v;
}

double physical_hamiltonian(const LagrangianModel& model, const Coordinates& q,
                            const Coordinates& p, double t) {
  const Coordinates v = invert_velocities(model, q, p, t);
  double acc = 0.0;
  for (size_t a = 0; a < p.size(); ++a) acc += p[a] * v[a];
  return acc - model.lagrangian(q, v, t);
}

double ri_constraint(const LagrangianModel& model, const PhaseState& state) {
  return state.p_t + physical_hamiltonian(model, state.q, state.p, state.t);
}

CanonicalHamiltonianResult canonical_hamiltonian_ri(const LagrangianModel& model,
                                                    const Coordinates& q,
                                                    const Coordinates& qdot,
                                                    double t, double tdot) {
  if (!(tdot > 0.0)) {
    throw std::invalid_argument("canonical_hamiltonian_ri: tdot must be > 0");
  }
  check_dimension(model, qdot, "canonical_hamiltonian_ri");
  const size_t dim = static_cast<size_t>(model.dim);

  Coordinates v(dim);
  for (size_t a = 0; a < dim; ++a) v[a] = qdot[a] / tdot;
  const Coordinates p = legendre_momenta(model, q, v, t);
  const double lagrangian = model.lagrangian(q, v, t);
  double p_dot_v = 0.0;
  for (size_t a = 0; a < dim; ++a) p_dot_v += p[a] * v[a];
  const double p_t = lagrangian - p_dot_v;

  double p_dot_qdot = 0.0;
  for (size_t a = 0; a < dim; ++a) p_dot_qdot += p[a] * qdot[a];
  const double value = p_dot_qdot + p_t * tdot - tdot * lagrangian;

  const double constraint = p_t + physical_hamiltonian(model, q, p, t);
  return {value, std::abs(value - tdot * constraint)};
}

Trajectory integrate_physical(const LagrangianModel& model,
                              const Coordinates& q0, const Coordinates& v0,
                              double t0, double t1, double dt) {
  check_dimension(model, q0, "integrate_physical");
  check_dimension(model, v0, "integrate_physical");
  if (!(dt > 0.0) || !(t1 > t0)) {
    throw std::invalid_argument(
        "integrate_physical: need dt > 0 and t1 > t0");
  }
  const size_t dim = static_cast<size_t>(model.dim);
  const long steps = std::lround((t1 - t0) / dt);
  if (steps < 1) {
    throw std::invalid_argument("integrate_physical: interval shorter than dt");
  }

  auto hamiltonian = [&](const Coordinates& q, const Coordinates& p, double t) {
    return physical_hamiltonian(model, q, p, t);
  };

  // Hamilton's equations (dq/dt, dp/dt) by fourth-order differences of H.
  auto rhs = [&](const Coordinates& q, const Coordinates& p, double t,
                 Coordinates& dq, Coordinates& dp) {
    Coordinates probe_p = p;
    Coordinates probe_q = q;
    for (size_t a = 0; a < dim; ++a) {
      const double hp = fd_step(p[a], kHamiltonStep);
      dq[a] = central4(
          [&](double pa) {
            probe_p[a] = pa;
            const double value = hamiltonian(q, probe_p, t);
            probe_p[a] = p[a];
            return value;
          },
          p[a], hp);
      const double hq = fd_step(q[a], kHamiltonStep);
      dp[a] = -central4(
          [&](double qa) {
            probe_q[a] = qa;
            const double value = hamiltonian(probe_q, p, t);
            probe_q[a] = q[a];
            return value;
          },
          q[a], hq);
    }
  };

  Trajectory traj;
  traj.meta = {model.label, dt, "identity"};
  traj.samples.reserve(static_cast<size_t>(steps) + 1);

  Coordinates q = q0;
  Coordinates p = legendre_momenta(model, q0, v0, t0);
  double t = t0;
  auto push_sample = [&]() {
    traj.samples.push_back({q, p, t, -hamiltonian(q, p, t), t});
  };
  push_sample();

  Coordinates k1q(dim), k1p(dim), k2q(dim), k2p(dim), k3q(dim), k3p(dim),
      k4q(dim), k4p(dim), tq(dim), tp(dim);
  for (long step = 0; step < steps; ++step) {
    rhs(q, p, t, k1q, k1p);
    for (size_t a = 0; a < dim; ++a) {
      tq[a] = q[a] + 0.5 * dt * k1q[a];
      tp[a] = p[a] + 0.5 * dt * k1p[a];
    }
    rhs(tq, tp, t + 0.5 * dt, k2q, k2p);
    for (size_t a = 0; a < dim; ++a) {
      tq[a] = q[a] + 0.5 * dt * k2q[a];
      tp[a] = p[a] + 0.5 * dt * k2p[a];
    }
    rhs(tq, tp, t + 0.5 * dt, k3q, k3p);
    for (size_t a = 0; a < dim; ++a) {
      tq[a] = q[a] + dt * k3q[a];
      tp[a] = p[a] + dt * k3p[a];
    }
    rhs(tq, tp, t + dt, k4q, k4p);
    for (size_t a = 0; a < dim; ++a) {
      q[a] += dt / 6.0 * (k1q[a] + 2.0 * (k2q[a] + k3q[a]) + k4q[a]);
      p[a] += dt / 6.0 * (k1p[a] + 2.0 * (k2p[a] + k3p[a]) + k4p[a]);
    }
    t = t0 + (step + 1) * dt;
    push_sample();
  }
  return traj;
}

Trajectory lift_to_ri(const Trajectory& traj, const GaugeFunction& gauge,
                      size_t count) {
  const auto& samples = traj.samples;
  if (samples.size() < 2) {
    throw std::invalid_argument("lift_to_ri: trajectory needs >= 2 samples");
  }
  if (!(gauge.tau_max > gauge.tau_min)) {
    throw std::invalid_argument("lift_to_ri: empty tau interval");
  }
  if (count == 0) count = samples.size();
  if (count < 2) count = 2;

  const size_t dim = samples.front().q.size();
  std::vector<double> times(samples.size());
  for (size_t i = 0; i < samples.size(); ++i) {
    times[i] = samples[i].t;
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw std::invalid_argument("lift_to_ri: sample times must increase");
    }
  }

  std::vector<CubicInterpolant> q_interp;
  std::vector<CubicInterpolant> p_interp;
  for (size_t a = 0; a < dim; ++a) {
    std::vector<double> qa(samples.size()), pa(samples.size());
    for (size_t i = 0; i < samples.size(); ++i) {
      qa[i] = samples[i].q[a];
      pa[i] = samples[i].p[a];
    }
    q_interp.emplace_back(times, std::move(qa));
    p_interp.emplace_back(times, std::move(pa));
  }
  std::vector<double> pt(samples.size());
  for (size_t i = 0; i < samples.size(); ++i) pt[i] = samples[i].p_t;
  const CubicInterpolant pt_interp(times, std::move(pt));

  const double span = times.back() - times.front();
  Trajectory lifted;
  lifted.meta = {traj.meta.model, traj.meta.step, gauge.label};
  lifted.samples.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    const double tau = gauge.tau_min + (gauge.tau_max - gauge.tau_min) *
                                           static_cast<double>(i) /
                                           static_cast<double>(count - 1);
    if (!(gauge.g_dot(tau) > 0.0)) {
      throw std::invalid_argument(
          "lift_to_ri: gauge derivative must be positive (dt/dtau > 0)");
    }
    const double t = gauge.g(tau);
    if (t < times.front() - 1e-12 * span || t > times.back() + 1e-12 * span) {
      throw std::invalid_argument(
          "lift_to_ri: gauge image leaves the trajectory's time range");
    }
    PhaseState state;
    state.q.resize(dim);
    state.p.resize(dim);
    for (size_t a = 0; a < dim; ++a) {
      state.q[a] = q_interp[a](t);
      state.p[a] = p_interp[a](t);
    }
    state.t = t;
    state.p_t = pt_interp(t);
    state.tau = tau;
    lifted.samples.push_back(std::move(state));
  }
  return lifted;
}

PhysicalPath::PhysicalPath(const Trajectory& traj) {
  const auto& samples = traj.samples;
  if (samples.size() < 2) {
    throw std::invalid_argument("PhysicalPath: trajectory needs >= 2 samples");
  }
  std::vector<double> times(samples.size());
  for (size_t i = 0; i < samples.size(); ++i) {
    times[i] = samples[i].t;
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw std::invalid_argument(
          "PhysicalPath: sample times must strictly increase");
    }
  }
  const size_t dim = samples.front().q.size();
  for (size_t a = 0; a < dim; ++a) {
    std::vector<double> qa(samples.size());
    for (size_t i = 0; i < samples.size(); ++i) qa[i] = samples[i].q[a];
    component_.emplace_back(times, std::move(qa));
  }
}

Coordinates PhysicalPath::operator()(double t) const {
  Coordinates q(component_.size());
  for (size_t a = 0; a < component_.size(); ++a) q[a] = component_[a](t);
  return q;
}

double PhysicalPath::t_min() const { return component_.front().x_min(); }
double PhysicalPath::t_max() const { return component_.front().x_max(); }

PhysicalPath reconstruct_physical(const Trajectory& traj) {
  return PhysicalPath(traj);
}

double poisson_bracket(const PhaseFunction& f, const PhaseFunction& g,
                       const PhaseState& state) {
  const size_t dim = state.q.size();

  enum class Slot { Q, P, T, Pt };
  auto partial = [&](const PhaseFunction& fn, Slot slot, size_t index) {
    PhaseState probe = state;
    double* coord = nullptr;
    switch (slot) {
      case Slot::Q: coord = &probe.q[index]; break;
      case Slot::P: coord = &probe.p[index]; break;
      case Slot::T: coord = &probe.t; break;
      case Slot::Pt: coord = &probe.p_t; break;
    }
    const double x0 = *coord;
    const double h = fd_step(x0, kHamiltonStep);
    return central4(
        [&](double x) {
          *coord = x;
          const double value = fn(probe);
          *coord = x0;
          return value;
        },
        x0, h);
  };

  double bracket = 0.0;
  for (size_t a = 0; a < dim; ++a) {
    bracket += partial(f, Slot::Q, a) * partial(g, Slot::P, a) -
               partial(f, Slot::P, a) * partial(g, Slot::Q, a);
  }
  bracket += partial(f, Slot::T, 0) * partial(g, Slot::Pt, 0) -
             partial(f, Slot::Pt, 0) * partial(g, Slot::T, 0);
  return bracket;
}

RelativisticMomenta relativistic_momenta(const Coordinates& v,
                                         const PhysicalConstants& constants) {
  const double c = constants.c;
  const double m = constants.mass;
  const double speed = radius(v);
  if (speed >= c) {
    throw std::invalid_argument(
        "relativistic_momenta: |v| must be below the speed of light");
  }
  const double gamma = 1.0 / std::sqrt(1.0 - speed * speed / (c * c));
  RelativisticMomenta result;
  result.p.resize(v.size());
  double p_sq = 0.0;
  for (size_t a = 0; a < v.size(); ++a) {
    result.p[a] = m * gamma * v[a];
    p_sq += result.p[a] * result.p[a];
  }
  result.p_t = -gamma * m * c * c;

  const double shell = -c * std::sqrt(m * m * c * c + p_sq);
  if (std::abs(result.p_t - shell) > 1e-12 * std::abs(shell)) {
    throw std::runtime_error(
        "relativistic_momenta: mass-shell identity violated beyond 1e-12");
  }
  return result;
}

LagrangianModel free_particle_model(double mass) {
  LagrangianModel model;
  model.dim = 1;
  model.label = "free";
  model.lagrangian = [mass](const Coordinates&, const Coordinates& v, double) {
    return 0.5 * mass * v[0] * v[0];
  };
  model.momenta = [mass](const Coordinates&, const Coordinates& v, double) {
    return Coordinates{mass * v[0]};
  };
  return model;
}

LagrangianModel harmonic_oscillator_model(double mass, double stiffness) {
  LagrangianModel model;
  model.dim = 1;
  model.label = "harmonic";
  model.lagrangian = [mass, stiffness](const Coordinates& q,
                                       const Coordinates& v, double) {
    return 0.5 * mass * v[0] * v[0] - 0.5 * stiffness * q[0] * q[0];
  };
  model.momenta = [mass](const Coordinates&, const Coordinates& v, double) {
    return Coordinates{mass * v[0]};
  };
  return model;
}

LagrangianModel relativistic_particle_model(double mass, double c) {
  LagrangianModel model;
  model.dim = 1;
  model.label = "relativistic";
  model.velocity_bound = c;
  model.lagrangian = [mass, c](const Coordinates&, const Coordinates& v,
                               double) {
    const double under = c * c - v[0] * v[0];
    if (under <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    return -mass * c * std::sqrt(under);
  };
  model.momenta = [mass, c](const Coordinates&, const Coordinates& v, double) {
    const double under = c * c - v[0] * v[0];
    return Coordinates{mass * c * v[0] / std::sqrt(under)};
  };
  return model;
}

}  // namespace reparamqm
