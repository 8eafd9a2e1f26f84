#include "reparamqm/mechanics.hpp"

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "reparamqm/rng.hpp"

using namespace reparamqm;

namespace {

constexpr double kPi = std::numbers::pi;

LagrangianModel quadratic_fd_model(double mass) {
  // Same physics as free_particle_model but with the finite-difference
  // momentum path.
  LagrangianModel model = free_particle_model(mass);
  model.momenta = nullptr;
  model.label = "free-fd";
  return model;
}

LagrangianModel relativistic_fd_model(double mass, double c) {
  LagrangianModel model = relativistic_particle_model(mass, c);
  model.momenta = nullptr;
  model.label = "relativistic-fd";
  return model;
}

}  // namespace

TEST_CASE("legendre momenta: quadratic and relativistic values") {
  const LagrangianModel quad = free_particle_model(1.0);
  CHECK(legendre_momenta(quad, {0.0}, {2.0}, 0.0)[0] == doctest::Approx(2.0));

  // Finite-difference path on the relativistic Lagrangian, m = c = 1,
  // v = 0.6: p = 0.6/0.8 = 0.75.
  const LagrangianModel rel = relativistic_fd_model(1.0, 1.0);
  CHECK(legendre_momenta(rel, {0.0}, {0.6}, 0.0)[0] ==
        doctest::Approx(0.75).epsilon(1e-9));
}

TEST_CASE("finite-difference and analytic momenta agree") {
  const LagrangianModel analytic = free_particle_model(1.3);
  const LagrangianModel fd = quadratic_fd_model(1.3);
  SplitMix64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const double v = rng.uniform(-4.0, 4.0);
    const double pa = legendre_momenta(analytic, {0.0}, {v}, 0.0)[0];
    const double pf = legendre_momenta(fd, {0.0}, {v}, 0.0)[0];
    CHECK(pf == doctest::Approx(pa).epsilon(1e-9));
  }
}

TEST_CASE("velocity inversion: frozen values and round trips") {
  const LagrangianModel quad = free_particle_model(1.0);
  CHECK(invert_velocities(quad, {0.0}, {2.0}, 0.0)[0] == doctest::Approx(2.0));

  const LagrangianModel rel = relativistic_particle_model(1.0, 1.0);
  CHECK(invert_velocities(rel, {0.0}, {0.75}, 0.0)[0] ==
        doctest::Approx(0.6).epsilon(1e-10));

  SplitMix64 rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    const double v = rng.uniform(-0.9, 0.9);
    const Coordinates p = legendre_momenta(rel, {0.0}, {v}, 0.0);
    CHECK(invert_velocities(rel, {0.0}, p, 0.0)[0] ==
          doctest::Approx(v).epsilon(1e-10));
  }
  // Large momentum: far outside the small-velocity guess, still subluminal.
  const Coordinates v_large = invert_velocities(rel, {0.0}, {10.0}, 0.0);
  CHECK(v_large[0] == doctest::Approx(10.0 / std::sqrt(101.0)).epsilon(1e-10));
}

TEST_CASE("physical Hamiltonian: kinetic, relativistic, shifted potential") {
  const LagrangianModel quad = free_particle_model(1.0);
  CHECK(physical_hamiltonian(quad, {0.0}, {2.0}, 0.0) ==
        doctest::Approx(2.0).epsilon(1e-12));

  const LagrangianModel rel = relativistic_particle_model(1.0, 1.0);
  CHECK(physical_hamiltonian(rel, {0.0}, {0.75}, 0.0) ==
        doctest::Approx(1.25).epsilon(1e-10));

  LagrangianModel shifted = free_particle_model(1.0);
  shifted.lagrangian = [](const Coordinates&, const Coordinates& v, double) {
    return 0.5 * v[0] * v[0] - 5.0;
  };
  CHECK(physical_hamiltonian(shifted, {0.0}, {2.0}, 0.0) ==
        doctest::Approx(7.0).epsilon(1e-12));
}

TEST_CASE("constraint value on selected phase-space points") {
  const LagrangianModel quad = free_particle_model(1.0);
  PhaseState state{{0.0}, {2.0}, 0.0, -2.0, 0.0};
  CHECK(ri_constraint(quad, state) == doctest::Approx(0.0));

  const LagrangianModel rel = relativistic_particle_model(1.0, 1.0);
  PhaseState rest{{0.0}, {0.0}, 0.0, -1.0, 0.0};
  CHECK(ri_constraint(rel, rest) == doctest::Approx(0.0).epsilon(1e-12));

  state.p_t += 0.1;
  CHECK(ri_constraint(quad, state) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("canonical Hamiltonian factorization at random points") {
  SplitMix64 rng(3);
  const LagrangianModel models[] = {free_particle_model(1.0),
                                    harmonic_oscillator_model(1.0, 1.0),
                                    relativistic_particle_model(1.0, 1.0)};
  for (const auto& model : models) {
    for (int trial = 0; trial < 100; ++trial) {
      const double bound =
          std::isfinite(model.velocity_bound) ? 0.9 * model.velocity_bound : 4.0;
      const double tdot = rng.uniform(0.2, 3.0);
      const double qdot = rng.uniform(-bound, bound) * tdot;
      const double q = rng.uniform(-2.0, 2.0);
      const auto result =
          canonical_hamiltonian_ri(model, {q}, {qdot}, 0.0, tdot);
      CHECK(result.factorization_residual < 1e-10);
      // The canonical Hamiltonian itself vanishes: degree-one homogeneity.
      CHECK(std::abs(result.value) < 1e-10);
    }
  }
}

TEST_CASE("canonical Hamiltonian scales linearly in tdot at fixed velocity") {
  const LagrangianModel model = harmonic_oscillator_model(1.0, 1.0);
  const double v = 0.8;
  for (double tdot : {0.5, 1.0, 2.0, 4.0}) {
    const auto result =
        canonical_hamiltonian_ri(model, {0.3}, {v * tdot}, 0.0, tdot);
    const auto base = canonical_hamiltonian_ri(model, {0.3}, {v}, 0.0, 1.0);
    CHECK(std::abs(result.value - tdot * base.value) < 1e-10);
  }
  CHECK_THROWS_AS(canonical_hamiltonian_ri(model, {0.0}, {1.0}, 0.0, -1.0),
                  std::invalid_argument);
}

TEST_CASE("free particle trajectory is a straight line") {
  const LagrangianModel model = free_particle_model(1.0);
  const Trajectory traj = integrate_physical(model, {0.5}, {2.0}, 0.0, 3.0, 0.01);
  for (const PhaseState& s : traj.samples) {
    CHECK(std::abs(s.q[0] - (0.5 + 2.0 * s.t)) < 1e-10);
    CHECK(std::abs(s.p[0] - 2.0) < 1e-10);
  }
}

TEST_CASE("harmonic oscillator: energy drift below 1e-10 over one period") {
  const LagrangianModel model = harmonic_oscillator_model(1.0, 1.0);
  const Trajectory traj =
      integrate_physical(model, {1.0}, {0.0}, 0.0, 2.0 * kPi, 1e-3);
  const double e0 = -traj.samples.front().p_t;
  double worst = 0.0;
  for (const PhaseState& s : traj.samples) {
    worst = std::max(worst, std::abs(-s.p_t - e0) / e0);
  }
  CHECK(worst < 1e-10);

  // Against the analytic solution q = cos(t) at the actual end time.
  const double t_end = traj.samples.back().t;
  CHECK(std::abs(traj.samples.back().q[0] - std::cos(t_end)) < 1e-9);
}

TEST_CASE("RK4 endpoint error shrinks ~16x per dt halving") {
  const LagrangianModel model = harmonic_oscillator_model(1.0, 1.0);
  // Horizon commensurate with every dt below.
  const double horizon = 6.4;
  auto endpoint_error = [&](double dt) {
    const Trajectory traj =
        integrate_physical(model, {1.0}, {0.0}, 0.0, horizon, dt);
    // Analytic oracle: q = cos(t), p = -sin(t).
    return std::hypot(traj.samples.back().q[0] - std::cos(horizon),
                      traj.samples.back().p[0] + std::sin(horizon));
  };
  const double e1 = endpoint_error(0.2);
  const double e2 = endpoint_error(0.1);
  const double e3 = endpoint_error(0.05);
  CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.2));
  CHECK(e2 / e3 == doctest::Approx(16.0).epsilon(0.2));
}

TEST_CASE("constraint vanishes along integrated trajectories") {
  const LagrangianModel models[] = {free_particle_model(1.0),
                                    harmonic_oscillator_model(1.0, 1.0),
                                    relativistic_particle_model(1.0, 1.0)};
  const Coordinates v0s[] = {{2.0}, {0.0}, {0.6}};
  for (size_t i = 0; i < 3; ++i) {
    const Trajectory traj =
        integrate_physical(models[i], {i == 1 ? 1.0 : 0.0}, v0s[i], 0.0, 2.0,
                           1e-2);
    double worst = 0.0;
    for (const PhaseState& s : traj.samples) {
      worst = std::max(worst, std::abs(ri_constraint(models[i], s)));
    }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("identity gauge lift reproduces the trajectory") {
  const LagrangianModel model = free_particle_model(1.0);
  const Trajectory traj = integrate_physical(model, {0.0}, {1.5}, 0.0, 1.0, 0.01);
  const GaugeFunction identity{[](double tau) { return tau; },
                               [](double) { return 1.0; }, 0.0, 1.0, "identity"};
  const Trajectory lifted = lift_to_ri(traj, identity);
  REQUIRE(lifted.samples.size() == traj.samples.size());
  for (size_t i = 0; i < lifted.samples.size(); ++i) {
    CHECK(std::abs(lifted.samples[i].q[0] - traj.samples[i].q[0]) < 1e-12);
    CHECK(std::abs(lifted.samples[i].t - traj.samples[i].t) < 1e-12);
  }
}

TEST_CASE("cubic gauge on the free particle matches x = v g(tau) + x0") {
  const LagrangianModel model = free_particle_model(1.0);
  const Trajectory traj = integrate_physical(model, {0.0}, {1.0}, 0.0, 1.0, 1e-3);
  const GaugeFunction cubic{[](double tau) { return tau * tau * tau; },
                            [](double tau) { return 3.0 * tau * tau; }, 0.1, 1.0,
                            "tau^3"};
  const Trajectory lifted = lift_to_ri(traj, cubic);
  for (const PhaseState& s : lifted.samples) {
    const double g = s.tau * s.tau * s.tau;
    CHECK(std::abs(s.t - g) < 1e-12);
    CHECK(std::abs(s.q[0] - g) < 1e-12);  // x = v g(tau) + x0 with v=1, x0=0
  }

  // Excluding tau recovers x(t) = v t + x0.
  const PhysicalPath path = reconstruct_physical(lifted);
  for (double t = 0.0011; t < 0.999; t += 0.01) {
    CHECK(std::abs(path({t})[0] - t) < 1e-9);
  }
}

TEST_CASE("constraint survives the lift within 1e-8") {
  const LagrangianModel model = harmonic_oscillator_model(1.0, 1.0);
  const Trajectory traj =
      integrate_physical(model, {1.0}, {0.0}, 0.0, 6.4, 1e-3);
  const double tau_hi = std::cbrt(6.28);
  const GaugeFunction cubic{[](double tau) { return tau * tau * tau; },
                            [](double tau) { return 3.0 * tau * tau; }, 0.1,
                            tau_hi, "tau^3"};
  const Trajectory lifted = lift_to_ri(traj, cubic);
  double worst = 0.0;
  for (const PhaseState& s : lifted.samples) {
    worst = std::max(worst, std::abs(ri_constraint(model, s)));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("gauge invariance of the reconstructed motion") {
  const LagrangianModel model = harmonic_oscillator_model(1.0, 1.0);
  const Trajectory traj =
      integrate_physical(model, {1.0}, {0.0}, 0.0, 6.4, 1e-3);

  const double tau_cubic_hi = std::cbrt(6.28);
  const GaugeFunction cubic{[](double tau) { return tau * tau * tau; },
                            [](double tau) { return 3.0 * tau * tau; }, 0.1,
                            tau_cubic_hi, "tau^3"};
  const double tau_exp_hi = std::log(1.0 + 6.28);
  const GaugeFunction expm1{[](double tau) { return std::expm1(tau); },
                            [](double tau) { return std::exp(tau); }, 0.1,
                            tau_exp_hi, "exp(tau)-1"};

  const PhysicalPath path_a = reconstruct_physical(lift_to_ri(traj, cubic));
  const PhysicalPath path_b = reconstruct_physical(lift_to_ri(traj, expm1));

  const double lo = std::max(path_a.t_min(), path_b.t_min());
  const double hi = std::min(path_a.t_max(), path_b.t_max());
  double worst = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double t = lo + (hi - lo) * i / 200.0;
    worst = std::max(worst, std::abs(path_a({t})[0] - path_b({t})[0]));
  }
  CHECK(worst < 1e-7);
}

TEST_CASE("gauge validation: non-monotone and out-of-range gauges rejected") {
  const LagrangianModel model = free_particle_model(1.0);
  const Trajectory traj = integrate_physical(model, {0.0}, {1.0}, 0.0, 1.0, 0.01);

  const GaugeFunction folded{[](double tau) { return tau * (1.0 - tau); },
                             [](double tau) { return 1.0 - 2.0 * tau; }, 0.0,
                             1.0, "folded"};
  CHECK_THROWS_AS(lift_to_ri(traj, folded), std::invalid_argument);

  const GaugeFunction outside{[](double tau) { return 5.0 + tau; },
                              [](double) { return 1.0; }, 0.0, 1.0, "offset"};
  CHECK_THROWS_AS(lift_to_ri(traj, outside), std::invalid_argument);
}

TEST_CASE("p_t stays constant along trajectories with static potentials") {
  const LagrangianModel model = harmonic_oscillator_model(1.0, 1.0);
  const Trajectory traj =
      integrate_physical(model, {0.3}, {0.9}, 0.0, 10.0, 1e-3);
  const double p_t0 = traj.samples.front().p_t;
  for (const PhaseState& s : traj.samples) {
    CHECK(std::abs(s.p_t - p_t0) < 1e-9);
  }
}

TEST_CASE("canonical Poisson brackets on the extended phase space") {
  PhaseState state{{0.3, -0.7}, {1.2, 0.4}, 0.9, -1.1, 0.0};

  const PhaseFunction x1 = [](const PhaseState& s) { return s.q[0]; };
  const PhaseFunction p1 = [](const PhaseState& s) { return s.p[0]; };
  const PhaseFunction x2 = [](const PhaseState& s) { return s.q[1]; };
  const PhaseFunction p2 = [](const PhaseState& s) { return s.p[1]; };
  const PhaseFunction tf = [](const PhaseState& s) { return s.t; };
  const PhaseFunction pt = [](const PhaseState& s) { return s.p_t; };

  CHECK(poisson_bracket(x1, p1, state) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(poisson_bracket(tf, pt, state) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(poisson_bracket(x1, p2, state)) < 1e-8);
  CHECK(std::abs(poisson_bracket(x1, x2, state)) < 1e-8);
  CHECK(std::abs(poisson_bracket(x1, pt, state)) < 1e-8);
  CHECK(std::abs(poisson_bracket(tf, p1, state)) < 1e-8);
}

TEST_CASE("numeric brackets are antisymmetric on random smooth functions") {
  SplitMix64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const double a = rng.uniform(-1.0, 1.0);
    const double b = rng.uniform(-1.0, 1.0);
    const double c = rng.uniform(-1.0, 1.0);
    const PhaseFunction f = [a, b, c](const PhaseState& s) {
      return a * std::sin(s.q[0]) * s.p[0] + b * s.t * s.p_t +
             c * std::cos(s.p[0] + s.t);
    };
    const double d = rng.uniform(-1.0, 1.0);
    const double e = rng.uniform(-1.0, 1.0);
    const PhaseFunction g = [d, e](const PhaseState& s) {
      return d * s.q[0] * s.q[0] * s.p_t + e * std::exp(0.3 * s.p[0]) * s.t;
    };
    PhaseState state{{rng.uniform(-1.0, 1.0)}, {rng.uniform(-1.0, 1.0)},
                     rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), 0.0};
    const double fg = poisson_bracket(f, g, state);
    const double gf = poisson_bracket(g, f, state);
    CHECK(std::abs(fg + gf) < 1e-10);
  }
}

TEST_CASE("relativistic momenta: rest case, gamma arithmetic, mass shell") {
  const PhysicalConstants pc(1.0, 1.0, 1.0);
  const RelativisticMomenta rest = relativistic_momenta({0.0}, pc);
  CHECK(rest.p[0] == 0.0);
  CHECK(rest.p_t == doctest::Approx(-1.0));

  const RelativisticMomenta moving = relativistic_momenta({0.6}, pc);
  CHECK(moving.p[0] == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(moving.p_t == doctest::Approx(-1.25).epsilon(1e-14));
  const double shell =
      moving.p_t + std::sqrt(1.0 + moving.p[0] * moving.p[0]);
  CHECK(std::abs(shell) < 1e-14);

  SplitMix64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const double v = rng.uniform(-0.99, 0.99);
    const RelativisticMomenta m = relativistic_momenta({v}, pc);
    const double residual =
        m.p_t + pc.c * std::sqrt(pc.mass * pc.mass * pc.c * pc.c + m.p[0] * m.p[0]);
    CHECK(std::abs(residual) < 1e-12 * std::abs(m.p_t));
  }

  CHECK_THROWS_AS(relativistic_momenta({1.0}, pc), std::invalid_argument);
  CHECK_THROWS_AS(relativistic_momenta({-1.2}, pc), std::invalid_argument);
}

TEST_CASE("relativistic momenta in more than one dimension") {
  const PhysicalConstants pc(1.0, 2.0, 1.5);
  const Coordinates v{0.6, -0.8, 1.0};  // |v| = sqrt(2) < c = 2
  const RelativisticMomenta m = relativistic_momenta(v, pc);
  double p_sq = 0.0;
  for (double p : m.p) p_sq += p * p;
  CHECK(std::abs(m.p_t + pc.c * std::sqrt(pc.mass * pc.mass * pc.c * pc.c +
                                          p_sq)) < 1e-12 * std::abs(m.p_t));
}

TEST_CASE("two-dimensional quadratic model round trip") {
  LagrangianModel model;
  model.dim = 2;
  model.label = "anisotropic";
  model.lagrangian = [](const Coordinates& q, const Coordinates& v, double) {
    return 0.5 * (v[0] * v[0] + 2.0 * v[1] * v[1]) - q[0] * q[1];
  };
  const Coordinates p = legendre_momenta(model, {0.1, 0.2}, {1.5, -0.5}, 0.0);
  CHECK(p[0] == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(p[1] == doctest::Approx(-1.0).epsilon(1e-9));
  const Coordinates v = invert_velocities(model, {0.1, 0.2}, p, 0.0);
  CHECK(v[0] == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(v[1] == doctest::Approx(-0.5).epsilon(1e-9));
  // H = p1^2/2 + p2^2/4 + q1 q2.
  CHECK(physical_hamiltonian(model, {0.1, 0.2}, p, 0.0) ==
        doctest::Approx(1.125 + 0.25 + 0.02).epsilon(1e-9));
}

TEST_CASE("RI relativistic Lagrangian matches its covariant form") {
  // tdot * L(xdot/tdot) = -m c sqrt(c^2 tdot^2 - xdot^2) whenever tdot > 0.
  const double mass = 1.3;
  const double c = 2.0;
  const LagrangianModel model = relativistic_particle_model(mass, c);
  SplitMix64 rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const double tdot = rng.uniform(0.1, 3.0);
    const double xdot = rng.uniform(-0.95, 0.95) * c * tdot;
    const double lhs =
        tdot * model.lagrangian({0.0}, {xdot / tdot}, 0.0);
    const double rhs = -mass * c * std::sqrt(c * c * tdot * tdot - xdot * xdot);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("degenerate Lagrangians are rejected") {
  LagrangianModel flat;
  flat.dim = 1;
  flat.label = "linear";
  flat.lagrangian = [](const Coordinates&, const Coordinates& v, double) {
    return v[0];  // dL/dv constant: singular Hessian
  };
  CHECK_THROWS(invert_velocities(flat, {0.0}, {1.0}, 0.0));
}
