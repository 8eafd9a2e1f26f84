#include "reparamqm/spectral.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "reparamqm/rng.hpp"
#include "reparamqm/synth.hpp"

using namespace reparamqm;

namespace {

constexpr double kPi = std::numbers::pi;

ComplexField random_field(const GridSpec& grid, SplitMix64& rng) {
  std::vector<Complex> values(static_cast<size_t>(grid.n));
  for (auto& v : values) v = Complex(rng.gaussian(), rng.gaussian());
  return ComplexField(grid, std::move(values));
}

double max_pointwise_error(const ComplexField& a, const ComplexField& b) {
  double worst = 0.0;
  for (size_t j = 0; j < a.values.size(); ++j) {
    worst = std::max(worst, std::abs(a.values[j] - b.values[j]));
  }
  return worst;
}

}  // namespace

TEST_CASE("grid invariants are enforced") {
  CHECK_THROWS_AS(GridSpec(6, 1.0), std::invalid_argument);   // not power of two
  CHECK_THROWS_AS(GridSpec(4, 1.0), std::invalid_argument);   // below minimum
  CHECK_THROWS_AS(GridSpec(8, -1.0), std::invalid_argument);  // negative length
  const GridSpec grid(8, 2.0);
  CHECK(grid.spacing == doctest::Approx(0.25));
  CHECK(grid.spacing * grid.n == doctest::Approx(grid.length).epsilon(1e-15));
}

TEST_CASE("fields enforce finiteness and matching length") {
  const GridSpec grid(8, 1.0);
  std::vector<Complex> bad(8, Complex(1.0, 0.0));
  bad[3] = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
  CHECK_THROWS_AS(ComplexField(grid, bad), std::invalid_argument);
  CHECK_THROWS_AS(ComplexField(grid, std::vector<Complex>(7)),
                  std::invalid_argument);
  std::vector<double> spike(8, 0.0);
  spike[0] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(RealField(grid, spike), std::invalid_argument);
}

TEST_CASE("physical constants derive mu = m c / hbar") {
  const PhysicalConstants pc(2.0, 3.0, 4.0);
  CHECK(pc.mu == doctest::Approx(6.0).epsilon(1e-15));
  CHECK_THROWS_AS(PhysicalConstants(0.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(PhysicalConstants(1.0, 1.0, -1.0), std::invalid_argument);
}

TEST_CASE("wavenumbers follow the standard transform ordering") {
  const std::vector<double> k = wavenumbers(GridSpec(8, 2.0 * kPi));
  const std::vector<double> expected{0, 1, 2, 3, -4, -3, -2, -1};
  REQUIRE(k.size() == expected.size());
  for (size_t j = 0; j < k.size(); ++j) {
    CHECK(k[j] == doctest::Approx(expected[j]).epsilon(1e-14));
  }
}

TEST_CASE("wavenumbers scale with 2 pi / L") {
  const std::vector<double> k = wavenumbers(GridSpec(8, kPi));
  const std::vector<double> expected{0, 2, 4, 6, -8, -6, -4, -2};
  for (size_t j = 0; j < k.size(); ++j) {
    CHECK(k[j] == doctest::Approx(expected[j]).epsilon(1e-14));
  }
}

TEST_CASE("exactly one zero mode on any grid") {
  for (int n : {8, 64, 256}) {
    const std::vector<double> k = wavenumbers(GridSpec(n, 3.7));
    int zeros = 0;
    for (double kj : k) zeros += kj == 0.0 ? 1 : 0;
    CHECK(zeros == 1);
  }
}

TEST_CASE("Kronecker delta transforms to a flat spectrum of modulus 1/sqrt(n)") {
  const GridSpec grid(8, 2.0 * kPi);
  ComplexField delta = ComplexField::zero(grid);
  delta.values[0] = 1.0;
  const ComplexField spectrum = forward_transform(delta);
  for (const auto& c : spectrum.values) {
    CHECK(std::abs(c) == doctest::Approx(1.0 / std::sqrt(8.0)).epsilon(1e-13));
  }
}

TEST_CASE("constant field maps to a single zero-mode coefficient sqrt(n)") {
  const GridSpec grid(16, 1.0);
  const ComplexField ones(grid, std::vector<Complex>(16, Complex(1.0, 0.0)));
  const ComplexField spectrum = forward_transform(ones);
  CHECK(spectrum.values[0].real() == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(spectrum.values[0].imag() == doctest::Approx(0.0));
  for (size_t j = 1; j < spectrum.values.size(); ++j) {
    CHECK(std::abs(spectrum.values[j]) < 1e-13);
  }
}

TEST_CASE("random round trip and Parseval") {
  SplitMix64 rng(11);
  const GridSpec grid(256, 5.0);
  for (int trial = 0; trial < 5; ++trial) {
    const ComplexField f = random_field(grid, rng);
    const ComplexField spectrum = forward_transform(f);
    const ComplexField back = inverse_transform(spectrum);
    CHECK(max_pointwise_error(f, back) < 1e-12);

    double sum_f = 0.0, sum_hat = 0.0;
    for (const auto& v : f.values) sum_f += std::norm(v);
    for (const auto& v : spectrum.values) sum_hat += std::norm(v);
    CHECK(sum_f == doctest::Approx(sum_hat).epsilon(1e-12));
  }
}

TEST_CASE("identity multiplier leaves fields unchanged") {
  SplitMix64 rng(22);
  const GridSpec grid(64, 2.0);
  const ComplexField f = random_field(grid, rng);
  CHECK(max_pointwise_error(apply_multiplier(f, identity_multiplier()), f) <
        1e-13);
}

TEST_CASE("plane waves are eigenfunctions of any multiplier") {
  const GridSpec grid(64, 2.0 * kPi);
  const SpectralMultiplier m{[](double k) { return Complex(k * k + 0.5, -k); },
                             "test"};
  for (int mode : {0, 1, 5, -7}) {
    const ComplexField wave = plane_wave(grid, mode);
    const double k = 2.0 * kPi * mode / grid.length;
    const Complex eigenvalue = m.evaluator(k);
    const ComplexField mapped = apply_multiplier(wave, m);
    double worst = 0.0;
    for (size_t j = 0; j < wave.values.size(); ++j) {
      worst = std::max(worst,
                       std::abs(mapped.values[j] - eigenvalue * wave.values[j]));
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("-k^2 multiplier reproduces the analytic Laplacian of sin(x)") {
  const GridSpec grid(64, 2.0 * kPi);
  std::vector<Complex> values(64);
  for (int j = 0; j < 64; ++j) values[j] = std::sin(j * grid.spacing);
  const ComplexField f(grid, values);
  const ComplexField lap = apply_multiplier(f, laplacian_multiplier());
  double worst = 0.0;
  for (int j = 0; j < 64; ++j) {
    worst = std::max(worst, std::abs(lap.values[j] + std::sin(j * grid.spacing)));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("sqrt multiplier values at selected wavenumbers") {
  const auto massive = sqrt_kg_multiplier(1.0);
  CHECK(massive.evaluator(0.0).real() == doctest::Approx(1.0));
  CHECK(massive.evaluator(1.0).real() ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  const auto massless = sqrt_kg_multiplier(0.0);
  CHECK(massless.evaluator(2.0).real() == doctest::Approx(2.0));
  CHECK(massless.evaluator(-2.0).real() == doctest::Approx(2.0));
}

TEST_CASE("inner product basics") {
  const GridSpec grid(32, 4.0);
  const double amp = 1.0 / std::sqrt(grid.length);
  const ComplexField constant(grid,
                              std::vector<Complex>(32, Complex(amp, 0.0)));
  CHECK(inner_product(constant, constant).real() ==
        doctest::Approx(1.0).epsilon(1e-13));
  CHECK(norm(constant) == doctest::Approx(1.0).epsilon(1e-13));

  const ComplexField w1 = plane_wave(grid, 1);
  const ComplexField w2 = plane_wave(grid, 3);
  CHECK(std::abs(inner_product(w1, w2)) < 1e-12);

  SplitMix64 rng(33);
  const ComplexField f = random_field(grid, rng);
  const ComplexField g = random_field(grid, rng);
  const Complex fg = inner_product(f, g);
  const Complex gf = inner_product(g, f);
  CHECK(std::abs(fg - std::conj(gf)) < 1e-12);

  const GridSpec other(32, 5.0);
  CHECK_THROWS_AS(inner_product(f, ComplexField::zero(other)),
                  std::invalid_argument);
}

TEST_CASE("real multipliers act hermitially on random pairs") {
  SplitMix64 rng(44);
  const GridSpec grid(128, 3.0);
  const auto m = sqrt_kg_multiplier(0.7);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexField f = random_field(grid, rng);
    const ComplexField g = random_field(grid, rng);
    const Complex lhs = inner_product(f, apply_multiplier(g, m));
    const Complex rhs = inner_product(apply_multiplier(f, m), g);
    CHECK(std::abs(lhs.imag() - rhs.imag()) < 1e-12);
    CHECK(std::abs(lhs - rhs) < 1e-11);
  }
}

TEST_CASE("derivative multiplier is hermitian including the Nyquist mode") {
  SplitMix64 rng(45);
  const GridSpec grid(32, 2.0 * kPi);
  const auto ddx = derivative_multiplier(grid);
  // Occupy every mode, Nyquist included.
  const ComplexField f = random_field(grid, rng);
  const ComplexField g = random_field(grid, rng);
  // d/dx is anti-hermitian on the periodic box: <f, g'> = -<f', g>.
  const Complex lhs = inner_product(f, apply_multiplier(g, ddx));
  const Complex rhs = inner_product(apply_multiplier(f, ddx), g);
  CHECK(std::abs(lhs + rhs) < 1e-11);
}

TEST_CASE("derivative multiplier annihilates the Nyquist mode on any box") {
  for (double length : {2.0 * kPi, 1.5, 7.3, 0.02}) {
    const GridSpec grid(32, length);
    const ComplexField nyquist_wave = plane_wave(grid, -grid.n / 2);
    const ComplexField d =
        apply_multiplier(nyquist_wave, derivative_multiplier(grid));
    double worst = 0.0;
    for (const auto& v : d.values) worst = std::max(worst, std::abs(v));
    // What survives is sampling round-off on the other modes, amplified by
    // at most their |k|; the Nyquist coefficient itself must be gone.
    const double amp = 1.0 / std::sqrt(length);
    const double k_max = kPi * grid.n / length;
    CHECK(worst < 2e-13 * (1.0 + amp * k_max));
  }
}

TEST_CASE("multiplier composition equals the product multiplier") {
  SplitMix64 rng(55);
  const GridSpec grid(64, 1.5);
  const SpectralMultiplier m1{
      [](double k) { return std::polar(1.0, 0.01 * k * k); }, "m1"};
  const SpectralMultiplier m2{
      [](double k) { return Complex(0.5, 0.0) * std::polar(1.0, 0.7 * k); },
      "m2"};
  const SpectralMultiplier m12{
      [](double k) {
        return std::polar(1.0, 0.01 * k * k) * Complex(0.5, 0.0) *
               std::polar(1.0, 0.7 * k);
      },
      "m1*m2"};
  const ComplexField f = random_field(grid, rng);
  const ComplexField chained = apply_multiplier(apply_multiplier(f, m1), m2);
  const ComplexField fused = apply_multiplier(f, m12);
  CHECK(max_pointwise_error(chained, fused) < 1e-12);
}

TEST_CASE("spectral accuracy on band-limited data") {
  // Independent oracle: direct mode summation, no FFT involved.
  const GridSpec grid(128, 2.0 * kPi);
  SplitMix64 rng(66);
  std::vector<Complex> coeff(16);
  for (auto& c : coeff) c = Complex(rng.gaussian(), rng.gaussian());

  std::vector<Complex> values(128), second(128);
  for (int j = 0; j < 128; ++j) {
    const double x = j * grid.spacing;
    Complex acc(0.0, 0.0), acc2(0.0, 0.0);
    for (int mode = 0; mode < 16; ++mode) {
      const double k = mode <= 8 ? mode : mode - 16.0;
      const Complex wave = std::polar(1.0, k * x);
      acc += coeff[static_cast<size_t>(mode)] * wave;
      acc2 += coeff[static_cast<size_t>(mode)] * (-k * k) * wave;
    }
    values[static_cast<size_t>(j)] = acc;
    second[static_cast<size_t>(j)] = acc2;
  }
  const ComplexField f(grid, values);
  const ComplexField lap = apply_multiplier(f, laplacian_multiplier());
  double worst = 0.0;
  for (int j = 0; j < 128; ++j) {
    worst = std::max(worst,
                     std::abs(lap.values[static_cast<size_t>(j)] -
                              second[static_cast<size_t>(j)]));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("real-field multiplier application rejects symmetry-breaking symbols") {
  const GridSpec grid(32, 2.0 * kPi);
  std::vector<double> values(32);
  for (int j = 0; j < 32; ++j) values[j] = std::cos(j * grid.spacing);
  const RealField f(grid, values);
  // Even real symbols and i*k preserve reality.
  CHECK_NOTHROW(apply_multiplier(f, sqrt_kg_multiplier(1.0)));
  CHECK_NOTHROW(apply_multiplier(f, derivative_multiplier(grid)));
  // A real odd symbol turns cos into i*sin: must be rejected.
  const SpectralMultiplier odd{[](double k) { return Complex(k, 0.0); }, "k"};
  CHECK_THROWS_AS(apply_multiplier(f, odd), std::invalid_argument);
}

TEST_CASE("minimal Gaussian saturates the uncertainty bound") {
  const GridSpec grid(512, 32.0);
  const PhysicalConstants pc(1.0, 1.0, 1.0);
  const double sigma = grid.length / 32.0;
  const ComplexField psi = gaussian_packet(grid, grid.length / 2.0, sigma);
  const UncertaintyResult u = uncertainty_product(psi, pc);
  CHECK(u.bound == doctest::Approx(0.5));
  CHECK(u.dx == doctest::Approx(sigma).epsilon(1e-8));
  CHECK(u.dx * u.dp == doctest::Approx(pc.hbar / 2.0).epsilon(1e-6));
}

TEST_CASE("chirped Gaussian exceeds the bound by the analytic factor") {
  const GridSpec grid(512, 32.0);
  const PhysicalConstants pc(1.0, 1.0, 1.0);
  const double sigma = 1.0;
  const double beta = 0.35;
  const ComplexField psi =
      gaussian_packet(grid, grid.length / 2.0, sigma, 0.0, beta);
  const UncertaintyResult u = uncertainty_product(psi, pc);
  // Delta p^2 = hbar^2 (1/(4 sigma^2) + 4 beta^2 sigma^2) for the chirped
  // packet, from the Gaussian moment integrals.
  const double expected_product =
      0.5 * std::sqrt(1.0 + 16.0 * beta * beta * sigma * sigma * sigma * sigma);
  CHECK(u.dx * u.dp == doctest::Approx(expected_product).epsilon(1e-6));
  CHECK(u.dx * u.dp > u.bound);
}

TEST_CASE("plane-wave modulation shifts the momentum mean, not the spreads") {
  const GridSpec grid(512, 32.0);
  const PhysicalConstants pc(1.0, 1.0, 1.0);
  const double k0 = 2.0 * kPi * 8.0 / grid.length;  // exact grid mode
  const ComplexField base = gaussian_packet(grid, grid.length / 2.0, 1.2);
  const ComplexField boosted =
      gaussian_packet(grid, grid.length / 2.0, 1.2, k0);
  const UncertaintyResult u0 = uncertainty_product(base, pc);
  const UncertaintyResult u1 = uncertainty_product(boosted, pc);
  CHECK(u1.dx == doctest::Approx(u0.dx).epsilon(1e-9));
  CHECK(u1.dp == doctest::Approx(u0.dp).epsilon(1e-9));
}

TEST_CASE("uncertainty rejects unnormalized and boundary-hugging states") {
  const GridSpec grid(256, 16.0);
  const PhysicalConstants pc(1.0, 1.0, 1.0);
  ComplexField psi = gaussian_packet(grid, grid.length / 2.0, 1.0);
  for (auto& v : psi.values) v *= 2.0;
  CHECK_THROWS_AS(uncertainty_product(psi, pc), std::invalid_argument);

  // A packet as wide as the box keeps substantial mass near the boundary no
  // matter how it is recentered.
  const ComplexField wide =
      gaussian_packet(grid, grid.length / 2.0, grid.length / 3.0);
  CHECK_THROWS_AS(uncertainty_product(wide, pc), std::invalid_argument);
}

TEST_CASE("circular recentering handles packets near the seam") {
  const GridSpec grid(512, 32.0);
  const PhysicalConstants pc(1.0, 1.0, 1.0);
  const double sigma = 0.8;
  // Packet one wrap away from x = 0; the flat chart only works after the
  // circular mean has been moved to L/2.
  const ComplexField psi =
      gaussian_packet(grid, grid.length - 2.0 * sigma, sigma);
  const UncertaintyResult u = uncertainty_product(psi, pc);
  CHECK(u.dx == doctest::Approx(sigma).epsilon(0.05));
  CHECK(u.dx * u.dp >= pc.hbar / 2.0 * (1.0 - 1e-6));
}

TEST_CASE("Robertson bound holds on randomized localized states") {
  const GridSpec grid(256, 20.0);
  const PhysicalConstants pc(1.0, 1.0, 1.0);
  SplitMix64 rng(77);
  for (int trial = 0; trial < 25; ++trial) {
    const double sigma = rng.uniform(grid.length / 40.0, grid.length / 24.0);
    const double center =
        grid.length / 2.0 + rng.uniform(-grid.length / 16.0, grid.length / 16.0);
    const double k0 = rng.uniform(-3.0, 3.0);
    const double beta = rng.uniform(-1.0, 1.0) / (sigma * sigma);
    const ComplexField psi = gaussian_packet(grid, center, sigma, k0, beta);
    const UncertaintyResult u = uncertainty_product(psi, pc);
    CHECK(u.dx * u.dp >= pc.hbar / 2.0 * (1.0 - 1e-6));
  }
}

TEST_CASE("transform unitarity on random fields") {
  SplitMix64 rng(88);
  for (int n : {8, 32, 1024}) {
    const GridSpec grid(n, 2.5);
    const ComplexField f = random_field(grid, rng);
    CHECK(norm(forward_transform(f)) ==
          doctest::Approx(norm(f)).epsilon(1e-12));
  }
}
