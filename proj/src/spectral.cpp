#include "reparamqm/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace reparamqm {

namespace {

// FFTW's planner is not thread-safe, so plan creation is serialized and plans
// are cached per size. Plans are built with FFTW_UNALIGNED and executed via
// the new-array interface, which is safe to call concurrently.
class PlanCache {
 public:
  fftw_plan get(int n, int sign) {
    std::scoped_lock lock(mutex_);
    auto& table = sign == FFTW_FORWARD ? forward_ : backward_;
    auto it = table.find(n);
    if (it != table.end()) return it->second;
    std::vector<Complex> scratch_in(static_cast<size_t>(n));
    std::vector<Complex> scratch_out(static_cast<size_t>(n));
    fftw_plan plan = fftw_plan_dft_1d(
        n, reinterpret_cast<fftw_complex*>(scratch_in.data()),
        reinterpret_cast<fftw_complex*>(scratch_out.data()), sign,
        FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) {
      throw std::runtime_error("FFTW plan creation failed");
    }
    table.emplace(n, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [n, plan] : forward_) fftw_destroy_plan(plan);
    for (auto& [n, plan] : backward_) fftw_destroy_plan(plan);
  }

 private:
  std::mutex mutex_;
  std::unordered_map<int, fftw_plan> forward_;
  std::unordered_map<int, fftw_plan> backward_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

ComplexField transform(const ComplexField& f, int sign) {
  const int n = f.grid.n;
  std::vector<Complex> in(f.values);
  std::vector<Complex> out(static_cast<size_t>(n));
  fftw_execute_dft(plan_cache().get(n, sign),
                   reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (auto& v : out) v *= scale;
  return ComplexField(f.grid, std::move(out));
}

double max_abs(const std::vector<Complex>& values) {
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

std::vector<double> wavenumbers(const GridSpec& grid) {
  const double base = 2.0 * std::numbers::pi / grid.length;
  std::vector<double> k(static_cast<size_t>(grid.n));
  for (int j = 0; j < grid.n / 2; ++j) k[static_cast<size_t>(j)] = base * j;
  for (int j = grid.n / 2; j < grid.n; ++j) {
    k[static_cast<size_t>(j)] = base * (j - grid.n);
  }
  return k;
}

ComplexField forward_transform(const ComplexField& f) {
  return transform(f, FFTW_FORWARD);
}

ComplexField inverse_transform(const ComplexField& coeffs) {
  return transform(coeffs, FFTW_BACKWARD);
}

ComplexField apply_multiplier(const ComplexField& f,
                              const SpectralMultiplier& m) {
  ComplexField coeffs = forward_transform(f);
  const std::vector<double> k = wavenumbers(f.grid);
  for (size_t j = 0; j < coeffs.values.size(); ++j) {
    coeffs.values[j] *= m.evaluator(k[j]);
  }
  return inverse_transform(coeffs);
}

RealField apply_multiplier(const RealField& f, const SpectralMultiplier& m) {
  std::vector<Complex> lifted(f.values.begin(), f.values.end());
  ComplexField result =
      apply_multiplier(ComplexField(f.grid, std::move(lifted)), m);
  const double scale = std::max(1.0, max_abs(result.values));
  std::vector<double> real_part(result.values.size());
  for (size_t j = 0; j < result.values.size(); ++j) {
    if (std::abs(result.values[j].imag()) > 1e-12 * scale) {
      throw std::invalid_argument(
          "apply_multiplier: multiplier '" + m.label +
          "' does not preserve reality of the field");
    }
    real_part[j] = result.values[j].real();
  }
  return RealField(f.grid, std::move(real_part));
}

SpectralMultiplier identity_multiplier() {
  return {[](double) { return Complex(1.0, 0.0); }, "identity"};
}

SpectralMultiplier laplacian_multiplier() {
  return {[](double k) { return Complex(-k * k, 0.0); }, "laplacian"};
}

SpectralMultiplier derivative_multiplier(const GridSpec& grid) {
  // Taken from wavenumbers(grid) so the comparison below matches the exact
  // double handed to the evaluator.
  const double nyquist = wavenumbers(grid)[static_cast<size_t>(grid.n / 2)];
  return {[nyquist](double k) {
            if (k == nyquist) return Complex(0.0, 0.0);
            return Complex(0.0, k);
          },
          "d/dx"};
}

SpectralMultiplier sqrt_kg_multiplier(double mu) {
  if (!(mu >= 0.0)) {
    throw std::invalid_argument("sqrt_kg_multiplier: mu must be >= 0");
  }
  return {[mu](double k) { return Complex(std::hypot(mu, k), 0.0); },
          "sqrt(mu^2-laplacian)"};
}

SpectralMultiplier sqrt_kg_multiplier(const PhysicalConstants& constants) {
  return sqrt_kg_multiplier(constants.mu);
}

Complex inner_product(const ComplexField& f, const ComplexField& g) {
  require_same_grid(f.grid, g.grid, "inner_product");
  Complex acc(0.0, 0.0);
  for (size_t j = 0; j < f.values.size(); ++j) {
    acc += std::conj(f.values[j]) * g.values[j];
  }
  return acc * f.grid.spacing;
}

double norm(const ComplexField& f) {
  double acc = 0.0;
  for (const auto& v : f.values) acc += std::norm(v);
  return std::sqrt(acc * f.grid.spacing);
}

UncertaintyResult uncertainty_product(const ComplexField& f,
                                      const PhysicalConstants& constants) {
  const double nrm = norm(f);
  if (std::abs(nrm - 1.0) > 1e-10) {
    throw std::invalid_argument(
        "uncertainty_product: state must be normalized to 1 within 1e-10");
  }

  const int n = f.grid.n;
  const double L = f.grid.length;
  const double dx = f.grid.spacing;

  std::vector<double> density(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    density[static_cast<size_t>(j)] =
        std::norm(f.values[static_cast<size_t>(j)]) * dx;
  }

  // Circular mean of the probability mass, then an integer-site roll that
  // moves it to L/2. Site rolls leave the momentum distribution untouched.
  const double two_pi = 2.0 * std::numbers::pi;
  double cs = 0.0, sn = 0.0;
  for (int j = 0; j < n; ++j) {
    const double theta = two_pi * j / n;
    cs += density[static_cast<size_t>(j)] * std::cos(theta);
    sn += density[static_cast<size_t>(j)] * std::sin(theta);
  }
  double angle = std::atan2(sn, cs);
  if (angle < 0.0) angle += two_pi;
  const double center = angle / two_pi * L;
  const int shift = static_cast<int>(std::lround((L / 2.0 - center) / dx));

  std::vector<double> rolled(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    const int jr = ((j + shift) % n + n) % n;
    rolled[static_cast<size_t>(jr)] = density[static_cast<size_t>(j)];
  }

  double boundary_mass = 0.0;
  for (int j = 0; j < n; ++j) {
    const double x = j * dx;
    if (x < L / 8.0 || x >= 7.0 * L / 8.0) {
      boundary_mass += rolled[static_cast<size_t>(j)];
    }
  }
  if (boundary_mass > 1e-6) {
    throw std::invalid_argument(
        "uncertainty_product: state is not localized away from the periodic "
        "boundary (recentered boundary mass exceeds 1e-6)");
  }

  double mean_x = 0.0;
  for (int j = 0; j < n; ++j) mean_x += rolled[static_cast<size_t>(j)] * j * dx;
  double var_x = 0.0;
  for (int j = 0; j < n; ++j) {
    const double d = j * dx - mean_x;
    var_x += rolled[static_cast<size_t>(j)] * d * d;
  }

  const ComplexField spectrum = forward_transform(f);
  const std::vector<double> k = wavenumbers(f.grid);
  double weight = 0.0, mean_k = 0.0;
  for (size_t j = 0; j < spectrum.values.size(); ++j) {
    const double w = std::norm(spectrum.values[j]);
    weight += w;
    mean_k += w * k[j];
  }
  mean_k /= weight;
  double var_k = 0.0;
  for (size_t j = 0; j < spectrum.values.size(); ++j) {
    const double d = k[j] - mean_k;
    var_k += std::norm(spectrum.values[j]) * d * d;
  }
  var_k /= weight;

  return {std::sqrt(var_x), constants.hbar * std::sqrt(var_k),
          constants.hbar / 2.0};
}

}  // namespace reparamqm
