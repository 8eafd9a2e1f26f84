#include "reparamqm/synth.hpp"

#include <cmath>
#include <stdexcept>

#include "reparamqm/spectral.hpp"

namespace reparamqm {

ComplexField gaussian_packet(const GridSpec& grid, double center, double width,
                             double k0, double chirp) {
  if (!(width > 0.0)) {
    throw std::invalid_argument("gaussian_packet: width must be positive");
  }
  std::vector<Complex> values(static_cast<size_t>(grid.n));
  for (int j = 0; j < grid.n; ++j) {
    const double u = j * grid.spacing - center;
    const double amp = std::exp(-u * u / (4.0 * width * width));
    const double phase = k0 * u + chirp * u * u;
    values[static_cast<size_t>(j)] = std::polar(amp, phase);
  }
  ComplexField field(grid, std::move(values));
  const double nrm = norm(field);
  if (nrm == 0.0) {
    throw std::invalid_argument("gaussian_packet: vanishing norm");
  }
  for (auto& v : field.values) v /= nrm;
  return field;
}

ComplexField plane_wave(const GridSpec& grid, int mode) {
  if (mode < -grid.n / 2 || mode > grid.n / 2) {
    throw std::invalid_argument("plane_wave: mode index outside grid band");
  }
  const double k = 2.0 * std::numbers::pi * mode / grid.length;
  const double amp = 1.0 / std::sqrt(grid.length);
  std::vector<Complex> values(static_cast<size_t>(grid.n));
  for (int j = 0; j < grid.n; ++j) {
    values[static_cast<size_t>(j)] = std::polar(amp, k * j * grid.spacing);
  }
  return ComplexField(grid, std::move(values));
}

RealField random_band_limited(const GridSpec& grid, int max_mode,
                              SplitMix64& rng) {
  if (max_mode < 1 || max_mode >= grid.n / 2) {
    throw std::invalid_argument(
        "random_band_limited: max_mode must lie in [1, n/2)");
  }
  ComplexField coeffs = ComplexField::zero(grid);
  coeffs.values[0] = Complex(rng.gaussian(), 0.0);
  for (int j = 1; j <= max_mode; ++j) {
    const Complex a(rng.gaussian(), rng.gaussian());
    coeffs.values[static_cast<size_t>(j)] = a;
    coeffs.values[static_cast<size_t>(grid.n - j)] = std::conj(a);
  }
  ComplexField field = inverse_transform(coeffs);
  std::vector<double> values(field.values.size());
  for (size_t j = 0; j < field.values.size(); ++j) {
    values[j] = field.values[j].real();
  }
  return RealField(grid, std::move(values));
}

ComplexField random_band_limited_complex(const GridSpec& grid, int max_mode,
                                         SplitMix64& rng) {
  if (max_mode < 1 || max_mode >= grid.n / 2) {
    throw std::invalid_argument(
        "random_band_limited_complex: max_mode must lie in [1, n/2)");
  }
  ComplexField coeffs = ComplexField::zero(grid);
  coeffs.values[0] = Complex(rng.gaussian(), rng.gaussian());
  for (int j = 1; j <= max_mode; ++j) {
    coeffs.values[static_cast<size_t>(j)] =
        Complex(rng.gaussian(), rng.gaussian());
    coeffs.values[static_cast<size_t>(grid.n - j)] =
        Complex(rng.gaussian(), rng.gaussian());
  }
  return inverse_transform(coeffs);
}

}  // namespace reparamqm
