#include "reparamqm/field.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace reparamqm {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

template <typename T>
bool all_finite(const std::vector<T>& values) {
  for (const auto& v : values) {
    if constexpr (std::is_same_v<T, Complex>) {
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    } else {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

}  // namespace

GridSpec::GridSpec(int n_, double length_) : n(n_), length(length_) {
  if (n < 8 || !is_power_of_two(n)) {
    throw std::invalid_argument("GridSpec: n must be a power of two >= 8, got " +
                                std::to_string(n_));
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw std::invalid_argument("GridSpec: length must be positive and finite");
  }
  spacing = length / n;
}

PhysicalConstants::PhysicalConstants(double hbar_, double c_, double mass_)
    : hbar(hbar_), c(c_), mass(mass_) {
  if (!(hbar > 0.0) || !(c > 0.0) || !(mass > 0.0)) {
    throw std::invalid_argument(
        "PhysicalConstants: hbar, c and mass must all be positive");
  }
  mu = mass * c / hbar;
}

ComplexField::ComplexField(GridSpec grid_, std::vector<Complex> values_)
    : grid(grid_), values(std::move(values_)) {
  if (values.size() != static_cast<size_t>(grid.n)) {
    throw std::invalid_argument("ComplexField: values.size() != grid.n");
  }
  if (!all_finite(values)) {
    throw std::invalid_argument("ComplexField: non-finite amplitude");
  }
}

ComplexField ComplexField::zero(const GridSpec& grid) {
  return ComplexField(grid, std::vector<Complex>(static_cast<size_t>(grid.n)));
}

RealField::RealField(GridSpec grid_, std::vector<double> values_)
    : grid(grid_), values(std::move(values_)) {
  if (values.size() != static_cast<size_t>(grid.n)) {
    throw std::invalid_argument("RealField: values.size() != grid.n");
  }
  if (!all_finite(values)) {
    throw std::invalid_argument("RealField: non-finite sample");
  }
}

RealField RealField::zero(const GridSpec& grid) {
  return RealField(grid, std::vector<double>(static_cast<size_t>(grid.n)));
}

void require_same_grid(const GridSpec& a, const GridSpec& b,
                       const char* context) {
  if (a != b) {
    throw std::invalid_argument(std::string(context) +
                                ": fields live on different grids");
  }
}

}  // namespace reparamqm
