#pragma once

#include <complex>
#include <vector>

namespace reparamqm {

using Complex = std::complex<double>;

/// Periodic 1-D grid: n equally spaced samples x_j = j*spacing on [0, length).
/// n must be a power of two (>= 8) so the wavenumber set is symmetric and the
/// transform stays fast.
struct GridSpec {
  int n = 0;
  double length = 0.0;
  double spacing = 0.0;  // length / n

  GridSpec(int n_, double length_);

  friend bool operator==(const GridSpec& a, const GridSpec& b) {
    return a.n == b.n && a.length == b.length;
  }
  friend bool operator!=(const GridSpec& a, const GridSpec& b) {
    return !(a == b);
  }
};

/// (hbar, c, m) bundle with the derived inverse length mu = m*c/hbar.
struct PhysicalConstants {
  double hbar = 1.0;
  double c = 1.0;
  double mass = 1.0;
  double mu = 1.0;  // mass * c / hbar, fixed at construction

  PhysicalConstants(double hbar_, double c_, double mass_);
};

/// Complex samples of a wave function on a grid. Amplitudes carry
/// length^(-1/2) so that norm^2 is dimensionless.
struct ComplexField {
  GridSpec grid;
  std::vector<Complex> values;

  ComplexField(GridSpec grid_, std::vector<Complex> values_);

  static ComplexField zero(const GridSpec& grid);
};

/// Real samples (Klein-Gordon potential, external potentials, k-profiles).
struct RealField {
  GridSpec grid;
  std::vector<double> values;

  RealField(GridSpec grid_, std::vector<double> values_);

  static RealField zero(const GridSpec& grid);
};

/// Throws std::invalid_argument when the two grids differ. `context` names the
/// operation for the error message.
void require_same_grid(const GridSpec& a, const GridSpec& b,
                       const char* context);

}  // namespace reparamqm
