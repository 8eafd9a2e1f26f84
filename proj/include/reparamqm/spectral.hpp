#pragma once

#include <functional>
#include <string>
#include <vector>

#include "reparamqm/field.hpp"

namespace reparamqm {

/// Grid wavenumbers k_j = 2*pi*j/L for j in {-n/2, ..., n/2-1}, returned in
/// the standard transform ordering (j = 0..n/2-1 first, then the negative j).
std::vector<double> wavenumbers(const GridSpec& grid);

/// Unitary discrete Fourier transform: both directions carry 1/sqrt(n), so
/// inverse(forward(f)) == f and Parseval holds with no extra factor.
ComplexField forward_transform(const ComplexField& f);
ComplexField inverse_transform(const ComplexField& coeffs);

/// An operator diagonal in the Fourier basis: f |-> IFFT(m(k) * FFT(f)).
struct SpectralMultiplier {
  std::function<Complex(double)> evaluator;
  std::string label;
};

ComplexField apply_multiplier(const ComplexField& f,
                              const SpectralMultiplier& m);

/// Real-field overload for real, even multipliers. The imaginary residue of
/// the round trip must stay below 1e-12 relative to the field scale; it is
/// checked and then truncated.
RealField apply_multiplier(const RealField& f, const SpectralMultiplier& m);

SpectralMultiplier identity_multiplier();
SpectralMultiplier laplacian_multiplier();  // k |-> -k^2

/// k |-> i*k with the Nyquist mode (j = -n/2) zeroed, which keeps the
/// discrete d/dx hermitian on even-n grids.
SpectralMultiplier derivative_multiplier(const GridSpec& grid);

/// k |-> sqrt(mu^2 + k^2), the symbol of sqrt(mu^2 - Laplacian).
SpectralMultiplier sqrt_kg_multiplier(double mu);
SpectralMultiplier sqrt_kg_multiplier(const PhysicalConstants& constants);

/// sum conj(f) * g * dx over the grid. Throws on grid mismatch.
Complex inner_product(const ComplexField& f, const ComplexField& g);
double norm(const ComplexField& f);

struct UncertaintyResult {
  double dx;     // position standard deviation
  double dp;     // momentum standard deviation
  double bound;  // hbar / 2
};

/// Position/momentum spread of a normalized, localized state. Position
/// variance is evaluated in the flat chart [0, L) after shifting the state's
/// circular mean to L/2; states carrying more than 1e-6 of their mass within
/// L/8 of the boundary are rejected, as is any state whose norm deviates from
/// 1 by more than 1e-10.
UncertaintyResult uncertainty_product(const ComplexField& f,
                                      const PhysicalConstants& constants);

}  // namespace reparamqm
