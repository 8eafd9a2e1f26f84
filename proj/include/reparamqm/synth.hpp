#pragma once

#include "reparamqm/field.hpp"
#include "reparamqm/rng.hpp"

namespace reparamqm {

/// Normalized Gaussian packet
///   psi(x) ~ exp(-(x-center)^2/(4 width^2) + i k0 (x-center) + i chirp (x-center)^2),
/// normalized so that sum |psi|^2 dx = 1.
ComplexField gaussian_packet(const GridSpec& grid, double center, double width,
                             double k0 = 0.0, double chirp = 0.0);

/// Normalized plane wave exp(i k_mode x)/sqrt(L) for a grid mode index
/// (mode may be negative; |mode| <= n/2).
ComplexField plane_wave(const GridSpec& grid, int mode);

/// Real band-limited field with random coefficients on modes |j| <= max_mode
/// (conjugate-symmetric spectrum, zero Nyquist).
RealField random_band_limited(const GridSpec& grid, int max_mode,
                              SplitMix64& rng);

/// Complex band-limited field with random coefficients on |j| <= max_mode.
ComplexField random_band_limited_complex(const GridSpec& grid, int max_mode,
                                         SplitMix64& rng);

}  // namespace reparamqm
