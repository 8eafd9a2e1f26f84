#pragma once

#include <vector>

namespace reparamqm {

/// Shape-preserving cubic Hermite interpolant on strictly increasing nodes.
/// Node slopes come from local cubic fits (third-order accurate); on stretches
/// where the data is monotone they are limited into the de Boor-Swartz box
/// [0, 3*secant], which keeps the interpolant monotone there. At data
/// extrema the accurate slopes are kept, so smooth turning points are not
/// flattened to O(h^2).
class CubicInterpolant {
 public:
  CubicInterpolant(std::vector<double> x, std::vector<double> y);

  /// Evaluates at xq, which must lie within the node range (a relative slack
  /// of 1e-12 is allowed at the ends).
  double operator()(double xq) const;

  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }

 private:
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> slope_;
};

}  // namespace reparamqm
