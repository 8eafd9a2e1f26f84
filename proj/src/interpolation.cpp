#include "reparamqm/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace reparamqm {

namespace {

// Derivative at xq of the cubic through four nodes, via Lagrange basis.
double four_point_slope(const double* x, const double* y, double xq) {
  double acc = 0.0;
  for (int i = 0; i < 4; ++i) {
    double num = 0.0;
    for (int j = 0; j < 4; ++j) {
      if (j == i) continue;
      double term = 1.0;
      for (int l = 0; l < 4; ++l) {
        if (l == i || l == j) continue;
        term *= xq - x[l];
      }
      num += term;
    }
    double den = 1.0;
    for (int j = 0; j < 4; ++j) {
      if (j == i) continue;
      den *= x[i] - x[j];
    }
    acc += y[i] * num / den;
  }
  return acc;
}

}  // namespace

CubicInterpolant::CubicInterpolant(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const size_t n = x_.size();
  if (n < 2 || y_.size() != n) {
    throw std::invalid_argument(
        "CubicInterpolant: need >= 2 nodes and matching value count");
  }
  for (size_t i = 1; i < n; ++i) {
    if (!(x_[i] > x_[i - 1])) {
      throw std::invalid_argument(
          "CubicInterpolant: abscissas must be strictly increasing");
    }
  }

  slope_.resize(n);
  if (n == 2) {
    const double s = (y_[1] - y_[0]) / (x_[1] - x_[0]);
    slope_[0] = slope_[1] = s;
    return;
  }
  if (n == 3) {
    for (size_t i = 0; i < 3; ++i) {
      // Quadratic fit derivative.
      const double s01 = (y_[1] - y_[0]) / (x_[1] - x_[0]);
      const double s12 = (y_[2] - y_[1]) / (x_[2] - x_[1]);
      const double xq = x_[i];
      slope_[i] = s01 + (s12 - s01) * (2.0 * xq - x_[0] - x_[1]) / (x_[2] - x_[0]);
    }
  } else {
    for (size_t i = 0; i < n; ++i) {
      // Four-point window [i-1, i+2], clamped to the node range.
      const long first = std::clamp(static_cast<long>(i) - 1, 0L,
                                    static_cast<long>(n) - 4);
      slope_[i] = four_point_slope(&x_[static_cast<size_t>(first)],
                                   &y_[static_cast<size_t>(first)], x_[i]);
    }
  }

  // On monotone stretches limit into the de Boor-Swartz box, which keeps the
  // interpolant monotone there. Near data extrema (a secant sign change or a
  // vanishing secant within two intervals) the box would clamp accurate
  // slopes to O(h) error, so those nodes keep their slopes under a loose cap.
  std::vector<double> secant(n - 1);
  for (size_t i = 0; i + 1 < n; ++i) {
    secant[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
  }
  for (size_t i = 0; i < n; ++i) {
    const size_t win_lo = i >= 2 ? i - 2 : 0;
    const size_t win_hi = std::min(i + 1, n - 2);
    bool positive = true, negative = true;
    for (size_t w = win_lo; w <= win_hi; ++w) {
      positive = positive && secant[w] > 0.0;
      negative = negative && secant[w] < 0.0;
    }
    const double sl = i > 0 ? secant[i - 1] : secant[i];
    const double sr = i + 1 < n ? secant[i] : secant[i - 1];
    if (positive || negative) {
      const double sign = positive ? 1.0 : -1.0;
      if (slope_[i] * sign < 0.0) {
        slope_[i] = 0.0;
      } else {
        slope_[i] =
            sign * std::min(std::abs(slope_[i]),
                            3.0 * std::min(std::abs(sl), std::abs(sr)));
      }
    } else if (sl == 0.0 && sr == 0.0) {
      slope_[i] = 0.0;
    } else {
      const double cap = 3.0 * std::max(std::abs(sl), std::abs(sr));
      slope_[i] = std::clamp(slope_[i], -cap, cap);
    }
  }
}

double CubicInterpolant::operator()(double xq) const {
  const double span = x_.back() - x_.front();
  if (xq < x_.front() - 1e-12 * span || xq > x_.back() + 1e-12 * span) {
    throw std::out_of_range("CubicInterpolant: query outside node range");
  }
  xq = std::clamp(xq, x_.front(), x_.back());

  const auto it = std::upper_bound(x_.begin(), x_.end(), xq);
  size_t i = it == x_.begin() ? 0 : static_cast<size_t>(it - x_.begin()) - 1;
  if (i + 1 >= x_.size()) i = x_.size() - 2;

  const double h = x_[i + 1] - x_[i];
  const double s = (xq - x_[i]) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
  const double h10 = s3 - 2.0 * s2 + s;
  const double h01 = -2.0 * s3 + 3.0 * s2;
  const double h11 = s3 - s2;
  return h00 * y_[i] + h10 * h * slope_[i] + h01 * y_[i + 1] +
         h11 * h * slope_[i + 1];
}

}  // namespace reparamqm
