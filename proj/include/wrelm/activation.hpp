#pragma once

#include <cmath>
#include <cstdint>

namespace wrelm {

enum class Activation : std::uint8_t { exact = 0, pade = 1 };

// Logistic neuron activation G(y) = 1 / (1 + exp(y)). Note the sign: G is
// monotonically decreasing, G(0) = 0.5, G(y) + G(-y) = 1.
inline double logistic_exact(double y) { return 1.0 / (1.0 + std::exp(y)); }

// Same logistic with exp replaced by its [3/3] Pade approximant
//   exp(y) ~ (120 + 60y + 12y^2 + y^3) / (120 - 60y + 12y^2 - y^3)
// which collapses to a single rational form
//   G(y) ~ ((120 + 12y^2) - 60y - y^3) / (2 (120 + 12y^2)).
// Exact at y = 0. Accuracy validated on |y| <= 4; the approximant leaves
// (0, 1) beyond |y| ~ 4.64 where the denominator of p(y) changes sign.
inline double logistic_pade(double y) {
  const double y2 = y * y;
  const double c = 120.0 + 12.0 * y2;
  return (c - 60.0 * y - y2 * y) / (2.0 * c);
}

inline double activate(double y, Activation kind) {
  return kind == Activation::exact ? logistic_exact(y) : logistic_pade(y);
}

}  // namespace wrelm
