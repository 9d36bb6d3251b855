#pragma once

#include "wrelm/types.hpp"

#include <vector>

namespace wrelm {

// Percentile of a sorted sample, linear interpolation between closest
// ranks: h = (n-1) p/100, result = v[floor(h)] + frac(h) (v[floor(h)+1] -
// v[floor(h)]). p in [0, 100].
double percentile_sorted(const std::vector<double>& sorted, double p);

// Per-column percentile saturation bounds with a linear [0, 1] mapping.
// Values below the low percentile or above the high percentile are
// saturated at the respective bound, then normalized between the bounds.
class Scaler {
 public:
  Scaler() = default;

  // Restore from stored bounds (model deserialization).
  Scaler(Vector lo, Vector hi, double p_low, double p_high);

  // Fit bounds on the columns of `data` (one column per variable).
  // Requires at least two rows, all entries finite. Throws
  // DegenerateColumnError if a column's bounds collapse to a point.
  static Scaler fit(const Matrix& data, double p_low = 0.1, double p_high = 99.9);

  Index arity() const { return lo_.size(); }
  double p_low() const { return p_low_; }
  double p_high() const { return p_high_; }
  const Vector& lo() const { return lo_; }
  const Vector& hi() const { return hi_; }

  // clamp((v - lo) / (hi - lo), 0, 1) for one column.
  double scale(Index column, double v) const;
  // lo + s (hi - lo); inverse of scale for values inside [lo, hi].
  double unscale(Index column, double s) const;

  // Scale a full-arity row. Throws ValidationError on arity mismatch.
  Vector apply(const Eigen::Ref<const Vector>& row) const;
  // Row-wise apply over a matrix with arity() columns.
  Matrix apply_rows(const Eigen::Ref<const Matrix>& rows) const;

 private:
  Vector lo_;
  Vector hi_;
  double p_low_ = 0.1;
  double p_high_ = 99.9;
};

}  // namespace wrelm
