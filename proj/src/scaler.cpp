#include "wrelm/scaler.hpp"

#include <algorithm>
#include <cmath>

namespace wrelm {

double percentile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw ValidationError("percentile of an empty sample");
  if (p < 0.0 || p > 100.0) throw ValidationError("percentile level outside [0, 100]");
  const auto n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = static_cast<double>(n - 1) * p / 100.0;
  const auto lo = static_cast<size_t>(h);
  if (lo + 1 >= n) return sorted[n - 1];
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

Scaler::Scaler(Vector lo, Vector hi, double p_low, double p_high)
    : lo_(std::move(lo)), hi_(std::move(hi)), p_low_(p_low), p_high_(p_high) {
  if (lo_.size() != hi_.size()) throw ValidationError("scaler bounds size mismatch");
  for (Index c = 0; c < lo_.size(); ++c)
    if (!(lo_[c] < hi_[c]))
      throw DegenerateColumnError(c, "scaler column " + std::to_string(c) +
                                         " has no spread between bounds");
}

Scaler Scaler::fit(const Matrix& data, double p_low, double p_high) {
  if (data.rows() < 2) throw ValidationError("scaler fit needs at least two rows");
  if (data.cols() < 1) throw ValidationError("scaler fit needs at least one column");
  if (!(p_low >= 0.0 && p_low < p_high && p_high <= 100.0))
    throw ValidationError("percentile levels must satisfy 0 <= p_low < p_high <= 100");
  if (!data.allFinite()) throw ValidationError("scaler fit input contains non-finite values");

  Scaler s;
  s.p_low_ = p_low;
  s.p_high_ = p_high;
  s.lo_.resize(data.cols());
  s.hi_.resize(data.cols());
  std::vector<double> column(static_cast<size_t>(data.rows()));
  for (Index c = 0; c < data.cols(); ++c) {
    for (Index r = 0; r < data.rows(); ++r) column[static_cast<size_t>(r)] = data(r, c);
    std::sort(column.begin(), column.end());
    const double lo = percentile_sorted(column, p_low);
    const double hi = percentile_sorted(column, p_high);
    if (!(lo < hi))
      throw DegenerateColumnError(c, "column " + std::to_string(c) +
                                         " is degenerate: saturation bounds coincide");
    s.lo_[c] = lo;
    s.hi_[c] = hi;
  }
  return s;
}

double Scaler::scale(Index column, double v) const {
  const double s = (v - lo_[column]) / (hi_[column] - lo_[column]);
  return std::clamp(s, 0.0, 1.0);
}

double Scaler::unscale(Index column, double s) const {
  return lo_[column] + s * (hi_[column] - lo_[column]);
}

Vector Scaler::apply(const Eigen::Ref<const Vector>& row) const {
  if (row.size() != arity())
    throw ValidationError("scaler arity mismatch: expected " + std::to_string(arity()) +
                          " values, got " + std::to_string(row.size()));
  Vector out(arity());
  for (Index c = 0; c < arity(); ++c) out[c] = scale(c, row[c]);
  return out;
}

Matrix Scaler::apply_rows(const Eigen::Ref<const Matrix>& rows) const {
  if (rows.cols() != arity())
    throw ValidationError("scaler arity mismatch: expected " + std::to_string(arity()) +
                          " columns, got " + std::to_string(rows.cols()));
  Matrix out(rows.rows(), rows.cols());
  for (Index r = 0; r < rows.rows(); ++r)
    for (Index c = 0; c < rows.cols(); ++c) out(r, c) = scale(c, rows(r, c));
  return out;
}

}  // namespace wrelm
