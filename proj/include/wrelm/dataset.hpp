#pragma once

#include "wrelm/types.hpp"

#include <string>
#include <vector>

namespace wrelm {

struct SeriesRecord {
  Index step = 0;
  int set_point = 0;
  Vector features;  // length z
  double target = 0.0;
  bool valid = true;
};

// Ordered one-step-ahead records: features observed at a step paired with
// the target observed one step later. Step indices are strictly increasing.
class SeriesDataset {
 public:
  explicit SeriesDataset(Index z) : z_(z) {}

  Index z() const { return z_; }
  Index size() const { return static_cast<Index>(records_.size()); }
  bool empty() const { return records_.empty(); }

  void append(SeriesRecord rec);

  const SeriesRecord& operator[](Index i) const { return records_[static_cast<size_t>(i)]; }
  const std::vector<SeriesRecord>& records() const { return records_; }

  Index count_valid() const;

  // Stacked features / targets of the valid rows, in order.
  Matrix valid_features() const;
  Vector valid_targets() const;

  // CSV schema: header `step,set_point,feat_0..feat_{z-1},target,valid`,
  // doubles printed with 17 significant digits for lossless round-trip.
  void write_csv(const std::string& path) const;
  static SeriesDataset read_csv(const std::string& path);

 private:
  Index z_;
  std::vector<SeriesRecord> records_;
};

}  // namespace wrelm
