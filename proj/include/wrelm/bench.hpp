#pragma once

#include "wrelm/adapter.hpp"

#include <cstdint>

namespace wrelm {

struct BenchOptions {
  Index ring_capacity = 8;
  Index iterations = 100000;
  std::uint64_t seed = 99;  // for the synthetic input pool
};

struct PhaseStats {
  double median_us = 0.0;
  double p99_us = 0.0;
  double mean_us = 0.0;
};

struct BenchReport {
  Index iterations = 0;
  PhaseStats push;
  PhaseStats adapt;
  PhaseStats predict;
  PhaseStats total;               // wall time around all three phases
  double phase_sum_median_us = 0.0;
  double phase_fraction = 0.0;    // sum-of-phase medians / total median
};

// Repeated push + adapt + predict against `model` with a pre-generated
// pool of random raw inputs; per-phase and total latency percentiles.
BenchReport run_bench(const OfflineModel& model, const BenchOptions& opts);

}  // namespace wrelm
