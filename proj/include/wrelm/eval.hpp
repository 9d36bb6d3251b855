#pragma once

#include "wrelm/adapter.hpp"
#include "wrelm/dataset.hpp"

#include <string>
#include <vector>

namespace wrelm {

struct EvalOptions {
  Index ring_capacity = 8;
  bool adaptive = true;  // false freezes beta1 = beta0 (static baseline)
  OnlineWeights w1{};
  // Steady-state RMSE: spans where the set point is unchanged for at least
  // steady_min_run rows, discarding the first steady_skip rows of each span.
  Index steady_min_run = 50;
  Index steady_skip = 10;
};

enum class EventKind : std::uint8_t { prediction, target_read };

struct EvalEvent {
  EventKind kind;
  Index step;
  std::uint64_t seq;  // monotone event counter
};

struct TraceRow {
  Index step = 0;
  double predicted = 0.0;
  double actual = 0.0;
  double error = 0.0;       // predicted - actual
  double beta1_norm = 0.0;
  double adapt_us = 0.0;    // per-step compute time (push + adapt + predict)
};

struct EvalReport {
  Index rows = 0;
  Index valid_rows = 0;
  Index outliers = 0;  // rows with valid = false
  double r2 = 0.0;
  double rmse = 0.0;
  double steady_rmse = 0.0;
  Index steady_rows = 0;
  double latency_median_us = 0.0;
  double latency_p99_us = 0.0;
  Index causality_violations = 0;
};

struct EvalResult {
  EvalReport report;
  std::vector<TraceRow> trace;    // valid rows only, in step order
  std::vector<EvalEvent> events;  // full prediction / target-read log
};

// Strictly causal replay: for each row, the prediction is computed and
// logged before the row's target is read; the (features, target) pair is
// pushed only afterwards, so a prediction can only ever use pairs from
// earlier rows. Rows flagged invalid are excluded from predictions, ring
// updates, and metric sums.
EvalResult evaluate_stream(const OfflineModel& model, const SeriesDataset& ds,
                           const EvalOptions& opts);

// Number of steps whose prediction was not logged before the step's
// target read (zero for any log produced by evaluate_stream).
Index audit_causality(const std::vector<EvalEvent>& events);

// R^2 and RMSE of paired predictions/actuals; SS_tot uses the actuals' mean.
struct FitMetrics {
  double r2 = 0.0;
  double rmse = 0.0;
};
FitMetrics compute_metrics(const std::vector<double>& predicted,
                           const std::vector<double>& actual);

// Trace CSV schema: step,predicted,actual,error,beta1_norm,adapt_us.
void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace);
std::vector<TraceRow> read_trace_csv(const std::string& path);

}  // namespace wrelm
