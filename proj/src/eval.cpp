#include "wrelm/eval.hpp"

#include "wrelm/scaler.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace wrelm {

namespace {

double percentile_of(std::vector<double> values, double p) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  return percentile_sorted(values, p);
}

}  // namespace

FitMetrics compute_metrics(const std::vector<double>& predicted,
                           const std::vector<double>& actual) {
  if (predicted.size() != actual.size())
    throw ValidationError("metric inputs differ in length");
  FitMetrics m;
  if (actual.empty()) return m;

  double mean = 0.0;
  for (const double a : actual) mean += a;
  mean /= static_cast<double>(actual.size());

  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (size_t i = 0; i < actual.size(); ++i) {
    const double e = predicted[i] - actual[i];
    ss_res += e * e;
    const double d = actual[i] - mean;
    ss_tot += d * d;
  }
  m.rmse = std::sqrt(ss_res / static_cast<double>(actual.size()));
  if (ss_tot > 0.0)
    m.r2 = 1.0 - ss_res / ss_tot;
  else
    m.r2 = ss_res == 0.0 ? 1.0 : -std::numeric_limits<double>::infinity();
  return m;
}

EvalResult evaluate_stream(const OfflineModel& model, const SeriesDataset& ds,
                           const EvalOptions& opts) {
  if (ds.z() != model.z())
    throw ValidationError("dataset has " + std::to_string(ds.z()) +
                          " feature columns, model expects " + std::to_string(model.z()));

  using clock = std::chrono::steady_clock;
  EvalResult result;
  result.trace.reserve(static_cast<size_t>(ds.size()));
  result.events.reserve(2 * static_cast<size_t>(ds.size()));

  RingBuffer ring(opts.ring_capacity);
  AdaptedState frozen{model.beta0, 0, &model};

  std::uint64_t seq = 0;
  std::vector<double> predictions, actuals, latencies;
  predictions.reserve(static_cast<size_t>(ds.size()));
  actuals.reserve(static_cast<size_t>(ds.size()));
  latencies.reserve(static_cast<size_t>(ds.size()));

  // predicted value per record position; NaN where no prediction was made
  std::vector<double> by_row(static_cast<size_t>(ds.size()),
                             std::numeric_limits<double>::quiet_NaN());

  for (Index i = 0; i < ds.size(); ++i) {
    const SeriesRecord& rec = ds[i];
    if (!rec.valid) {
      ++result.report.outliers;
      result.events.push_back({EventKind::target_read, rec.step, seq++});
      continue;
    }

    const auto t0 = clock::now();
    AdaptedState state = opts.adaptive ? adapt(model, ring, opts.w1) : frozen;
    const double prediction = predict(model, state, rec.features);
    const auto t1 = clock::now();
    result.events.push_back({EventKind::prediction, rec.step, seq++});

    // Only now is the step's outcome consumed.
    const double actual = rec.target;
    result.events.push_back({EventKind::target_read, rec.step, seq++});

    const auto t2 = clock::now();
    if (opts.adaptive) ring.push_pair(model, rec.features, actual);
    const auto t3 = clock::now();

    const double compute_us =
        std::chrono::duration<double, std::micro>((t1 - t0) + (t3 - t2)).count();
    latencies.push_back(compute_us);

    TraceRow row;
    row.step = rec.step;
    row.predicted = prediction;
    row.actual = actual;
    row.error = prediction - actual;
    row.beta1_norm = state.beta1.norm();
    row.adapt_us = compute_us;
    result.trace.push_back(row);

    predictions.push_back(prediction);
    actuals.push_back(actual);
    by_row[static_cast<size_t>(i)] = prediction;
  }

  result.report.rows = ds.size();
  result.report.valid_rows = static_cast<Index>(predictions.size());
  const FitMetrics fit = compute_metrics(predictions, actuals);
  result.report.r2 = fit.r2;
  result.report.rmse = fit.rmse;
  result.report.latency_median_us = percentile_of(latencies, 50.0);
  result.report.latency_p99_us = percentile_of(latencies, 99.0);
  result.report.causality_violations = audit_causality(result.events);

  // Steady-state spans: runs of one set point at least steady_min_run rows
  // long, skipping each run's first steady_skip rows.
  double ss_sum = 0.0;
  Index ss_count = 0;
  Index run_start = 0;
  for (Index i = 0; i <= ds.size(); ++i) {
    const bool boundary = i == ds.size() || (i > 0 && ds[i].set_point != ds[i - 1].set_point);
    if (!boundary) continue;
    const Index run_len = i - run_start;
    if (run_len >= opts.steady_min_run) {
      for (Index k = run_start + opts.steady_skip; k < i; ++k) {
        const double pred = by_row[static_cast<size_t>(k)];
        if (std::isnan(pred)) continue;  // invalid row
        const double e = pred - ds[k].target;
        ss_sum += e * e;
        ++ss_count;
      }
    }
    run_start = i;
  }
  result.report.steady_rows = ss_count;
  result.report.steady_rmse = ss_count > 0 ? std::sqrt(ss_sum / static_cast<double>(ss_count)) : 0.0;
  return result;
}

Index audit_causality(const std::vector<EvalEvent>& events) {
  std::map<Index, std::uint64_t> prediction_seq;
  std::map<Index, std::uint64_t> read_seq;
  std::uint64_t last_seq = 0;
  Index violations = 0;
  bool first = true;
  for (const auto& e : events) {
    if (!first && e.seq <= last_seq) ++violations;  // log must be monotone
    last_seq = e.seq;
    first = false;
    auto& bucket = e.kind == EventKind::prediction ? prediction_seq : read_seq;
    bucket.emplace(e.step, e.seq);
  }
  for (const auto& [step, pseq] : prediction_seq) {
    const auto it = read_seq.find(step);
    if (it == read_seq.end() || pseq >= it->second) ++violations;
  }
  return violations;
}

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "step,predicted,actual,error,beta1_norm,adapt_us\n";
  char buf[160];
  for (const auto& r : trace) {
    std::snprintf(buf, sizeof(buf), "%lld,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  static_cast<long long>(r.step), r.predicted, r.actual, r.error,
                  r.beta1_norm, r.adapt_us);
    out << buf;
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::vector<TraceRow> read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::string line;
  if (!std::getline(in, line) || line != "step,predicted,actual,error,beta1_norm,adapt_us")
    throw ValidationError(path + ":1: unexpected trace header");
  std::vector<TraceRow> rows;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    TraceRow r;
    long long step = 0;
    if (std::sscanf(line.c_str(), "%lld,%lg,%lg,%lg,%lg,%lg", &step, &r.predicted,
                    &r.actual, &r.error, &r.beta1_norm, &r.adapt_us) != 6)
      throw ValidationError(path + ":" + std::to_string(line_no) + ": malformed trace row");
    r.step = static_cast<Index>(step);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace wrelm
