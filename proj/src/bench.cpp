#include "wrelm/bench.hpp"

#include "wrelm/rng.hpp"
#include "wrelm/scaler.hpp"

#include <algorithm>
#include <chrono>

namespace wrelm {

namespace {

PhaseStats stats_of(std::vector<double> samples) {
  PhaseStats s;
  if (samples.empty()) return s;
  double sum = 0.0;
  for (const double v : samples) sum += v;
  s.mean_us = sum / static_cast<double>(samples.size());
  std::sort(samples.begin(), samples.end());
  s.median_us = percentile_sorted(samples, 50.0);
  s.p99_us = percentile_sorted(samples, 99.0);
  return s;
}

}  // namespace

BenchReport run_bench(const OfflineModel& model, const BenchOptions& opts) {
  if (opts.iterations < 1) throw ValidationError("bench needs at least one iteration");

  using clock = std::chrono::steady_clock;
  const auto us = [](clock::time_point a, clock::time_point b) {
    return std::chrono::duration<double, std::micro>(b - a).count();
  };

  // Pre-generated raw input pool inside the scaler bounds so no time is
  // spent on input synthesis inside the measured loop.
  const Index pool_size = 1024;
  SplitMix64 rng(opts.seed);
  std::vector<Vector> xs(static_cast<size_t>(pool_size));
  std::vector<double> ts(static_cast<size_t>(pool_size));
  for (Index i = 0; i < pool_size; ++i) {
    Vector x(model.z());
    for (Index c = 0; c < model.z(); ++c) {
      const double lo = model.scaler.lo()[c];
      const double hi = model.scaler.hi()[c];
      x[c] = rng.next_uniform(lo, hi);
    }
    xs[static_cast<size_t>(i)] = std::move(x);
    const double tlo = model.scaler.lo()[model.z()];
    const double thi = model.scaler.hi()[model.z()];
    ts[static_cast<size_t>(i)] = rng.next_uniform(tlo, thi);
  }

  RingBuffer ring(opts.ring_capacity);
  const OnlineWeights w1;

  const auto n = static_cast<size_t>(opts.iterations);
  std::vector<double> push_us(n), adapt_us(n), predict_us(n), total_us(n);
  volatile double sink = 0.0;  // keep the prediction live

  for (size_t i = 0; i < n; ++i) {
    const auto& x_obs = xs[i % xs.size()];
    const double t_obs = ts[i % ts.size()];
    const auto& x_next = xs[(i + 1) % xs.size()];

    const auto t0 = clock::now();
    ring.push_pair(model, x_obs, t_obs);
    const auto t1 = clock::now();
    const AdaptedState state = adapt(model, ring, w1);
    const auto t2 = clock::now();
    sink = predict(model, state, x_next);
    const auto t3 = clock::now();

    push_us[i] = us(t0, t1);
    adapt_us[i] = us(t1, t2);
    predict_us[i] = us(t2, t3);
    total_us[i] = us(t0, t3);
  }
  (void)sink;

  BenchReport report;
  report.iterations = opts.iterations;
  report.push = stats_of(std::move(push_us));
  report.adapt = stats_of(std::move(adapt_us));
  report.predict = stats_of(std::move(predict_us));
  report.total = stats_of(std::move(total_us));
  report.phase_sum_median_us =
      report.push.median_us + report.adapt.median_us + report.predict.median_us;
  report.phase_fraction =
      report.total.median_us > 0.0 ? report.phase_sum_median_us / report.total.median_us : 0.0;
  return report;
}

}  // namespace wrelm
