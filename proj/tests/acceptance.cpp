// Acceptance suite: every release-gating behavior in one binary, one
// PASS/FAIL line per criterion. Exits nonzero if anything fails.

#include "wrelm/bench.hpp"
#include "wrelm/eval.hpp"
#include "wrelm/model_io.hpp"
#include "wrelm/rng.hpp"
#include "wrelm/synthgen.hpp"
#include "wrelm/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace wrelm;
namespace fs = std::filesystem;

int failures = 0;

void criterion(int id, const std::string& name,
               const std::function<std::pair<bool, std::string>()>& body) {
  const auto start = std::chrono::steady_clock::now();
  bool pass = false;
  std::string detail;
  try {
    std::tie(pass, detail) = body();
  } catch (const std::exception& e) {
    pass = false;
    detail = std::string("exception: ") + e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("[%2d] %-34s %s  (%s; %.1fs)\n", id, name.c_str(), pass ? "PASS" : "FAIL",
              detail.c_str(), secs);
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof(buf), f, args);
  va_end(args);
  return buf;
}

Vector random_row(SplitMix64& rng, Index z) {
  Vector x(z);
  for (Index c = 0; c < z; ++c) x[c] = rng.next_unit();
  return x;
}

SeriesDataset uniform_dataset(Index n, Index z, std::uint64_t seed) {
  SplitMix64 rng(seed);
  SeriesDataset ds(z);
  for (Index i = 0; i < n; ++i) {
    SeriesRecord rec;
    rec.step = i;
    rec.features = random_row(rng, z);
    rec.target = rng.next_unit();
    ds.append(std::move(rec));
  }
  return ds;
}

double rel_inf(const Vector& got, const Vector& want) {
  return (got - want).cwiseAbs().maxCoeff() /
         std::max(want.cwiseAbs().maxCoeff(), 1e-30);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(WRELM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  return WEXITSTATUS(std::system(cmd.c_str()));
}

// The substitute fit experiment: offline coverage of the stable band only,
// online evaluation across the full bifurcation range.
struct FitExperiment {
  SeriesDataset train_stream;
  SeriesDataset eval_stream;
  OfflineModel model;

  FitExperiment() : train_stream(0), eval_stream(0) {
    GenConfig train_cfg;
    train_cfg.seed = 101;
    train_cfg.n_steps = 20000;
    train_cfg.mu_min = 2.8;
    train_cfg.mu_max = 3.4;           // stable and period-2 regimes only
    train_cfg.state_sigma = 0.08;     // state noise widens feature coverage
    train_stream = generate(train_cfg);

    GenConfig eval_cfg;
    eval_cfg.seed = 202;
    eval_cfg.n_steps = 25000;
    eval_cfg.mu_min = 2.8;
    eval_cfg.mu_max = 3.9;            // through period-4 into chaos
    eval_stream = generate(eval_cfg);

    model = train_offline(train_stream, TrainConfig{});  // paper-style defaults
  }
};

}  // namespace

int main() {
  std::printf("acceptance suite\n");

  criterion(1, "stacked-oracle equivalence", [] {
    VerifyOptions opts;
    opts.instances = 100;
    opts.seed = 90210;
    opts.tolerance = 1e-8;
    const auto start = std::chrono::steady_clock::now();
    const auto out = run_oracle_battery(opts);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = out.pass && out.instances_run == 100 && secs <= 30.0;
    return std::make_pair(
        pass, fmt("worst rel %.2e batch / %.2e adapted, %lld redraws, limit 1e-8",
                  out.worst_trainer_rel, out.worst_adapter_rel,
                  static_cast<long long>(out.resamples)));
  });

  criterion(2, "empty and zero-residual rings", [] {
    const auto ds = uniform_dataset(120, 3, 7);
    TrainConfig cfg;
    cfg.n_neurons = 16;
    const auto model = train_offline(ds, cfg);

    RingBuffer empty(8);
    const auto state = adapt(model, empty);
    const bool bitwise = (state.beta1 - model.beta0).cwiseAbs().maxCoeff() == 0.0;

    SplitMix64 rng(8);
    RingBuffer ring(8);
    Index pushed = 0;
    while (pushed < 8) {
      const Vector x = random_row(rng, 3);
      const Vector h = hidden_row(model.weights, model.scale_features(x), model.activation);
      const double t = h.dot(model.beta0);
      if (t < 0.05 || t > 0.95) continue;
      ring.push_pair(model, x, model.unscale_target(t));
      ++pushed;
    }
    const double drift = rel_inf(adapt(model, ring).beta1, model.beta0);
    return std::make_pair(bitwise && drift <= 1e-12,
                          fmt("empty ring bitwise %s, zero-residual drift %.2e",
                              bitwise ? "yes" : "NO", drift));
  });

  criterion(3, "pade activation accuracy", [] {
    const auto grid_err = [](double lo, double hi) {
      double worst = 0.0;
      for (int i = 0; i <= 100000; ++i) {
        const double y = lo + (hi - lo) * i / 100000.0;
        worst = std::max(worst, std::abs(logistic_pade(y) - logistic_exact(y)));
      }
      return worst;
    };
    const double e2 = grid_err(-2.0, 2.0);
    const double e3 = grid_err(-3.0, 3.0);

    double forms = 0.0;
    for (int i = 0; i <= 100000; ++i) {
      const double y = -4.0 + 8.0 * i / 100000.0;
      const double y2 = y * y;
      const double p = (120.0 + 60.0 * y + 12.0 * y2 + y2 * y) /
                       (120.0 - 60.0 * y + 12.0 * y2 - y2 * y);
      const double unreduced = 1.0 / (1.0 + p);
      forms = std::max(forms, std::abs(logistic_pade(y) - unreduced) / std::abs(unreduced));
    }
    const bool pass =
        e2 <= 2e-4 && e3 <= 2e-3 && logistic_pade(0.0) == 0.5 && forms <= 1e-13;
    return std::make_pair(pass, fmt("[-2,2] %.2e<=2e-4, [-3,3] %.2e<=2e-3, forms %.1e<=1e-13",
                                    e2, e3, forms));
  });

  criterion(4, "forgetting and statelessness", [] {
    const auto ds = uniform_dataset(150, 2, 9);
    TrainConfig cfg;
    cfg.n_neurons = 12;
    cfg.w0 = 3.5e-3;
    const auto model = train_offline(ds, cfg);

    SplitMix64 rng(10);
    std::vector<std::pair<Vector, double>> tail;
    for (int i = 0; i < 8; ++i) tail.emplace_back(random_row(rng, 2), rng.next_unit());

    RingBuffer long_history(8), short_history(8);
    for (int i = 0; i < 64; ++i)
      long_history.push_pair(model, random_row(rng, 2), rng.next_unit());
    for (const auto& [x, t] : tail) {
      long_history.push_pair(model, x, t);
      short_history.push_pair(model, x, t);
    }
    const Vector beta_long = adapt(model, long_history).beta1;
    const Vector beta_short = adapt(model, short_history).beta1;
    const double forget = rel_inf(beta_long, beta_short);

    const Vector repeat = adapt(model, long_history).beta1;
    const bool bitwise = (repeat - beta_long).cwiseAbs().maxCoeff() == 0.0;
    return std::make_pair(forget <= 1e-12 && bitwise,
                          fmt("history drift %.2e<=1e-12, repeat bitwise %s", forget,
                              bitwise ? "yes" : "NO"));
  });

  criterion(5, "joint weight-scale invariance", [] {
    const auto ds = uniform_dataset(200, 3, 11);
    SplitMix64 rng(12);
    std::vector<std::pair<Vector, double>> pairs;
    for (int i = 0; i < 8; ++i) pairs.emplace_back(random_row(rng, 3), rng.next_unit());

    Vector beta0_ref, beta1_ref;
    double worst0 = 0.0, worst1 = 0.0;
    for (const double c : {1e-3, 1.0, 1e3}) {
      TrainConfig cfg;
      cfg.n_neurons = 12;
      cfg.w0 = 3.5e-3 * c;
      const auto model = train_offline(ds, cfg);
      RingBuffer ring(8);
      for (const auto& [x, t] : pairs) ring.push_pair(model, x, t);
      const Vector beta1 = adapt(model, ring, OnlineWeights::uniform(c)).beta1;
      if (beta0_ref.size() == 0) {
        beta0_ref = model.beta0;
        beta1_ref = beta1;
      } else {
        worst0 = std::max(worst0, rel_inf(model.beta0, beta0_ref));
        worst1 = std::max(worst1, rel_inf(beta1, beta1_ref));
      }
    }
    return std::make_pair(worst0 <= 1e-10 && worst1 <= 1e-10,
                          fmt("beta0 drift %.2e, beta1 drift %.2e, limit 1e-10", worst0,
                              worst1));
  });

  // Criteria 6 and 7 share one experiment.
  FitExperiment experiment;

  criterion(6, "adaptive fit on the synthetic stream", [&experiment] {
    const auto start = std::chrono::steady_clock::now();

    EvalOptions adaptive;
    adaptive.ring_capacity = 8;
    EvalOptions frozen = adaptive;
    frozen.adaptive = false;

    const auto a = evaluate_stream(experiment.model, experiment.eval_stream, adaptive);
    const auto s = evaluate_stream(experiment.model, experiment.eval_stream, frozen);

    // In-training-range subset: rows whose current set point (the mu
    // feature) lies inside the trained band.
    std::vector<double> pred_in, act_in;
    for (const auto& row : a.trace) {
      const auto& rec = experiment.eval_stream[row.step];
      if (rec.features[1] <= 3.4) {
        pred_in.push_back(row.predicted);
        act_in.push_back(row.actual);
      }
    }
    const FitMetrics in_range = compute_metrics(pred_in, act_in);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const bool pass = a.report.r2 > s.report.r2 &&
                      a.report.rmse < 0.8 * s.report.rmse && in_range.r2 >= 0.80 &&
                      secs <= 60.0;
    return std::make_pair(
        pass, fmt("adaptive r2 %.4f > static %.4f; rmse ratio %.3f < 0.8; in-range r2 %.4f >= 0.80",
                  a.report.r2, s.report.r2, a.report.rmse / s.report.rmse, in_range.r2));
  });

  criterion(7, "causality audit over the full stream", [&experiment] {
    const auto result =
        evaluate_stream(experiment.model, experiment.eval_stream, EvalOptions{});
    const Index violations = audit_causality(result.events);
    const bool covered =
        static_cast<Index>(result.trace.size()) == experiment.eval_stream.size();
    return std::make_pair(violations == 0 && result.report.causality_violations == 0 && covered,
                          fmt("%lld violations over %lld predictions",
                              static_cast<long long>(violations),
                              static_cast<long long>(result.trace.size())));
  });

  criterion(8, "online update latency", [] {
    GenConfig gen_cfg;
    gen_cfg.seed = 77;
    gen_cfg.n_steps = 4096;
    gen_cfg.n_distractors = 4;  // z = 6
    const auto ds = generate(gen_cfg);
    const auto model = train_offline(ds, TrainConfig{});  // 64 neurons

    BenchOptions opts;
    opts.ring_capacity = 8;
    opts.iterations = 100000;
    const auto report = run_bench(model, opts);
    const bool pass = report.total.median_us <= 1000.0 && report.phase_fraction >= 0.95;
    return std::make_pair(pass,
                          fmt("median %.1f us <= 1000 us (p99 %.1f us), phases cover %.0f%%",
                              report.total.median_us, report.total.p99_us,
                              100.0 * report.phase_fraction));
  });

  criterion(9, "pipeline determinism and serialization", [] {
    const fs::path base = fs::temp_directory_path() / "wrelm_acceptance_det";
    fs::remove_all(base);
    fs::create_directories(base / "a");
    fs::create_directories(base / "b");

    for (const char* sub : {"a", "b"}) {
      const fs::path dir = base / sub;
      if (run_cli("gen --seed 5 --steps 4000 --mu 2.8:3.6 --state-noise 0.05 --out " +
                  (dir / "d.csv").string()) != 0)
        return std::make_pair(false, std::string("gen failed"));
      if (run_cli("train --data " + (dir / "d.csv").string() + " --neurons 32 --out " +
                  (dir / "m.bin").string()) != 0)
        return std::make_pair(false, std::string("train failed"));
      if (run_cli("eval --model " + (dir / "m.bin").string() + " --data " +
                  (dir / "d.csv").string() + " --trace " + (dir / "t.csv").string()) != 0)
        return std::make_pair(false, std::string("eval failed"));
    }

    const bool data_same = slurp(base / "a/d.csv") == slurp(base / "b/d.csv");
    const bool model_same = slurp(base / "a/m.bin") == slurp(base / "b/m.bin");

    // Traces match in every deterministic column (timing may differ).
    const auto ta = read_trace_csv((base / "a/t.csv").string());
    const auto tb = read_trace_csv((base / "b/t.csv").string());
    bool trace_same = ta.size() == tb.size();
    for (size_t i = 0; trace_same && i < ta.size(); ++i)
      trace_same = ta[i].step == tb[i].step && ta[i].predicted == tb[i].predicted &&
                   ta[i].actual == tb[i].actual && ta[i].error == tb[i].error &&
                   ta[i].beta1_norm == tb[i].beta1_norm;

    // Bit-exact save/load round trip.
    const auto model = load_model((base / "a/m.bin").string());
    save_model(model, (base / "a/m2.bin").string());
    const bool rt_same = slurp(base / "a/m.bin") == slurp(base / "a/m2.bin");

    fs::remove_all(base);
    return std::make_pair(data_same && model_same && trace_same && rt_same,
                          fmt("data %s, model %s, trace %s, round-trip %s",
                              data_same ? "ok" : "DIFF", model_same ? "ok" : "DIFF",
                              trace_same ? "ok" : "DIFF", rt_same ? "ok" : "DIFF"));
  });

  criterion(10, "synthetic dynamics sanity", [] {
    const auto fixed = bifurcation_scan({2.8}, 2000, 100)[0];
    double worst_fp = 0.0;
    for (const double x : fixed) worst_fp = std::max(worst_fp, std::abs(x - (1.0 - 1.0 / 2.8)));

    const auto orbit = bifurcation_scan({3.2}, 5000, 100)[0];
    const double root = std::sqrt(0.2 * 4.2);
    const double lo = (4.2 - root) / 6.4;
    const double hi = (4.2 + root) / 6.4;
    double worst_p2 = 0.0;
    for (const double x : orbit)
      worst_p2 = std::max(worst_p2, std::min(std::abs(x - lo), std::abs(x - hi)));

    const auto chaos = bifurcation_scan({3.9}, 1000, 1000)[0];
    std::vector<double> sorted(chaos);
    std::sort(sorted.begin(), sorted.end());
    Index distinct = 1;
    for (size_t i = 1; i < sorted.size(); ++i)
      if (sorted[i] - sorted[i - 1] > 1e-6) ++distinct;

    const bool pass = worst_fp <= 1e-6 && worst_p2 <= 1e-6 && distinct >= 100;
    return std::make_pair(pass, fmt("fixed point err %.1e, period-2 err %.1e, %lld distinct",
                                    worst_fp, worst_p2, static_cast<long long>(distinct)));
  });

  std::printf("%d/%d criteria passed\n", 10 - failures, 10);
  return failures == 0 ? 0 : 1;
}
