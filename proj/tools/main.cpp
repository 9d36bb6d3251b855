// wrelm: train a weighted random-feature regressor offline, then track a
// time series online with ring-buffer adaptation.
//
// Subcommands: gen | train | eval | verify | bench. Exit codes: 0 success,
// 2 validation error, 3 numeric failure, 4 I/O error.

#include "wrelm/bench.hpp"
#include "wrelm/eval.hpp"
#include "wrelm/model_io.hpp"
#include "wrelm/synthgen.hpp"
#include "wrelm/verify.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <future>
#include <iostream>
#include <thread>

namespace {

using namespace wrelm;

std::pair<double, double> parse_range(const std::string& text, const std::string& flag) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw ValidationError(flag + " expects lo:hi, got '" + text + "'");
  try {
    return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
  } catch (const std::exception&) {
    throw ValidationError(flag + " expects lo:hi, got '" + text + "'");
  }
}

int thread_budget() {
  if (const char* env = std::getenv("WRELM_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

int count_set_point_changes(const SeriesDataset& ds) {
  int changes = 0;
  for (Index i = 1; i < ds.size(); ++i)
    changes += ds[i].set_point != ds[i - 1].set_point ? 1 : 0;
  return changes;
}

int cmd_gen(const GenConfig& cfg, const std::string& out_path) {
  const SeriesDataset ds = generate(cfg);
  ds.write_csv(out_path);
  std::printf("wrote %s: %lld rows, z=%lld, %d set-point changes\n", out_path.c_str(),
              static_cast<long long>(ds.size()), static_cast<long long>(ds.z()),
              count_set_point_changes(ds));
  return 0;
}

int cmd_train(const std::string& data_path, const std::string& out_path, TrainConfig cfg) {
  const SeriesDataset ds = SeriesDataset::read_csv(data_path);
  TrainInfo info;
  const OfflineModel model = train_offline(ds, cfg, &info);
  save_model(model, out_path);
  std::printf("trained on %lld rows (z=%lld, neurons=%lld)\n",
              static_cast<long long>(info.rows_used), static_cast<long long>(model.z()),
              static_cast<long long>(model.n_neurons()));
  std::printf("residual rmse (scaled units): %.6g\n", info.residual_rmse_scaled);
  std::printf("gram spectrum: sigma_max %.6g, sigma_min %.6g, rank %lld, truncated %lld\n",
              info.gram_sigma_max, info.gram_sigma_min, static_cast<long long>(info.rank),
              static_cast<long long>(info.truncated));
  std::printf("wrote %s\n", out_path.c_str());
  return 0;
}

void print_report(const std::string& name, const EvalReport& r) {
  std::printf("stream %s\n", name.c_str());
  std::printf("  rows %lld (valid %lld, outliers %lld)\n", static_cast<long long>(r.rows),
              static_cast<long long>(r.valid_rows), static_cast<long long>(r.outliers));
  std::printf("  r2 %.6f\n", r.r2);
  std::printf("  rmse %.6g\n", r.rmse);
  std::printf("  steady-state rmse %.6g over %lld rows\n", r.steady_rmse,
              static_cast<long long>(r.steady_rows));
  std::printf("  latency us: median %.1f, p99 %.1f\n", r.latency_median_us, r.latency_p99_us);
  std::printf("  causality violations %lld\n", static_cast<long long>(r.causality_violations));
}

int cmd_eval(const std::string& model_path, const std::vector<std::string>& data_paths,
             const EvalOptions& opts, const std::string& trace_path) {
  const OfflineModel model = load_model(model_path);

  struct Stream {
    std::string data;
    std::string trace;
    EvalResult result;
  };
  std::vector<Stream> streams;
  for (size_t i = 0; i < data_paths.size(); ++i) {
    Stream s;
    s.data = data_paths[i];
    if (!trace_path.empty()) {
      if (data_paths.size() == 1) {
        s.trace = trace_path;
      } else {
        std::filesystem::path p(trace_path);
        const std::string stem = p.stem().string() + "_" + std::to_string(i);
        s.trace = (p.parent_path() / (stem + p.extension().string())).string();
      }
    }
    streams.push_back(std::move(s));
  }

  // Streams are independent; the model is shared read-only.
  const int budget = thread_budget();
  std::vector<std::future<void>> pending;
  for (auto& s : streams) {
    auto job = [&model, &opts, &s] {
      const SeriesDataset ds = SeriesDataset::read_csv(s.data);
      s.result = evaluate_stream(model, ds, opts);
      if (!s.trace.empty()) write_trace_csv(s.trace, s.result.trace);
    };
    if (static_cast<int>(streams.size()) > 1 && budget > 1)
      pending.push_back(std::async(std::launch::async, job));
    else
      job();
  }
  for (auto& f : pending) f.get();

  bool causal = true;
  for (const auto& s : streams) {
    print_report(s.data, s.result.report);
    if (!s.trace.empty()) std::printf("  trace %s\n", s.trace.c_str());
    causal = causal && s.result.report.causality_violations == 0;
  }
  if (!causal) {
    std::fprintf(stderr, "causality audit failed\n");
    return 3;
  }
  return 0;
}

int cmd_verify(const VerifyOptions& opts) {
  if (opts.instances == 0) {
    std::printf("verify: 0 instances requested, vacuous pass (warning)\n");
    return 0;
  }
  const VerifyOutcome out = run_oracle_battery(opts);
  std::printf("verify: %lld instances (%lld conditioning redraws)\n",
              static_cast<long long>(out.instances_run),
              static_cast<long long>(out.resamples));
  std::printf("  worst batch-vs-oracle rel err:   %.3e\n", out.worst_trainer_rel);
  std::printf("  worst adapted-vs-oracle rel err: %.3e\n", out.worst_adapter_rel);
  std::printf("  tolerance %.1e -> %s\n", opts.tolerance, out.pass ? "PASS" : "FAIL");
  return out.pass ? 0 : 3;
}

int cmd_bench(const std::string& model_path, Index n_neurons, Index z, Index n_distractors,
              const BenchOptions& opts) {
  OfflineModel model;
  if (!model_path.empty()) {
    model = load_model(model_path);
  } else {
    // Synthetic stand-in model at the requested size.
    GenConfig gen_cfg;
    gen_cfg.seed = opts.seed;
    gen_cfg.n_steps = 2048;
    gen_cfg.n_distractors = n_distractors >= 0 ? n_distractors : z - 2;
    if (gen_cfg.n_distractors != z - 2)
      throw ValidationError("--z and --distractors disagree");
    TrainConfig cfg;
    cfg.n_neurons = n_neurons;
    model = train_offline(generate(gen_cfg), cfg);
  }

  const BenchReport r = run_bench(model, opts);
  std::printf("bench: %lld iterations, neurons=%lld, z=%lld, ring=%lld\n",
              static_cast<long long>(r.iterations), static_cast<long long>(model.n_neurons()),
              static_cast<long long>(model.z()), static_cast<long long>(opts.ring_capacity));
  const auto line = [](const char* name, const PhaseStats& s) {
    std::printf("  %-8s median %8.3f us   p99 %8.3f us   mean %8.3f us\n", name, s.median_us,
                s.p99_us, s.mean_us);
  };
  line("push", r.push);
  line("adapt", r.adapt);
  line("predict", r.predict);
  line("total", r.total);
  std::printf("  phase medians cover %.1f%% of total median\n", 100.0 * r.phase_fraction);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted ring ELM: offline training + online ring-buffer adaptation"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a synthetic logistic-map dataset");
  GenConfig gen_cfg;
  std::string gen_out = "data.csv";
  std::string gen_mu = "2.8:3.9";
  std::string gen_dwell = "10:200";
  gen->add_option("--out", gen_out, "output CSV path");
  gen->add_option("--seed", gen_cfg.seed, "stream seed");
  gen->add_option("--steps", gen_cfg.n_steps, "number of steps")->required();
  gen->add_option("--mu", gen_mu, "map parameter range lo:hi");
  gen->add_option("--dwell", gen_dwell, "set-point dwell range lo:hi (steps)");
  gen->add_option("--noise", gen_cfg.noise_sigma, "observation noise sigma");
  gen->add_option("--state-noise", gen_cfg.state_sigma,
                  "state (feedback) noise sigma; widens the visited state range");
  gen->add_option("--distractors", gen_cfg.n_distractors, "uninformative feature columns");

  // train
  auto* train = app.add_subcommand("train", "fit the offline model from a dataset CSV");
  std::string train_data;
  std::string train_out = "model.wrelm";
  TrainConfig train_cfg;
  std::string train_activation = "pade";
  std::string train_prune;
  train->add_option("--data", train_data, "training dataset CSV")->required();
  train->add_option("--out", train_out, "output model path");
  train->add_option("--seed", train_cfg.seed, "input weight seed");
  train->add_option("--neurons", train_cfg.n_neurons, "hidden layer width");
  train->add_option("--w0", train_cfg.w0, "offline scalar weight");
  train->add_option("--p-low", train_cfg.p_low, "low saturation percentile");
  train->add_option("--p-high", train_cfg.p_high, "high saturation percentile");
  train->add_option("--activation", train_activation, "pade|exact");
  train->add_option("--svd-tol", train_cfg.svd_tolerance, "relative singular value cutoff");
  train->add_option("--prune", train_prune,
                    "before:after transient window pruning (e.g. 6:9)");

  // eval
  auto* eval = app.add_subcommand("eval", "causal streaming evaluation of a model");
  std::string eval_model;
  std::vector<std::string> eval_data;
  std::string eval_trace;
  EvalOptions eval_opts;
  double eval_w1 = 1.0;
  bool eval_static = false;
  eval->add_option("--model", eval_model, "model file")->required();
  eval->add_option("--data", eval_data, "dataset CSV (repeatable for parallel streams)")
      ->required();
  eval->add_option("--ring", eval_opts.ring_capacity, "ring buffer capacity");
  eval->add_option("--w1", eval_w1, "uniform online weight");
  eval->add_option("--trace", eval_trace, "per-step trace CSV output");
  auto* adaptive_flag = eval->add_flag("--adaptive", "ring-buffer adaptation (default)");
  eval->add_flag("--static", eval_static, "freeze the offline solution (baseline)")
      ->excludes(adaptive_flag);

  // verify
  auto* verify = app.add_subcommand("verify", "randomized oracle-equivalence battery");
  VerifyOptions verify_opts;
  verify->add_option("--instances", verify_opts.instances, "number of random instances");
  verify->add_option("--seed", verify_opts.seed, "battery seed");
  verify->add_option("--tolerance", verify_opts.tolerance, "relative inf-norm tolerance");
  verify->add_flag("--inject-fault", verify_opts.inject_fault,
                   "perturb the adapted solution; the battery must fail");

  // bench
  auto* bench = app.add_subcommand("bench", "latency microbenchmark of the online path");
  std::string bench_model;
  Index bench_neurons = 64;
  Index bench_z = 6;
  Index bench_distractors = -1;
  BenchOptions bench_opts;
  bench->add_option("--model", bench_model, "model file (otherwise a synthetic model)");
  bench->add_option("--neurons", bench_neurons, "hidden layer width for the synthetic model");
  bench->add_option("--z", bench_z, "feature count for the synthetic model");
  bench->add_option("--ring", bench_opts.ring_capacity, "ring buffer capacity");
  bench->add_option("--iters", bench_opts.iterations, "iterations");
  bench->add_option("--seed", bench_opts.seed, "input pool seed");

  try {
    app.parse(argc, argv);

    if (gen->parsed()) {
      std::tie(gen_cfg.mu_min, gen_cfg.mu_max) = parse_range(gen_mu, "--mu");
      const auto [dlo, dhi] = parse_range(gen_dwell, "--dwell");
      gen_cfg.dwell_min = static_cast<wrelm::Index>(dlo);
      gen_cfg.dwell_max = static_cast<wrelm::Index>(dhi);
      return cmd_gen(gen_cfg, gen_out);
    }
    if (train->parsed()) {
      if (train_activation == "pade")
        train_cfg.activation = Activation::pade;
      else if (train_activation == "exact")
        train_cfg.activation = Activation::exact;
      else
        throw ValidationError("--activation must be pade or exact");
      if (!train_prune.empty()) {
        const auto [before, after] = parse_range(train_prune, "--prune");
        train_cfg.prune = PruneWindow{static_cast<wrelm::Index>(before),
                                      static_cast<wrelm::Index>(after)};
      }
      return cmd_train(train_data, train_out, train_cfg);
    }
    if (eval->parsed()) {
      eval_opts.adaptive = !eval_static;
      eval_opts.w1 = OnlineWeights::uniform(eval_w1);
      return cmd_eval(eval_model, eval_data, eval_opts, eval_trace);
    }
    if (verify->parsed()) return cmd_verify(verify_opts);
    if (bench->parsed())
      return cmd_bench(bench_model, bench_neurons, bench_z, bench_distractors, bench_opts);
    return 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
