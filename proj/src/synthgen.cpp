#include "wrelm/synthgen.hpp"

#include "wrelm/rng.hpp"

#include <algorithm>
#include <cmath>

namespace wrelm {

namespace {

constexpr double kInitialState = 0.5;

void validate(const GenConfig& cfg) {
  if (cfg.n_steps < 1) throw ValidationError("n_steps must be >= 1");
  if (!(cfg.mu_min > 0.0 && cfg.mu_min <= cfg.mu_max && cfg.mu_max <= 4.0))
    throw ValidationError("mu range must satisfy 0 < mu_min <= mu_max <= 4");
  if (cfg.dwell_min < 1 || cfg.dwell_min > cfg.dwell_max)
    throw ValidationError("dwell range must satisfy 1 <= dwell_min <= dwell_max");
  if (cfg.noise_sigma < 0.0 || cfg.state_sigma < 0.0)
    throw ValidationError("noise levels must be non-negative");
  if (cfg.n_distractors < 0) throw ValidationError("n_distractors must be non-negative");
}

}  // namespace

SeriesDataset generate(const GenConfig& cfg) {
  validate(cfg);

  const Index z = 2 + cfg.n_distractors;
  SeriesDataset ds(z);
  SplitMix64 rng(cfg.seed);
  BoxMuller gauss;

  double x = kInitialState;
  double mu = rng.next_uniform(cfg.mu_min, cfg.mu_max);
  Index remaining = static_cast<Index>(rng.next_int(cfg.dwell_min, cfg.dwell_max));
  int set_point = 0;

  for (Index k = 0; k < cfg.n_steps; ++k) {
    if (remaining == 0) {
      mu = rng.next_uniform(cfg.mu_min, cfg.mu_max);
      remaining = static_cast<Index>(rng.next_int(cfg.dwell_min, cfg.dwell_max));
      ++set_point;
    }
    --remaining;

    SeriesRecord rec;
    rec.step = k;
    rec.set_point = set_point;
    rec.features.resize(z);
    rec.features[0] = x;
    rec.features[1] = mu;
    for (Index d = 0; d < cfg.n_distractors; ++d) rec.features[2 + d] = rng.next_unit();

    const double x_next = mu * x * (1.0 - x);
    rec.target = x_next;
    if (cfg.noise_sigma > 0.0) rec.target += cfg.noise_sigma * gauss.next(rng);
    rec.valid = true;
    ds.append(std::move(rec));

    x = x_next;
    if (cfg.state_sigma > 0.0) {
      x += cfg.state_sigma * gauss.next(rng);
      x = std::clamp(x, 1e-6, 1.0 - 1e-6);
    }
  }
  return ds;
}

std::vector<std::vector<double>> bifurcation_scan(const std::vector<double>& mu_grid,
                                                  Index transient_skip, Index n_samples) {
  if (transient_skip < 0 || n_samples < 1)
    throw ValidationError("scan needs non-negative skip and at least one sample");
  for (const double mu : mu_grid)
    if (!(mu > 0.0 && mu <= 4.0)) throw ValidationError("mu grid values must lie in (0, 4]");

  std::vector<std::vector<double>> out;
  out.reserve(mu_grid.size());
  for (const double mu : mu_grid) {
    double x = kInitialState;
    for (Index i = 0; i < transient_skip; ++i) x = mu * x * (1.0 - x);
    std::vector<double> samples(static_cast<size_t>(n_samples));
    for (Index i = 0; i < n_samples; ++i) {
      x = mu * x * (1.0 - x);
      samples[static_cast<size_t>(i)] = x;
    }
    out.push_back(std::move(samples));
  }
  return out;
}

}  // namespace wrelm
