#include "wrelm/synthgen.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace wrelm;

namespace {

GenConfig fixed_mu(double mu, Index steps, std::uint64_t seed = 1) {
  GenConfig cfg;
  cfg.seed = seed;
  cfg.n_steps = steps;
  cfg.mu_min = mu;
  cfg.mu_max = mu;
  return cfg;
}

// Count of distinct values after rounding to a clustering resolution.
Index distinct_count(const std::vector<double>& values, double resolution) {
  std::set<long long> buckets;
  for (const double v : values)
    buckets.insert(static_cast<long long>(std::llround(v / resolution)));
  return static_cast<Index>(buckets.size());
}

}  // namespace

TEST_CASE("mu = 2.8 converges to the closed-form fixed point") {
  const auto ds = generate(fixed_mu(2.8, 2000));
  const double fp = 1.0 - 1.0 / 2.8;
  for (Index i = ds.size() - 100; i < ds.size(); ++i)
    CHECK(std::abs(ds[i].features[0] - fp) <= 1e-6);

  const auto scan = bifurcation_scan({2.8}, 1000, 50);
  for (const double x : scan[0]) CHECK(std::abs(x - fp) <= 1e-6);
}

TEST_CASE("mu = 3.2 settles on the closed-form period-2 orbit") {
  const double mu = 3.2;
  const double root = std::sqrt((mu - 3.0) * (mu + 1.0));
  const double lo = (mu + 1.0 - root) / (2.0 * mu);
  const double hi = (mu + 1.0 + root) / (2.0 * mu);

  const auto scan = bifurcation_scan({mu}, 5000, 64);
  for (const double x : scan[0]) {
    const double err = std::min(std::abs(x - lo), std::abs(x - hi));
    CHECK(err <= 1e-6);
  }
  // Both phases appear.
  CHECK(distinct_count(scan[0], 1e-4) == 2);
}

TEST_CASE("mu = 3.5 visits exactly the period-4 window") {
  const auto scan = bifurcation_scan({3.5}, 5000, 400);
  CHECK(distinct_count(scan[0], 1e-6) == 4);
}

TEST_CASE("mu = 3.9 is aperiodic") {
  const auto scan = bifurcation_scan({3.9}, 1000, 1000);
  CHECK(distinct_count(scan[0], 1e-6) >= 100);
}

TEST_CASE("identical configs generate identical datasets") {
  GenConfig cfg;
  cfg.seed = 42;
  cfg.n_steps = 500;
  cfg.noise_sigma = 0.01;
  cfg.n_distractors = 3;
  const auto a = generate(cfg);
  const auto b = generate(cfg);
  REQUIRE(a.size() == b.size());
  for (Index i = 0; i < a.size(); ++i) {
    CHECK(a[i].step == b[i].step);
    CHECK(a[i].set_point == b[i].set_point);
    CHECK(a[i].target == b[i].target);
    CHECK((a[i].features - b[i].features).cwiseAbs().maxCoeff() == 0.0);
  }

  GenConfig other = cfg;
  other.seed = 43;
  const auto c = generate(other);
  CHECK(c[10].target != a[10].target);
}

TEST_CASE("noiseless trajectories stay inside the unit interval") {
  GenConfig cfg;
  cfg.seed = 7;
  cfg.n_steps = 5000;
  cfg.mu_min = 2.8;
  cfg.mu_max = 4.0;
  const auto ds = generate(cfg);
  for (Index i = 0; i < ds.size(); ++i) {
    CHECK(ds[i].features[0] >= 0.0);
    CHECK(ds[i].features[0] <= 1.0);
    CHECK(ds[i].target >= 0.0);
    CHECK(ds[i].target <= 1.0);
  }
}

TEST_CASE("every record aligns with the next step of its trajectory") {
  GenConfig cfg;
  cfg.seed = 8;
  cfg.n_steps = 2000;
  const auto ds = generate(cfg);
  for (Index i = 0; i + 1 < ds.size(); ++i)
    CHECK(ds[i].target == ds[i + 1].features[0]);

  // With observation noise the trajectory itself stays deterministic: the
  // next state is still the exact map of the current one.
  cfg.noise_sigma = 0.05;
  const auto noisy = generate(cfg);
  for (Index i = 0; i + 1 < noisy.size(); ++i) {
    const double x = noisy[i].features[0];
    const double mu = noisy[i].features[1];
    CHECK(noisy[i + 1].features[0] == mu * x * (1.0 - x));
  }
}

TEST_CASE("dwell lengths respect the configured range") {
  GenConfig cfg;
  cfg.seed = 9;
  cfg.n_steps = 6000;
  cfg.dwell_min = 10;
  cfg.dwell_max = 60;
  const auto ds = generate(cfg);

  std::vector<Index> run_lengths;
  Index run = 1;
  for (Index i = 1; i < ds.size(); ++i) {
    if (ds[i].set_point == ds[i - 1].set_point) {
      ++run;
    } else {
      run_lengths.push_back(run);
      run = 1;
      CHECK(ds[i].set_point == ds[i - 1].set_point + 1);  // ids are sequential
    }
  }
  REQUIRE(run_lengths.size() > 50);
  // The final (truncated) run is excluded; all completed dwells are in range.
  for (const Index len : run_lengths) {
    CHECK(len >= 10);
    CHECK(len <= 60);
  }
  // mu is constant within a dwell and re-drawn across set points.
  for (Index i = 1; i < ds.size(); ++i) {
    if (ds[i].set_point == ds[i - 1].set_point)
      CHECK(ds[i].features[1] == ds[i - 1].features[1]);
  }
}

TEST_CASE("distractor columns are uniform noise in [0,1)") {
  GenConfig cfg;
  cfg.seed = 10;
  cfg.n_steps = 1000;
  cfg.n_distractors = 4;
  const auto ds = generate(cfg);
  REQUIRE(ds.z() == 6);
  for (Index i = 0; i < ds.size(); ++i)
    for (Index c = 2; c < 6; ++c) {
      CHECK(ds[i].features[c] >= 0.0);
      CHECK(ds[i].features[c] < 1.0);
    }
}

TEST_CASE("state noise widens the visited range but keeps (0,1)") {
  GenConfig cfg;
  cfg.seed = 11;
  cfg.n_steps = 5000;
  cfg.mu_min = 2.8;
  cfg.mu_max = 3.4;
  cfg.state_sigma = 0.08;
  const auto ds = generate(cfg);
  double lo = 1.0, hi = 0.0;
  for (Index i = 0; i < ds.size(); ++i) {
    const double x = ds[i].features[0];
    CHECK(x > 0.0);
    CHECK(x < 1.0);
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  // Without noise this band stays near [0.42, 0.86].
  CHECK(lo < 0.3);
  CHECK(hi > 0.9);
}

TEST_CASE("configuration validation") {
  GenConfig cfg;
  cfg.n_steps = 10;
  cfg.mu_min = 4.5;
  cfg.mu_max = 5.0;
  CHECK_THROWS_AS(generate(cfg), ValidationError);
  cfg.mu_min = 3.0;
  cfg.mu_max = 2.0;
  CHECK_THROWS_AS(generate(cfg), ValidationError);
  cfg = GenConfig{};
  cfg.n_steps = 0;
  CHECK_THROWS_AS(generate(cfg), ValidationError);
  cfg.n_steps = 10;
  cfg.dwell_min = 0;
  CHECK_THROWS_AS(generate(cfg), ValidationError);
  cfg = GenConfig{};
  cfg.n_steps = 10;
  cfg.noise_sigma = -1.0;
  CHECK_THROWS_AS(generate(cfg), ValidationError);
  CHECK_THROWS_AS(bifurcation_scan({4.5}, 10, 10), ValidationError);
}
