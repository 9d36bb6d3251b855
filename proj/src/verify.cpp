#include "wrelm/verify.hpp"

#include "wrelm/adapter.hpp"
#include "wrelm/lsq_oracle.hpp"
#include "wrelm/rng.hpp"
#include "wrelm/trainer.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace wrelm {

namespace {

double rel_inf_error(const Vector& got, const Vector& want) {
  const double scale = std::max(want.cwiseAbs().maxCoeff(), 1e-30);
  return (got - want).cwiseAbs().maxCoeff() / scale;
}

struct Instance {
  SeriesDataset ds;
  TrainConfig cfg;
  std::vector<Vector> ring_x;
  std::vector<double> ring_t;
  Vector w1;

  Instance() : ds(0) {}
};

Instance draw_instance(SplitMix64& rng) {
  Instance inst;
  const Index n0 = static_cast<Index>(rng.next_int(50, 500));
  const Index z = static_cast<Index>(rng.next_int(2, 8));
  const Index n_neurons = static_cast<Index>(rng.next_int(4, 32));
  const Index m = static_cast<Index>(rng.next_int(0, 8));

  inst.ds = SeriesDataset(z);
  for (Index i = 0; i < n0; ++i) {
    SeriesRecord rec;
    rec.step = i;
    rec.set_point = 0;
    rec.features.resize(z);
    for (Index c = 0; c < z; ++c) rec.features[c] = rng.next_unit();
    rec.target = rng.next_unit();
    inst.ds.append(std::move(rec));
  }

  inst.cfg.seed = rng.next_u64();
  inst.cfg.n_neurons = n_neurons;
  Vector w0(n0);
  for (Index i = 0; i < n0; ++i) w0[i] = rng.next_uniform(0.5, 2.0);
  inst.cfg.w0_diag = std::move(w0);

  inst.ring_x.resize(static_cast<size_t>(m));
  inst.ring_t.resize(static_cast<size_t>(m));
  inst.w1.resize(m);
  for (Index i = 0; i < m; ++i) {
    Vector x(z);
    for (Index c = 0; c < z; ++c) x[c] = rng.next_unit();
    inst.ring_x[static_cast<size_t>(i)] = std::move(x);
    inst.ring_t[static_cast<size_t>(i)] = rng.next_unit();
    inst.w1[i] = rng.next_uniform(0.5, 2.0);
  }
  return inst;
}

double condition_of(const Matrix& gram) {
  Eigen::JacobiSVD<Matrix> svd(gram);
  const Vector& sv = svd.singularValues();
  const double lo = sv[sv.size() - 1];
  if (lo <= 0.0) return std::numeric_limits<double>::infinity();
  return sv[0] / lo;
}

}  // namespace

VerifyOutcome run_oracle_battery(const VerifyOptions& opts) {
  if (opts.instances < 0) throw ValidationError("instance count must be non-negative");

  VerifyOutcome outcome;
  SplitMix64 rng(opts.seed);

  for (Index i = 0; i < opts.instances; ++i) {
    Instance inst;
    OfflineModel model;
    Matrix h0;
    Vector t0_scaled;
    // Redraw until the offline Gram matrix is numerically full rank; the
    // route comparison is only meaningful there.
    for (;;) {
      inst = draw_instance(rng);
      model = train_offline(inst.ds, inst.cfg);

      // Rebuild the scaled offline system the way training saw it.
      Matrix x0(inst.ds.count_valid(), inst.ds.z());
      const Matrix raw = inst.ds.valid_features();
      for (Index r = 0; r < raw.rows(); ++r)
        for (Index c = 0; c < raw.cols(); ++c) x0(r, c) = model.scaler.scale(c, raw(r, c));
      h0 = hidden_matrix(model.weights, x0, model.activation);
      const Vector raw_t = inst.ds.valid_targets();
      t0_scaled.resize(raw_t.size());
      for (Index r = 0; r < raw_t.size(); ++r) t0_scaled[r] = model.scale_target(raw_t[r]);

      const Matrix gram = h0.transpose() * inst.cfg.w0_diag->asDiagonal() * h0;
      if (condition_of(gram) <= opts.condition_limit) break;
      ++outcome.resamples;
    }

    // Batch solution against the oracle.
    oracle::StackedSystem offline{h0, *inst.cfg.w0_diag, t0_scaled};
    const Vector beta0_oracle = oracle::batch_weighted_ls(offline, model.svd_tolerance);
    outcome.worst_trainer_rel =
        std::max(outcome.worst_trainer_rel, rel_inf_error(model.beta0, beta0_oracle));

    // Ring-adapted solution against the stacked oracle.
    const auto m = static_cast<Index>(inst.ring_x.size());
    RingBuffer ring(std::max<Index>(m, 1));
    for (Index k = 0; k < m; ++k)
      ring.push_pair(model, inst.ring_x[static_cast<size_t>(k)],
                     inst.ring_t[static_cast<size_t>(k)]);
    const OnlineWeights w1 =
        m > 0 ? OnlineWeights::per_slot(inst.w1) : OnlineWeights{};
    Vector beta1 = adapt(model, ring, w1).beta1;
    if (opts.inject_fault && beta1.size() > 0) beta1[0] += 1e-6;

    const Matrix h1 = ring.hidden_matrix();
    const Vector t1 = ring.targets();
    const oracle::StackedSystem stacked =
        oracle::stack(h0, *inst.cfg.w0_diag, t0_scaled, h1, inst.w1, t1);
    const Vector beta1_oracle = oracle::batch_weighted_ls(stacked, model.svd_tolerance);
    outcome.worst_adapter_rel =
        std::max(outcome.worst_adapter_rel, rel_inf_error(beta1, beta1_oracle));

    ++outcome.instances_run;
  }

  outcome.pass = outcome.worst_trainer_rel <= opts.tolerance &&
                 outcome.worst_adapter_rel <= opts.tolerance;
  return outcome;
}

}  // namespace wrelm
