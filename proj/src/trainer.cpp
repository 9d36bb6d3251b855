#include "wrelm/trainer.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace wrelm {

namespace {

// Trainer-side SVD pseudo-inverse of the (symmetric PSD) Gram matrix.
// The oracle module carries its own, separate implementation.
Matrix pseudo_inverse(const Matrix& k, double rel_tolerance, TrainInfo* info) {
  Eigen::BDCSVD<Matrix> svd(k, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  const double sigma_max = sv.size() > 0 ? sv[0] : 0.0;
  const double cutoff = rel_tolerance * sigma_max;

  Vector inv = Vector::Zero(sv.size());
  Index rank = 0;
  double sigma_min_kept = 0.0;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > cutoff && sv[i] > 0.0) {
      inv[i] = 1.0 / sv[i];
      sigma_min_kept = sv[i];
      ++rank;
    }
  }
  if (info != nullptr) {
    info->gram_sigma_max = sigma_max;
    info->gram_sigma_min = sigma_min_kept;
    info->rank = rank;
    info->truncated = sv.size() - rank;
  }
  Matrix p = svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
  // Inverse of a symmetric matrix; remove the SVD's asymmetric roundoff.
  return 0.5 * (p + p.transpose());
}

}  // namespace

Vector OfflineModel::scale_features(const Eigen::Ref<const Vector>& raw) const {
  if (raw.size() != z())
    throw ValidationError("feature row has " + std::to_string(raw.size()) +
                          " values, model expects " + std::to_string(z()));
  Vector out(z());
  for (Index c = 0; c < z(); ++c) out[c] = scaler.scale(c, raw[c]);
  return out;
}

SeriesDataset prune_transients(const SeriesDataset& ds, Index n_before, Index n_after) {
  if (n_before < 0 || n_after < 0)
    throw ValidationError("prune window sizes must be non-negative");

  const Index n = ds.size();
  std::vector<char> keep(static_cast<size_t>(n), 0);
  for (Index i = 1; i < n; ++i) {
    if (ds[i].set_point == ds[i - 1].set_point) continue;
    const Index lo = std::max<Index>(0, i - n_before);
    const Index hi = std::min<Index>(n - 1, i + n_after - 1);
    for (Index k = lo; k <= hi; ++k) keep[static_cast<size_t>(k)] = 1;
  }

  SeriesDataset out(ds.z());
  for (Index i = 0; i < n; ++i)
    if (keep[static_cast<size_t>(i)]) out.append(ds[i]);
  return out;
}

OfflineModel train_offline(const SeriesDataset& input, const TrainConfig& cfg,
                           TrainInfo* info) {
  if (cfg.n_neurons < 1) throw ValidationError("n_neurons must be >= 1");
  if (cfg.svd_tolerance <= 0.0) throw ValidationError("svd_tolerance must be positive");

  const SeriesDataset pruned =
      cfg.prune ? prune_transients(input, cfg.prune->n_before, cfg.prune->n_after)
                : SeriesDataset(input.z());
  const SeriesDataset& ds = cfg.prune ? pruned : input;

  const Index n = ds.count_valid();
  if (n < 1) throw ValidationError("training dataset has no valid rows");

  const Matrix features = ds.valid_features();
  const Vector targets = ds.valid_targets();
  if (!features.allFinite() || !targets.allFinite())
    throw ValidationError("training data contains non-finite values on valid rows");

  Vector w0(n);
  if (cfg.w0_diag) {
    if (cfg.w0_diag->size() != n)
      throw ValidationError("w0 diagonal length " + std::to_string(cfg.w0_diag->size()) +
                            " does not match valid row count " + std::to_string(n));
    w0 = *cfg.w0_diag;
  } else {
    w0.setConstant(cfg.w0);
  }
  if (!(w0.array() > 0.0).all()) throw ValidationError("offline weights must be positive");

  // Scaler covers the z feature columns plus the target column.
  Matrix scaler_input(n, ds.z() + 1);
  scaler_input.leftCols(ds.z()) = features;
  scaler_input.col(ds.z()) = targets;
  Scaler scaler = Scaler::fit(scaler_input, cfg.p_low, cfg.p_high);

  OfflineModel model;
  model.weights = init_input_weights(cfg.seed, ds.z(), cfg.n_neurons);
  model.scaler = std::move(scaler);
  model.w0 = cfg.w0;
  model.w0_diag = cfg.w0_diag;
  model.activation = cfg.activation;
  model.svd_tolerance = cfg.svd_tolerance;

  const Matrix x_scaled = model.scaler.apply_rows(scaler_input).leftCols(ds.z());
  Vector t_scaled(n);
  for (Index i = 0; i < n; ++i) t_scaled[i] = model.scaler.scale(ds.z(), targets[i]);

  const Matrix h0 = hidden_matrix(model.weights, x_scaled, cfg.activation);
  const Matrix k0 = h0.transpose() * w0.asDiagonal() * h0;
  model.p0 = pseudo_inverse(k0, cfg.svd_tolerance, info);
  model.beta0 = model.p0 * (h0.transpose() * (w0.asDiagonal() * t_scaled));

  if (!model.beta0.allFinite() || !model.p0.allFinite())
    throw NumericError("offline training produced non-finite artifacts");

  if (info != nullptr) {
    info->rows_used = n;
    const Vector residual = h0 * model.beta0 - t_scaled;
    info->residual_rmse_scaled = std::sqrt(residual.squaredNorm() / static_cast<double>(n));
  }
  return model;
}

}  // namespace wrelm
