#pragma once

#include "wrelm/dataset.hpp"
#include "wrelm/elm.hpp"
#include "wrelm/scaler.hpp"
#include "wrelm/types.hpp"

#include <optional>

namespace wrelm {

struct PruneWindow {
  Index n_before = 6;
  Index n_after = 9;
};

struct TrainConfig {
  std::uint64_t seed = 7898198;
  Index n_neurons = 64;
  // Offline weighting: scalar by default; a full per-sample diagonal (one
  // entry per valid training row, in row order) takes precedence when set.
  double w0 = 3.5e-3;
  std::optional<Vector> w0_diag;
  double p_low = 0.1;
  double p_high = 99.9;
  Activation activation = Activation::pade;
  // Singular values below svd_tolerance * sigma_max are treated as zero.
  double svd_tolerance = 1e-12;
  std::optional<PruneWindow> prune;
};

// Frozen offline artifacts. Nothing here mutates after training; the
// online path reads p0/beta0 and never writes back.
struct OfflineModel {
  InputWeights weights;
  Scaler scaler;  // z + 1 columns: the z features, then the target
  Matrix p0;      // n_neurons x n_neurons
  Vector beta0;   // n_neurons
  double w0 = 1.0;
  std::optional<Vector> w0_diag;
  Activation activation = Activation::pade;
  double svd_tolerance = 1e-12;

  Index z() const { return weights.z; }
  Index n_neurons() const { return weights.n_neurons; }

  // Scale a raw feature row with the frozen bounds (saturating).
  Vector scale_features(const Eigen::Ref<const Vector>& raw) const;
  double scale_target(double raw) const { return scaler.scale(z(), raw); }
  double unscale_target(double scaled) const { return scaler.unscale(z(), scaled); }
};

// Optional training diagnostics, filled by train_offline when requested.
struct TrainInfo {
  double residual_rmse_scaled = 0.0;  // over the scaled training targets
  double gram_sigma_max = 0.0;
  double gram_sigma_min = 0.0;        // smallest retained singular value
  Index rank = 0;
  Index truncated = 0;                // singular values below the cutoff
  Index rows_used = 0;
};

// Keep only rows within n_before positions before and n_after positions
// after (inclusive of the first changed row) each set-point change.
// Windows may overlap; each row appears once, order preserved.
SeriesDataset prune_transients(const SeriesDataset& ds, Index n_before, Index n_after);

// Weighted batch training. Fits the scaler on the valid rows' features and
// target column, builds the hidden layer matrix, and solves
//   P0 = pinv(H0^T W0 H0),  beta0 = P0 H0^T W0 T0
// with an SVD pseudo-inverse truncated at svd_tolerance * sigma_max.
OfflineModel train_offline(const SeriesDataset& ds, const TrainConfig& cfg,
                           TrainInfo* info = nullptr);

}  // namespace wrelm
