#pragma once

#include "wrelm/trainer.hpp"

#include <vector>

namespace wrelm {

// FIFO of the r most recent (scaled feature row, scaled next-step target)
// pairs. Each entry caches its hidden-layer row so repeated adaptations
// reuse it. Entry k pairs the features observed at one step with the
// target observed at the following step.
class RingBuffer {
 public:
  explicit RingBuffer(Index capacity);

  Index capacity() const { return capacity_; }
  Index size() const { return static_cast<Index>(count_); }
  bool empty() const { return count_ == 0; }
  void clear();

  // Scale the pair with the model's frozen scaler, compute and cache the
  // hidden row, append; evicts the oldest entry at capacity. Throws
  // ValidationError on arity mismatch or non-finite input, leaving the
  // buffer unchanged.
  void push_pair(const OfflineModel& model, const Eigen::Ref<const Vector>& x_raw,
                 double t_next_raw);

  // Logical (oldest-first) access.
  const Vector& features(Index i) const { return entry(i).x; }
  const Vector& hidden(Index i) const { return entry(i).h; }
  double target(Index i) const { return entry(i).t; }

  Matrix hidden_matrix() const;  // size() x n_neurons, oldest first
  Vector targets() const;

 private:
  struct Entry {
    Vector x;
    Vector h;
    double t = 0.0;
  };

  const Entry& entry(Index i) const;

  Index capacity_;
  std::vector<Entry> slots_;
  size_t head_ = 0;  // index of the oldest entry
  size_t count_ = 0;
};

// Positive diagonal weights for the ring entries. Defaults to identity.
// A per-slot vector is aligned newest-last: with a partially filled ring of
// m entries, the last m weights apply.
class OnlineWeights {
 public:
  OnlineWeights() = default;
  static OnlineWeights uniform(double w);
  static OnlineWeights per_slot(Vector newest_last);

  // Diagonal for a ring of m entries, oldest first.
  Vector resolve(Index m) const;

 private:
  double uniform_ = 1.0;
  Vector slots_;
};

// One-shot correction of beta0 from the current ring contents. beta1 is
// recomputed from the frozen (p0, beta0) on every call; no updated
// covariance is carried across steps.
struct AdaptedState {
  Vector beta1;
  Index ring_len = 0;
  const OfflineModel* model = nullptr;
};

//   A = P0 H1^T,  B = H1 A
//   beta1 = beta0 + A (W1^-1 + B)^-1 (T1 - H1 beta0)
// The m x m system is solved directly (LDLT); if the condition estimate
// exceeds 1e12 or the factorization fails, an SVD pseudo-inverse is used.
// An empty ring returns beta0 unchanged.
AdaptedState adapt(const OfflineModel& model, const RingBuffer& ring,
                   const OnlineWeights& w1 = {});

// Scale x_next, build one hidden row, dot with beta1, return the
// prediction in original target units.
double predict(const OfflineModel& model, const AdaptedState& state,
               const Eigen::Ref<const Vector>& x_next_raw);

struct StepResult {
  double prediction = 0.0;  // original target units
  double beta1_norm = 0.0;
  Index ring_len = 0;
  double push_us = 0.0;
  double adapt_us = 0.0;
  double predict_us = 0.0;

  double total_us() const { return push_us + adapt_us + predict_us; }
};

// push_pair(x_observed, t_observed), adapt, then predict for x_upcoming.
// The prediction uses only pairs completed strictly before x_upcoming's step.
StepResult step(const OfflineModel& model, RingBuffer& ring, const OnlineWeights& w1,
                const Eigen::Ref<const Vector>& x_observed, double t_observed,
                const Eigen::Ref<const Vector>& x_upcoming);

}  // namespace wrelm
