#include "wrelm/adapter.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include <chrono>
#include <cmath>

namespace wrelm {

RingBuffer::RingBuffer(Index capacity) : capacity_(capacity) {
  if (capacity < 1) throw ValidationError("ring capacity must be >= 1");
  slots_.resize(static_cast<size_t>(capacity));
}

void RingBuffer::clear() {
  head_ = 0;
  count_ = 0;
}

const RingBuffer::Entry& RingBuffer::entry(Index i) const {
  if (i < 0 || i >= size()) throw ValidationError("ring index out of range");
  return slots_[(head_ + static_cast<size_t>(i)) % slots_.size()];
}

void RingBuffer::push_pair(const OfflineModel& model,
                           const Eigen::Ref<const Vector>& x_raw, double t_next_raw) {
  if (x_raw.size() != model.z())
    throw ValidationError("ring pair has " + std::to_string(x_raw.size()) +
                          " features, model expects " + std::to_string(model.z()));
  if (!x_raw.allFinite() || !std::isfinite(t_next_raw))
    throw ValidationError("ring pair contains non-finite values");

  Vector x_scaled = model.scale_features(x_raw);
  Vector h = hidden_row(model.weights, x_scaled, model.activation);
  const double t_scaled = model.scale_target(t_next_raw);

  const size_t slot = (head_ + count_) % slots_.size();
  slots_[slot].x = std::move(x_scaled);
  slots_[slot].h = std::move(h);
  slots_[slot].t = t_scaled;
  if (count_ < slots_.size()) {
    ++count_;
  } else {
    head_ = (head_ + 1) % slots_.size();  // overwrote the oldest
  }
}

Matrix RingBuffer::hidden_matrix() const {
  Matrix h(size(), size() > 0 ? entry(0).h.size() : 0);
  for (Index i = 0; i < size(); ++i) h.row(i) = entry(i).h.transpose();
  return h;
}

Vector RingBuffer::targets() const {
  Vector t(size());
  for (Index i = 0; i < size(); ++i) t[i] = entry(i).t;
  return t;
}

OnlineWeights OnlineWeights::uniform(double w) {
  if (!(w > 0.0) || !std::isfinite(w))
    throw ValidationError("online weight must be positive and finite");
  OnlineWeights out;
  out.uniform_ = w;
  return out;
}

OnlineWeights OnlineWeights::per_slot(Vector newest_last) {
  if (newest_last.size() < 1) throw ValidationError("per-slot weights must be non-empty");
  if (!(newest_last.array() > 0.0).all() || !newest_last.allFinite())
    throw ValidationError("online weights must be positive and finite");
  OnlineWeights out;
  out.slots_ = std::move(newest_last);
  return out;
}

Vector OnlineWeights::resolve(Index m) const {
  if (slots_.size() == 0) return Vector::Constant(m, uniform_);
  if (m > slots_.size())
    throw ValidationError("ring holds " + std::to_string(m) + " entries but only " +
                          std::to_string(slots_.size()) + " slot weights are configured");
  return slots_.tail(m);
}

namespace {

// Pseudo-inverse solve of the small symmetric system; fallback path for
// ill-conditioned (W1^-1 + B).
Vector svd_solve(const Matrix& m, const Vector& rhs, double rel_tolerance) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  const double cutoff = rel_tolerance * (sv.size() > 0 ? sv[0] : 0.0);
  Vector u = svd.matrixU().transpose() * rhs;
  for (Index i = 0; i < sv.size(); ++i) u[i] = sv[i] > cutoff ? u[i] / sv[i] : 0.0;
  return svd.matrixV() * u;
}

}  // namespace

AdaptedState adapt(const OfflineModel& model, const RingBuffer& ring,
                   const OnlineWeights& w1) {
  AdaptedState state;
  state.model = &model;
  state.ring_len = ring.size();
  if (ring.empty()) {
    state.beta1 = model.beta0;
    return state;
  }

  const Index m = ring.size();
  const Matrix h1 = ring.hidden_matrix();
  const Vector t1 = ring.targets();
  const Vector w = w1.resolve(m);

  const Matrix a = model.p0 * h1.transpose();  // n_neurons x m
  Matrix inner = h1 * a;                       // B, m x m
  inner.diagonal() += w.cwiseInverse();        // W1^-1 + B
  const Vector residual = t1 - h1 * model.beta0;

  Vector correction;
  bool fallback = false;
  Eigen::LDLT<Matrix> ldlt(inner);
  if (ldlt.info() == Eigen::Success) {
    const Vector d = ldlt.vectorD();
    const double d_max = d.maxCoeff();
    const double d_min = d.minCoeff();
    if (d_min <= 0.0 || d_max / d_min > 1e12)
      fallback = true;  // condition estimate from the factor diagonal
    else
      correction = ldlt.solve(residual);
  } else {
    fallback = true;
  }
  if (fallback) correction = svd_solve(inner, residual, model.svd_tolerance);

  state.beta1 = model.beta0 + a * correction;
  if (!state.beta1.allFinite())
    throw NumericError("online adaptation produced a non-finite solution");
  return state;
}

double predict(const OfflineModel& model, const AdaptedState& state,
               const Eigen::Ref<const Vector>& x_next_raw) {
  if (!x_next_raw.allFinite())
    throw ValidationError("prediction input contains non-finite values");
  const Vector x_scaled = model.scale_features(x_next_raw);
  const Vector h = hidden_row(model.weights, x_scaled, model.activation);
  return model.unscale_target(h.dot(state.beta1));
}

StepResult step(const OfflineModel& model, RingBuffer& ring, const OnlineWeights& w1,
                const Eigen::Ref<const Vector>& x_observed, double t_observed,
                const Eigen::Ref<const Vector>& x_upcoming) {
  using clock = std::chrono::steady_clock;
  const auto us = [](clock::time_point a, clock::time_point b) {
    return std::chrono::duration<double, std::micro>(b - a).count();
  };

  StepResult out;
  const auto t0 = clock::now();
  ring.push_pair(model, x_observed, t_observed);
  const auto t1 = clock::now();
  const AdaptedState state = adapt(model, ring, w1);
  const auto t2 = clock::now();
  out.prediction = predict(model, state, x_upcoming);
  const auto t3 = clock::now();

  out.beta1_norm = state.beta1.norm();
  out.ring_len = state.ring_len;
  out.push_us = us(t0, t1);
  out.adapt_us = us(t1, t2);
  out.predict_us = us(t2, t3);
  return out;
}

}  // namespace wrelm
