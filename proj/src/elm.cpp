#include "wrelm/elm.hpp"

#include "wrelm/rng.hpp"

namespace wrelm {

InputWeights init_input_weights(std::uint64_t seed, Index z, Index n_neurons) {
  if (z < 1) throw ValidationError("input weights need z >= 1");
  if (n_neurons < 1) throw ValidationError("input weights need n_neurons >= 1");

  InputWeights w;
  w.seed = seed;
  w.z = z;
  w.n_neurons = n_neurons;
  w.matrix.resize(z, n_neurons);

  SplitMix64 rng(seed);
  BoxMuller gauss;
  for (Index neuron = 0; neuron < n_neurons; ++neuron)
    for (Index feature = 0; feature < z; ++feature)
      w.matrix(feature, neuron) = gauss.next(rng);
  return w;
}

Vector hidden_row(const InputWeights& w, const Eigen::Ref<const Vector>& x_scaled,
                  Activation kind) {
  if (x_scaled.size() != w.z)
    throw ValidationError("hidden_row arity mismatch: expected " + std::to_string(w.z) +
                          " features, got " + std::to_string(x_scaled.size()));
  Vector y = w.matrix.transpose() * x_scaled;
  for (Index i = 0; i < y.size(); ++i) y[i] = activate(y[i], kind);
  return y;
}

Matrix hidden_matrix(const InputWeights& w, const Eigen::Ref<const Matrix>& x_scaled,
                     Activation kind) {
  if (x_scaled.cols() != w.z)
    throw ValidationError("hidden_matrix arity mismatch: expected " + std::to_string(w.z) +
                          " columns, got " + std::to_string(x_scaled.cols()));
  Matrix h = x_scaled * w.matrix;
  for (Index r = 0; r < h.rows(); ++r)
    for (Index c = 0; c < h.cols(); ++c) h(r, c) = activate(h(r, c), kind);
  return h;
}

}  // namespace wrelm
