#pragma once

#include "wrelm/activation.hpp"
#include "wrelm/types.hpp"

#include <cstdint>

namespace wrelm {

// Fixed random input weights of the hidden layer. matrix is z x n_neurons;
// column i holds neuron i's weight vector. There is no bias term.
struct InputWeights {
  std::uint64_t seed = 0;
  Index z = 0;
  Index n_neurons = 0;
  Matrix matrix;
};

// Draw a z x n_neurons standard-normal weight matrix from
// SplitMix64(seed) + Box-Muller. Samples fill column by column (neuron by
// neuron), each column top to bottom, so the draw order is pinned.
InputWeights init_input_weights(std::uint64_t seed, Index z, Index n_neurons);

// One hidden-layer row: element i = activation(x_scaled . column_i).
// x_scaled must have length z.
Vector hidden_row(const InputWeights& w, const Eigen::Ref<const Vector>& x_scaled,
                  Activation kind);

// Row-wise hidden_row over an n x z matrix of scaled inputs; result n x n_neurons.
Matrix hidden_matrix(const InputWeights& w, const Eigen::Ref<const Matrix>& x_scaled,
                     Activation kind);

}  // namespace wrelm
