#pragma once

#include "wrelm/types.hpp"

namespace wrelm::oracle {

// Brute-force weighted least squares on explicit stacked matrices. Used by
// tests and the verify command as an independent reference; deliberately
// implemented against raw matrices with its own SVD pseudo-inverse and no
// imports from the trainer or adapter.
struct StackedSystem {
  Matrix h;  // n x n_neurons
  Vector w;  // n positive diagonal weights
  Vector t;  // n targets
};

// beta = pinv(H^T W H) H^T W T, singular values below
// svd_tolerance * sigma_max treated as zero.
Vector batch_weighted_ls(const StackedSystem& sys, double svd_tolerance = 1e-12);

// Vertical concatenation with block-diagonal weights. Either block may be
// empty (zero rows).
StackedSystem stack(const Matrix& h0, const Vector& w0, const Vector& t0,
                    const Matrix& h1, const Vector& w1, const Vector& t1);

}  // namespace wrelm::oracle
