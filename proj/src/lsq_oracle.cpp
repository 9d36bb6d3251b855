#include "wrelm/lsq_oracle.hpp"

#include <Eigen/SVD>

namespace wrelm::oracle {

Vector batch_weighted_ls(const StackedSystem& sys, double svd_tolerance) {
  if (sys.h.rows() != sys.w.size() || sys.h.rows() != sys.t.size())
    throw ValidationError("stacked system dimensions are inconsistent");
  if (!(sys.w.array() > 0.0).all())
    throw ValidationError("stacked system weights must be positive");

  // Normal equations, solved via a full Jacobi SVD pseudo-inverse with the
  // same relative cutoff convention as the trained model.
  const Matrix gram = sys.h.transpose() * sys.w.asDiagonal() * sys.h;
  const Vector rhs = sys.h.transpose() * (sys.w.asDiagonal() * sys.t);

  Eigen::JacobiSVD<Matrix> svd(gram, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const double cutoff = svd_tolerance * (sv.size() > 0 ? sv[0] : 0.0);
  Vector u = svd.matrixU().transpose() * rhs;
  for (Index i = 0; i < sv.size(); ++i) u[i] = sv[i] > cutoff ? u[i] / sv[i] : 0.0;
  return svd.matrixV() * u;
}

StackedSystem stack(const Matrix& h0, const Vector& w0, const Vector& t0,
                    const Matrix& h1, const Vector& w1, const Vector& t1) {
  if (h0.rows() != w0.size() || h0.rows() != t0.size())
    throw ValidationError("offline block dimensions are inconsistent");
  if (h1.rows() != w1.size() || h1.rows() != t1.size())
    throw ValidationError("online block dimensions are inconsistent");
  if (h1.rows() > 0 && h0.rows() > 0 && h0.cols() != h1.cols())
    throw ValidationError("blocks disagree on neuron count");

  StackedSystem sys;
  const Index n = h0.rows() + h1.rows();
  sys.h.resize(n, h0.rows() > 0 ? h0.cols() : h1.cols());
  sys.w.resize(n);
  sys.t.resize(n);
  if (h0.rows() > 0) {
    sys.h.topRows(h0.rows()) = h0;
    sys.w.head(w0.size()) = w0;
    sys.t.head(t0.size()) = t0;
  }
  if (h1.rows() > 0) {
    sys.h.bottomRows(h1.rows()) = h1;
    sys.w.tail(w1.size()) = w1;
    sys.t.tail(t1.size()) = t1;
  }
  return sys;
}

}  // namespace wrelm::oracle
