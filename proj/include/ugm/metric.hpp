#pragma once

#include <Eigen/Dense>

namespace ugm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Diagonal Euclidean metric ||x|| = <Bx, x>^(1/2) with dual ||s||_* = <s, B^-1 s>^(1/2).
///
/// Only the diagonal of B is stored. All operations are pure and safe to call
/// concurrently.
class MetricSpace {
 public:
  explicit MetricSpace(Vector b_diag);

  static MetricSpace identity(Eigen::Index dim);

  Eigen::Index dim() const noexcept { return b_diag_.size(); }
  const Vector& b_diag() const noexcept { return b_diag_; }

  double norm(const Vector& x) const;
  double dual_norm(const Vector& s) const;

  // B x, maps a primal direction to the dual space.
  Vector to_dual(const Vector& x) const;
  // B^-1 s, maps a dual vector (gradient) to the primal space.
  Vector to_primal(const Vector& s) const;

  void check_dim(const Vector& x, const char* what) const;

 private:
  Vector b_diag_;
  Vector b_inv_;
};

/// Standard inner product <s, x>.
double pairing(const Vector& s, const Vector& x);

bool all_finite(const Vector& x);

}  // namespace ugm
