#include "ugm/metric.hpp"

#include <cmath>
#include <string>

#include "ugm/errors.hpp"

namespace ugm {

MetricSpace::MetricSpace(Vector b_diag) : b_diag_(std::move(b_diag)) {
  if (b_diag_.size() < 1) throw UsageError("metric dimension must be at least 1");
  for (Eigen::Index i = 0; i < b_diag_.size(); ++i) {
    if (!(b_diag_[i] > 0.0) || !std::isfinite(b_diag_[i]))
      throw UsageError("metric diagonal entry " + std::to_string(i) + " must be positive and finite");
  }
  b_inv_ = b_diag_.cwiseInverse();
}

MetricSpace MetricSpace::identity(Eigen::Index dim) {
  if (dim < 1) throw UsageError("metric dimension must be at least 1");
  return MetricSpace(Vector::Ones(dim));
}

void MetricSpace::check_dim(const Vector& x, const char* what) const {
  if (x.size() != dim())
    throw UsageError(std::string(what) + ": dimension " + std::to_string(x.size()) + " does not match metric dimension " +
                     std::to_string(dim()));
}

double MetricSpace::norm(const Vector& x) const {
  check_dim(x, "norm");
  return std::sqrt(x.cwiseAbs2().dot(b_diag_));
}

double MetricSpace::dual_norm(const Vector& s) const {
  check_dim(s, "dual_norm");
  return std::sqrt(s.cwiseAbs2().dot(b_inv_));
}

Vector MetricSpace::to_dual(const Vector& x) const {
  check_dim(x, "to_dual");
  return x.cwiseProduct(b_diag_);
}

Vector MetricSpace::to_primal(const Vector& s) const {
  check_dim(s, "to_primal");
  return s.cwiseProduct(b_inv_);
}

double pairing(const Vector& s, const Vector& x) {
  if (s.size() != x.size())
    throw UsageError("pairing: dimensions " + std::to_string(s.size()) + " and " + std::to_string(x.size()) + " differ");
  return s.dot(x);
}

bool all_finite(const Vector& x) { return x.allFinite(); }

}  // namespace ugm
