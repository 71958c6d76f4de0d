#include <algorithm>
#include <cmath>
#include <string>

#include "ugm/errors.hpp"
#include "ugm/problem.hpp"

namespace ugm {

namespace {

void check_shape(const Matrix& A, const Vector& b, const char* what) {
  if (A.rows() < 1 || A.cols() < 1) throw UsageError(std::string(what) + ": matrix must be at least 1x1");
  if (b.size() != A.rows())
    throw UsageError(std::string(what) + ": " + std::to_string(A.rows()) + " rows but " + std::to_string(b.size()) +
                     " targets");
}

void check_point(const Matrix& A, const Vector& x) {
  if (x.size() != A.cols())
    throw UsageError("point has dimension " + std::to_string(x.size()) + ", expected " + std::to_string(A.cols()));
}

// log(1 + exp(t)) without overflow.
double softplus(double t) { return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t))); }

// 1 / (1 + exp(-t)) without overflow.
double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

}  // namespace

// ---------------------------------------------------------------- least squares

LeastSquares::LeastSquares(Matrix A, Vector b) : A_(std::move(A)), b_(std::move(b)) {
  check_shape(A_, b_, "least squares");
}

Evaluation LeastSquares::evaluate(const Vector& x) const {
  check_point(A_, x);
  const Vector r = A_ * x - b_;
  return {0.5 * r.squaredNorm(), A_.transpose() * r};
}

double LeastSquares::value(const Vector& x) const {
  check_point(A_, x);
  return 0.5 * (A_ * x - b_).squaredNorm();
}

Vector LeastSquares::term_gradient(Eigen::Index i, const Vector& x) const {
  const double r = A_.row(i).dot(x) - b_[i];
  return static_cast<double>(A_.rows()) * r * A_.row(i).transpose();
}

// ---------------------------------------------------------------- logistic

Logistic::Logistic(Matrix features, Vector labels) : A_(std::move(features)), labels_(std::move(labels)) {
  check_shape(A_, labels_, "logistic");
  for (Eigen::Index i = 0; i < labels_.size(); ++i) {
    if (labels_[i] != 1.0 && labels_[i] != -1.0)
      throw DataError("logistic: label " + std::to_string(labels_[i]) + " in row " + std::to_string(i + 1) +
                      " is not -1 or +1");
  }
}

Evaluation Logistic::evaluate(const Vector& x) const {
  check_point(A_, x);
  const Vector margins = labels_.cwiseProduct(A_ * x);
  Evaluation out{0.0, Vector::Zero(A_.cols())};
  Vector weights(A_.rows());
  for (Eigen::Index i = 0; i < A_.rows(); ++i) {
    out.value += softplus(-margins[i]);
    weights[i] = -labels_[i] * sigmoid(-margins[i]);
  }
  out.grad = A_.transpose() * weights;
  return out;
}

double Logistic::value(const Vector& x) const {
  check_point(A_, x);
  const Vector margins = labels_.cwiseProduct(A_ * x);
  double v = 0.0;
  for (Eigen::Index i = 0; i < margins.size(); ++i) v += softplus(-margins[i]);
  return v;
}

Vector Logistic::term_gradient(Eigen::Index i, const Vector& x) const {
  const double margin = labels_[i] * A_.row(i).dot(x);
  return static_cast<double>(A_.rows()) * (-labels_[i] * sigmoid(-margin)) * A_.row(i).transpose();
}

// ---------------------------------------------------------------- p-power residual

PPowerResidual::PPowerResidual(Matrix A, Vector b, double p) : A_(std::move(A)), b_(std::move(b)), p_(p) {
  check_shape(A_, b_, "p-power");
  if (!(p_ >= 1.0 && p_ <= 2.0)) throw UsageError("p-power: p must lie in [1, 2], got " + std::to_string(p_));
}

double PPowerResidual::residual_power(double r) const { return std::pow(std::abs(r), p_); }

// d/dr |r|^p, taking 0 at r = 0 (the zero subgradient when p = 1).
double PPowerResidual::residual_slope(double r) const {
  if (r == 0.0) return 0.0;
  return p_ * std::copysign(std::pow(std::abs(r), p_ - 1.0), r);
}

Evaluation PPowerResidual::evaluate(const Vector& x) const {
  check_point(A_, x);
  const Vector r = A_ * x - b_;
  const double inv_m = 1.0 / static_cast<double>(A_.rows());
  Vector slopes(r.size());
  double v = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    v += residual_power(r[i]);
    slopes[i] = residual_slope(r[i]);
  }
  return {v * inv_m, inv_m * (A_.transpose() * slopes)};
}

double PPowerResidual::value(const Vector& x) const {
  check_point(A_, x);
  const Vector r = A_ * x - b_;
  double v = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i) v += residual_power(r[i]);
  return v / static_cast<double>(A_.rows());
}

Vector PPowerResidual::term_gradient(Eigen::Index i, const Vector& x) const {
  const double r = A_.row(i).dot(x) - b_[i];
  return residual_slope(r) * A_.row(i).transpose();
}

// ---------------------------------------------------------------- linear

LinearFunction::LinearFunction(Vector c, double offset) : c_(std::move(c)), offset_(offset) {
  if (c_.size() < 1) throw UsageError("linear function: empty coefficient vector");
}

Evaluation LinearFunction::evaluate(const Vector& x) const {
  if (x.size() != c_.size()) throw UsageError("linear function: dimension mismatch");
  return {c_.dot(x) + offset_, c_};
}

}  // namespace ugm
