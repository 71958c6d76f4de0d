#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <utility>

#include "ugm/metric.hpp"

namespace ugm {

/// Ball {x : ||x - center|| <= radius} in the B-norm. Its diameter is 2 * radius.
struct BallDomain {
  Vector center;
  double radius = 1.0;

  double diameter() const noexcept { return 2.0 * radius; }
  bool contains(const Vector& x, const MetricSpace& metric, double rel_tol = 1e-9) const;

  static BallDomain centered(Eigen::Index dim, double radius);
};

struct Evaluation {
  double value = 0.0;
  Vector grad;
};

/// The smooth-or-not part f of F = f + psi. Implementations are immutable after
/// construction and may be evaluated from several threads at once.
class SmoothFunction {
 public:
  virtual ~SmoothFunction() = default;

  virtual Eigen::Index dim() const = 0;
  virtual Evaluation evaluate(const Vector& x) const = 0;
  virtual double value(const Vector& x) const { return evaluate(x).value; }
};

/// f(x) = (1/m) sum_i f_i(x). Used by the mini-batch oracle.
class FiniteSumFunction : public SmoothFunction {
 public:
  virtual Eigen::Index num_terms() const = 0;
  // Gradient of the i-th term f_i, so that the mean over i is f'(x).
  virtual Vector term_gradient(Eigen::Index i, const Vector& x) const = 0;
};

/// f(x) = 1/2 ||A x - b||_2^2.
class LeastSquares final : public FiniteSumFunction {
 public:
  LeastSquares(Matrix A, Vector b);

  Eigen::Index dim() const override { return A_.cols(); }
  Evaluation evaluate(const Vector& x) const override;
  double value(const Vector& x) const override;
  Eigen::Index num_terms() const override { return A_.rows(); }
  Vector term_gradient(Eigen::Index i, const Vector& x) const override;

  const Matrix& A() const noexcept { return A_; }
  const Vector& b() const noexcept { return b_; }

 private:
  Matrix A_;
  Vector b_;
};

/// f(x) = sum_i log(1 + exp(-b_i <a_i, x>)), labels b_i in {-1, +1}.
class Logistic final : public FiniteSumFunction {
 public:
  Logistic(Matrix features, Vector labels);

  Eigen::Index dim() const override { return A_.cols(); }
  Evaluation evaluate(const Vector& x) const override;
  double value(const Vector& x) const override;
  Eigen::Index num_terms() const override { return A_.rows(); }
  Vector term_gradient(Eigen::Index i, const Vector& x) const override;

 private:
  Matrix A_;
  Vector labels_;
};

/// f(x) = (1/m) sum_i |<a_i, x> - b_i|^p with p in [1, 2]; Hoelder smooth with nu = p - 1.
class PPowerResidual final : public FiniteSumFunction {
 public:
  PPowerResidual(Matrix A, Vector b, double p);

  Eigen::Index dim() const override { return A_.cols(); }
  Evaluation evaluate(const Vector& x) const override;
  double value(const Vector& x) const override;
  Eigen::Index num_terms() const override { return A_.rows(); }
  Vector term_gradient(Eigen::Index i, const Vector& x) const override;

  double p() const noexcept { return p_; }

 private:
  double residual_power(double r) const;
  double residual_slope(double r) const;

  Matrix A_;
  Vector b_;
  double p_;
};

/// f(x) = <c, x> + offset.
class LinearFunction final : public SmoothFunction {
 public:
  explicit LinearFunction(Vector c, double offset = 0.0);

  Eigen::Index dim() const override { return c_.size(); }
  Evaluation evaluate(const Vector& x) const override;

 private:
  Vector c_;
  double offset_;
};

/// F = f + indicator of a B-metric ball.
class CompositeObjective {
 public:
  CompositeObjective(std::shared_ptr<const SmoothFunction> f, BallDomain domain, MetricSpace metric,
                     std::string label = {});

  Eigen::Index dim() const noexcept { return metric_.dim(); }
  const SmoothFunction& f() const noexcept { return *f_; }
  std::shared_ptr<const SmoothFunction> f_shared() const noexcept { return f_; }
  const BallDomain& domain() const noexcept { return domain_; }
  const MetricSpace& metric() const noexcept { return metric_; }
  const std::string& label() const noexcept { return label_; }

  Evaluation evaluate(const Vector& x) const;
  double value(const Vector& x) const;

  // Null when f is not a finite sum.
  const FiniteSumFunction* finite_sum() const noexcept;

 private:
  std::shared_ptr<const SmoothFunction> f_;
  BallDomain domain_;
  MetricSpace metric_;
  std::string label_;
};

CompositeObjective least_squares_objective(Matrix A, Vector b, double radius = 1.0);
CompositeObjective logistic_objective(Matrix features, Vector labels, double radius = 1.0);
CompositeObjective p_power_objective(Matrix A, Vector b, double p, double radius = 1.0);

/// Metric projection onto the ball (radial scaling toward the center).
Vector project_ball(const Vector& x, const BallDomain& domain, const MetricSpace& metric);

/// argmin over the ball of <c, x> + (H/2) ||x - anchor||^2.
///
/// H = 0 reduces to linear minimization over the ball; c = 0 returns the anchor.
/// Throws UsageError if the anchor lies outside the ball by more than 1e-9
/// relative to the radius.
Vector prox_step(const Vector& c, const Vector& anchor, double H, const BallDomain& domain,
                 const MetricSpace& metric);

/// Running averaged linearization of f used for the computable optimality gap.
struct CertificateAccumulator {
  std::int64_t k = 0;
  Vector sum_g;
  double sum_affine_const = 0.0;
  double best_F = std::numeric_limits<double>::infinity();
  Vector best_x;
};

/// Adds the linearization f_k + <g_k, x - x_k> and offers x_k as best-iterate candidate.
void certificate_update(CertificateAccumulator& acc, const Vector& x_k, const Vector& g_k, double f_k,
                        double F_k);

/// Offers a candidate best iterate without adding a linearization.
/// Ties keep the earlier point.
void certificate_observe(CertificateAccumulator& acc, const Vector& x, double F);

struct CertificateGap {
  double phi_star;  // min over the ball of the averaged model; a lower bound on F*
  double eps_star;  // best_F - phi_star
};

CertificateGap certificate_gap(const CertificateAccumulator& acc, const BallDomain& domain,
                               const MetricSpace& metric);

/// Uniform point in the ball. The generator is advanced.
class Philox;
Vector random_point_in_ball(const BallDomain& domain, const MetricSpace& metric, Philox& rng);

/// Lower estimate of the Hoelder constant L_nu by sampling random pairs in the ball:
/// max ||g(x) - g(y)||_* / ||x - y||^nu.
double estimate_holder_constant(const CompositeObjective& obj, double nu, int n_pairs, std::uint64_t seed);

}  // namespace ugm
