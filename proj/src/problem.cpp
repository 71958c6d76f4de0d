#include "ugm/problem.hpp"

#include <cmath>
#include <string>

#include "ugm/errors.hpp"
#include "ugm/random.hpp"

namespace ugm {

bool BallDomain::contains(const Vector& x, const MetricSpace& metric, double rel_tol) const {
  return metric.norm(x - center) <= radius * (1.0 + rel_tol);
}

BallDomain BallDomain::centered(Eigen::Index dim, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw UsageError("ball radius must be positive and finite");
  return {Vector::Zero(dim), radius};
}

CompositeObjective::CompositeObjective(std::shared_ptr<const SmoothFunction> f, BallDomain domain, MetricSpace metric,
                                       std::string label)
    : f_(std::move(f)), domain_(std::move(domain)), metric_(std::move(metric)), label_(std::move(label)) {
  if (!f_) throw UsageError("objective: missing function");
  if (f_->dim() != metric_.dim()) throw UsageError("objective: function and metric dimensions differ");
  metric_.check_dim(domain_.center, "objective domain center");
  if (!(domain_.radius > 0.0) || !std::isfinite(domain_.radius))
    throw UsageError("objective: ball radius must be positive and finite");
}

Evaluation CompositeObjective::evaluate(const Vector& x) const { return f_->evaluate(x); }

double CompositeObjective::value(const Vector& x) const { return f_->value(x); }

const FiniteSumFunction* CompositeObjective::finite_sum() const noexcept {
  return dynamic_cast<const FiniteSumFunction*>(f_.get());
}

CompositeObjective least_squares_objective(Matrix A, Vector b, double radius) {
  const auto n = A.cols();
  auto f = std::make_shared<LeastSquares>(std::move(A), std::move(b));
  return {f, BallDomain::centered(n, radius), MetricSpace::identity(n), "ls"};
}

CompositeObjective logistic_objective(Matrix features, Vector labels, double radius) {
  const auto n = features.cols();
  auto f = std::make_shared<Logistic>(std::move(features), std::move(labels));
  return {f, BallDomain::centered(n, radius), MetricSpace::identity(n), "logistic"};
}

CompositeObjective p_power_objective(Matrix A, Vector b, double p, double radius) {
  const auto n = A.cols();
  auto f = std::make_shared<PPowerResidual>(std::move(A), std::move(b), p);
  return {f, BallDomain::centered(n, radius), MetricSpace::identity(n), "ppower"};
}

Vector project_ball(const Vector& x, const BallDomain& domain, const MetricSpace& metric) {
  const Vector d = x - domain.center;
  const double dist = metric.norm(d);
  if (dist <= domain.radius) return x;
  return domain.center + (domain.radius / dist) * d;
}

Vector prox_step(const Vector& c, const Vector& anchor, double H, const BallDomain& domain,
                 const MetricSpace& metric) {
  metric.check_dim(c, "prox_step linear term");
  metric.check_dim(anchor, "prox_step anchor");
  if (!(H >= 0.0) || !std::isfinite(H)) throw UsageError("prox_step: H must be finite and nonnegative");
  if (!domain.contains(anchor, metric, 1e-9)) throw UsageError("prox_step: anchor lies outside the domain");

  if (c.isZero(0.0)) return anchor;
  if (H == 0.0) {
    // Linear minimization over the ball.
    return domain.center - (domain.radius / metric.dual_norm(c)) * metric.to_primal(c);
  }
  return project_ball(anchor - metric.to_primal(c) / H, domain, metric);
}

void certificate_observe(CertificateAccumulator& acc, const Vector& x, double F) {
  if (F < acc.best_F) {
    acc.best_F = F;
    acc.best_x = x;
  }
}

void certificate_update(CertificateAccumulator& acc, const Vector& x_k, const Vector& g_k, double f_k, double F_k) {
  if (x_k.size() != g_k.size()) throw UsageError("certificate_update: point and gradient dimensions differ");
  if (acc.k == 0) {
    acc.sum_g = g_k;
  } else {
    if (acc.sum_g.size() != g_k.size()) throw UsageError("certificate_update: dimension changed between updates");
    acc.sum_g += g_k;
  }
  acc.sum_affine_const += f_k - g_k.dot(x_k);
  ++acc.k;
  certificate_observe(acc, x_k, F_k);
}

CertificateGap certificate_gap(const CertificateAccumulator& acc, const BallDomain& domain,
                               const MetricSpace& metric) {
  if (acc.k < 1) throw UsageError("certificate_gap: no linearizations accumulated");
  const double inv_k = 1.0 / static_cast<double>(acc.k);
  const Vector mean_g = acc.sum_g * inv_k;
  const double phi_star =
      acc.sum_affine_const * inv_k + mean_g.dot(domain.center) - domain.radius * metric.dual_norm(mean_g);
  return {phi_star, acc.best_F - phi_star};
}

Vector random_point_in_ball(const BallDomain& domain, const MetricSpace& metric, Philox& rng) {
  const auto n = metric.dim();
  Vector dir(n);
  for (Eigen::Index i = 0; i < n; ++i) dir[i] = rng.next_gaussian() / std::sqrt(metric.b_diag()[i]);
  const double len = metric.norm(dir);
  if (len == 0.0) return domain.center;
  const double scale = domain.radius * std::pow(rng.next_uniform(), 1.0 / static_cast<double>(n));
  return domain.center + (scale / len) * dir;
}

double estimate_holder_constant(const CompositeObjective& obj, double nu, int n_pairs, std::uint64_t seed) {
  if (!(nu >= 0.0 && nu <= 1.0)) throw UsageError("estimate_holder_constant: nu must lie in [0, 1]");
  Philox rng(seed, 0);
  double best = 0.0;
  for (int i = 0; i < n_pairs; ++i) {
    const Vector x = random_point_in_ball(obj.domain(), obj.metric(), rng);
    const Vector y = random_point_in_ball(obj.domain(), obj.metric(), rng);
    const double dist = obj.metric().norm(x - y);
    if (dist == 0.0) continue;
    const double diff = obj.metric().dual_norm(obj.evaluate(x).grad - obj.evaluate(y).grad);
    best = std::max(best, diff / std::pow(dist, nu));
  }
  return best;
}

}  // namespace ugm
