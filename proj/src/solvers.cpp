#include "ugm/solvers.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "ugm/errors.hpp"

namespace ugm {

double balance_update(const BalanceInputs& in) {
  if (!(in.omega > 0.0) || !(in.rho >= 0.0) || !(in.H >= 0.0) || std::isnan(in.beta))
    throw UsageError("balance_update: requires omega > 0, rho >= 0, H >= 0");
  const double excess = in.beta - in.H * in.rho;
  if (excess <= 0.0) return in.H;
  return in.H + excess / (in.omega + in.rho);
}

double reg_max_bound(double M, double nu, double H) {
  if (!(nu >= 0.0 && nu < 1.0)) throw UsageError("reg_max_bound: nu must lie in [0, 1)");
  if (!(H > 0.0)) throw UsageError("reg_max_bound: H must be positive");
  if (!(M >= 0.0)) throw UsageError("reg_max_bound: M must be nonnegative");
  if (M == 0.0) return 0.0;
  const double q = 1.0 - nu;
  return q / (2.0 * (1.0 + nu)) * std::pow(M, 2.0 / q) / std::pow(H, (1.0 + nu) / q);
}

double StepRule::at(std::int64_t k) const { return decaying ? c / std::sqrt(static_cast<double>(k + 1)) : c; }

namespace {

class RunClock {
 public:
  RunClock() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

Vector starting_point(const CompositeObjective& obj, const SolverOptions& opts) {
  if (opts.max_iters < 0) throw UsageError("max_iters must be nonnegative");
  if (opts.trace_every < 1) throw UsageError("trace_every must be positive");
  Vector x0 = opts.x0.value_or(obj.domain().center);
  obj.metric().check_dim(x0, "starting point");
  if (!obj.domain().contains(x0, obj.metric())) throw UsageError("starting point lies outside the domain");
  return x0;
}

void check_diameter(double D) {
  if (!(D > 0.0) || !std::isfinite(D)) throw UsageError("diameter D must be positive and finite");
}

bool evaluate_now(std::int64_t k, const SolverOptions& opts) {
  return k % opts.trace_every == 0 || k == opts.max_iters;
}

void emit(SolveResult& result, const SolverOptions& opts, TraceRecord rec) {
  result.trace.push_back(rec);
  if (opts.observer) opts.observer(result.trace.back());
}

// Running average of x_1..x_k plus the reported point.
struct Averager {
  Vector sum;
  std::int64_t count = 0;

  void add(const Vector& x) {
    if (count == 0) {
      sum = x;
    } else {
      sum += x;
    }
    ++count;
  }
  Vector mean() const { return sum / static_cast<double>(count); }
};

}  // namespace

SolveResult run_ugm(const CompositeObjective& obj, double D, const SolverOptions& opts) {
  check_diameter(D);
  const RunClock clock;
  const auto& metric = obj.metric();
  const auto& domain = obj.domain();
  const double omega = D * D;

  SolveResult result;
  Vector x = starting_point(obj, opts);
  result.x = x;
  if (opts.max_iters == 0) return result;

  Evaluation cur = obj.evaluate(x);
  std::uint64_t calls = 1;
  double H = 0.0;
  CertificateAccumulator cert;
  result.trace.reserve(static_cast<std::size_t>(opts.max_iters));

  for (std::int64_t k = 0; k < opts.max_iters; ++k) {
    certificate_update(cert, x, cur.grad, cur.value, cur.value);
    Vector x_next = prox_step(cur.grad, x, H, domain, metric);
    Evaluation next = obj.evaluate(x_next);
    ++calls;

    const Vector step = x_next - x;
    const double r = metric.norm(step);
    const double beta = next.value - cur.value - cur.grad.dot(step);
    const double H_next = balance_update({H, beta, 0.5 * r * r, omega});

    certificate_observe(cert, x_next, next.value);
    const CertificateGap gap = certificate_gap(cert, domain, metric);

    TraceRecord rec;
    rec.k = k + 1;
    rec.F = cert.best_F;
    rec.H = H_next;
    rec.r = r;
    rec.beta = beta;
    rec.cert_gap = gap.eps_star;
    rec.oracle_calls = calls;
    rec.wall_time_s = clock.seconds();
    emit(result, opts, rec);

    x = std::move(x_next);
    cur = std::move(next);
    H = H_next;
  }

  result.x = cert.best_x;
  result.oracle_calls = calls;
  result.certificate = std::move(cert);
  result.wall_time_s = clock.seconds();
  return result;
}

SolveResult run_usgm(const CompositeObjective& obj, GradientOracle& oracle, double D, const SolverOptions& opts) {
  check_diameter(D);
  const RunClock clock;
  const auto& metric = obj.metric();
  const auto& domain = obj.domain();
  const double omega = D * D;

  SolveResult result;
  Vector x = starting_point(obj, opts);
  result.x = x;
  if (opts.max_iters == 0) return result;

  Vector g = oracle.sample(x).g;
  double H = 0.0;
  Averager avg;
  result.trace.reserve(static_cast<std::size_t>(opts.max_iters));

  for (std::int64_t k = 0; k < opts.max_iters; ++k) {
    Vector x_next = prox_step(g, x, H, domain, metric);
    // Drawn only once x_next is fixed.
    Vector g_next = oracle.sample(x_next).g;

    const Vector step = x_next - x;
    const Vector g_diff = g_next - g;
    const double r = metric.norm(step);
    const double beta = g_diff.dot(step);
    const double H_next = balance_update({H, beta, 0.5 * r * r, omega});
    avg.add(x_next);

    TraceRecord rec;
    rec.k = k + 1;
    if (evaluate_now(rec.k, opts)) rec.F = obj.value(opts.report == Report::average ? avg.mean() : x_next);
    rec.H = H_next;
    rec.r = r;
    rec.beta = beta;
    rec.oracle_calls = oracle.calls();
    rec.wall_time_s = clock.seconds();
    rec.grad_diff = metric.dual_norm(g_diff);
    emit(result, opts, rec);

    x = std::move(x_next);
    g = std::move(g_next);
    H = H_next;
  }

  result.x = opts.report == Report::average ? avg.mean() : x;
  result.oracle_calls = oracle.calls();
  result.wall_time_s = clock.seconds();
  return result;
}

SolveResult run_usfgm(const CompositeObjective& obj, GradientOracle& oracle, double D, SurrogateMode mode,
                      const SolverOptions& opts) {
  check_diameter(D);
  if (mode == SurrogateMode::deterministic_bregman && !oracle.is_exact())
    throw UsageError("usfgm: deterministic Bregman surrogate requires the exact oracle");
  const RunClock clock;
  const auto& metric = obj.metric();
  const auto& domain = obj.domain();
  const double omega = D * D;

  SolveResult result;
  Vector x = starting_point(obj, opts);
  result.x = x;
  if (opts.max_iters == 0) return result;

  Vector v = x;
  double A = 0.0;
  double H = 0.0;
  result.trace.reserve(static_cast<std::size_t>(opts.max_iters));

  for (std::int64_t k = 0; k < opts.max_iters; ++k) {
    const double a = static_cast<double>(k + 1);
    const double A_next = A + a;
    const Vector y = (A * x + a * v) / A_next;
    const Vector g_y = oracle.sample(y).g;

    Vector v_next = prox_step(a * g_y, v, H, domain, metric);
    Vector x_next = (A * x + a * v_next) / A_next;
    const double r = metric.norm(v_next - v);

    double surrogate = 0.0;
    if (mode == SurrogateMode::stochastic_symmetrized) {
      const Vector g_x = oracle.sample(x_next).g;
      surrogate = (g_x - g_y).dot(x_next - y);
    } else {
      surrogate = obj.value(x_next) - obj.value(y) - g_y.dot(x_next - y);
    }
    const double beta = A_next * surrogate;
    const double H_next = balance_update({H, beta, 0.5 * r * r, omega});

    TraceRecord rec;
    rec.k = k + 1;
    if (evaluate_now(rec.k, opts)) rec.F = obj.value(x_next);
    rec.H = H_next;
    rec.r = r;
    rec.beta = beta;
    rec.oracle_calls = oracle.calls();
    rec.wall_time_s = clock.seconds();
    emit(result, opts, rec);

    x = std::move(x_next);
    v = std::move(v_next);
    A = A_next;
    H = H_next;
  }

  result.x = x;
  result.oracle_calls = oracle.calls();
  result.wall_time_s = clock.seconds();
  return result;
}

SolveResult run_projected_subgrad(const CompositeObjective& obj, GradientOracle& oracle, StepRule rule,
                                  const SolverOptions& opts) {
  if (!(rule.c >= 0.0) || !std::isfinite(rule.c)) throw UsageError("sgd: step size must be finite and >= 0");
  const RunClock clock;
  const auto& metric = obj.metric();
  const auto& domain = obj.domain();

  SolveResult result;
  Vector x = starting_point(obj, opts);
  result.x = x;
  if (opts.max_iters == 0) return result;

  Averager avg;
  result.trace.reserve(static_cast<std::size_t>(opts.max_iters));

  for (std::int64_t k = 0; k < opts.max_iters; ++k) {
    const Vector g = oracle.sample(x).g;
    const double step_size = rule.at(k);
    Vector x_next = project_ball(x - step_size * metric.to_primal(g), domain, metric);
    avg.add(x_next);

    TraceRecord rec;
    rec.k = k + 1;
    if (evaluate_now(rec.k, opts)) rec.F = obj.value(opts.report == Report::average ? avg.mean() : x_next);
    rec.H = step_size > 0.0 ? 1.0 / step_size : std::numeric_limits<double>::infinity();
    rec.r = metric.norm(x_next - x);
    rec.oracle_calls = oracle.calls();
    rec.wall_time_s = clock.seconds();
    emit(result, opts, rec);

    x = std::move(x_next);
  }

  result.x = opts.report == Report::average ? avg.mean() : x;
  result.oracle_calls = oracle.calls();
  result.wall_time_s = clock.seconds();
  return result;
}

SolveResult run_adagrad_norm(const CompositeObjective& obj, GradientOracle& oracle, double D,
                             AdagradVariant variant, const SolverOptions& opts) {
  check_diameter(D);
  const RunClock clock;
  const auto& metric = obj.metric();
  const auto& domain = obj.domain();

  SolveResult result;
  Vector x = starting_point(obj, opts);
  result.x = x;
  if (opts.max_iters == 0) return result;

  Vector g = oracle.sample(x).g;
  double sum_sq = 0.0;
  double H = 0.0;
  Averager avg;
  result.trace.reserve(static_cast<std::size_t>(opts.max_iters));

  for (std::int64_t k = 0; k < opts.max_iters; ++k) {
    Vector x_next = prox_step(g, x, H, domain, metric);
    Vector g_next = oracle.sample(x_next).g;

    const double diff = metric.dual_norm(g_next - g);
    const double gamma = variant == AdagradVariant::grad_diff ? diff : metric.dual_norm(g_next);
    sum_sq += gamma * gamma;
    const double H_next = std::sqrt(sum_sq) / D;
    avg.add(x_next);

    TraceRecord rec;
    rec.k = k + 1;
    if (evaluate_now(rec.k, opts)) rec.F = obj.value(opts.report == Report::average ? avg.mean() : x_next);
    rec.H = H_next;
    rec.r = metric.norm(x_next - x);
    rec.oracle_calls = oracle.calls();
    rec.wall_time_s = clock.seconds();
    rec.grad_diff = diff;
    emit(result, opts, rec);

    x = std::move(x_next);
    g = std::move(g_next);
    H = H_next;
  }

  result.x = opts.report == Report::average ? avg.mean() : x;
  result.oracle_calls = oracle.calls();
  result.wall_time_s = clock.seconds();
  return result;
}

}  // namespace ugm
