#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "ugm/oracle.hpp"
#include "ugm/problem.hpp"

namespace ugm {

/// Inputs of the balance equation (H+ - H) * omega = [beta - H+ * rho]_+.
struct BalanceInputs {
  double H = 0.0;
  double beta = 0.0;
  double rho = 0.0;    // 1/2 r^2
  double omega = 1.0;  // D^2
};

/// Unique solution H+ = H + [beta - H rho]_+ / (omega + rho) of the balance equation.
double balance_update(const BalanceInputs& in);

/// Closed form of max_{r >= 0} { M/(1+nu) r^(1+nu) - H/2 r^2 } for nu in [0, 1).
double reg_max_bound(double M, double nu, double H);

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct TraceRecord {
  std::int64_t k = 0;
  double F = kNaN;         // reported objective (NaN when not evaluated this step)
  double H = 0.0;          // step coefficient after the update
  double r = 0.0;          // step length in the B-norm
  double beta = kNaN;      // surrogate fed to the balance equation (A-scaled for the fast method)
  double cert_gap = kNaN;  // eps_k* when the solver maintains a certificate
  std::uint64_t oracle_calls = 0;
  double wall_time_s = 0.0;
  double grad_diff = kNaN;  // ||g_{k} - g_{k-1}||_* for methods that keep consecutive gradients
};

using TraceObserver = std::function<void(const TraceRecord&)>;

// Which point the F column and the returned x refer to.
enum class Report { average, last };

struct SolverOptions {
  std::int64_t max_iters = 1000;
  std::int64_t trace_every = 1;  // evaluate F every n-th step (always at the final step)
  std::optional<Vector> x0;      // defaults to the domain center
  Report report = Report::average;
  TraceObserver observer;
};

struct SolveResult {
  Vector x;
  std::vector<TraceRecord> trace;
  std::uint64_t oracle_calls = 0;
  double wall_time_s = 0.0;
  std::optional<CertificateAccumulator> certificate;
};

/// Universal line-search-free gradient method with exact (sub)gradients.
/// Returns the best iterate and a trace whose F column is F(best) and whose
/// cert_gap column is the certified gap eps_k*.
SolveResult run_ugm(const CompositeObjective& obj, double D, const SolverOptions& opts);

/// Universal stochastic gradient method. Returns the averaged iterate
/// (or the last one with Report::last).
SolveResult run_usgm(const CompositeObjective& obj, GradientOracle& oracle, double D, const SolverOptions& opts);

enum class SurrogateMode { stochastic_symmetrized, deterministic_bregman };

/// Universal (stochastic) fast gradient method, similar-triangles form.
/// deterministic_bregman needs an exact oracle and uses the exact Bregman distance.
SolveResult run_usfgm(const CompositeObjective& obj, GradientOracle& oracle, double D, SurrogateMode mode,
                      const SolverOptions& opts);

struct StepRule {
  double c = 0.1;
  bool decaying = false;  // c / sqrt(k + 1) when set

  double at(std::int64_t k) const;
};

/// Projected (sub)gradient baseline x+ = P(x - c(k) B^-1 g).
SolveResult run_projected_subgrad(const CompositeObjective& obj, GradientOracle& oracle, StepRule rule,
                                  const SolverOptions& opts);

enum class AdagradVariant { grad_diff, grad_norm };

/// AdaGrad-norm baseline: prox iteration with H'_k = (1/D) sqrt(sum gamma_i^2).
SolveResult run_adagrad_norm(const CompositeObjective& obj, GradientOracle& oracle, double D,
                             AdagradVariant variant, const SolverOptions& opts);

}  // namespace ugm
