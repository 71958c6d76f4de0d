#pragma once

#include <cstdint>
#include <string>

#include "ugm/problem.hpp"

namespace ugm {

enum class OracleKind { exact, gaussian, minibatch };

struct OracleConfig {
  OracleKind kind = OracleKind::exact;
  double sigma = 0.0;           // gaussian: E||delta||_*^2 = sigma^2
  std::int64_t batch_size = 1;  // minibatch: rows drawn with replacement
  bool exhaustive = false;      // minibatch: use every row once (full batch)
  std::uint64_t seed = 0;

  static OracleConfig exact_config() { return {}; }
  static OracleConfig gaussian_config(double sigma, std::uint64_t seed);
  static OracleConfig minibatch_config(std::int64_t batch_size, std::uint64_t seed);

  // "exact", "gaussian:SIGMA" or "minibatch:B".
  static OracleConfig parse(const std::string& text, std::uint64_t seed = 0);
  std::string to_string() const;
};

struct GradientSample {
  Vector g;
  std::uint64_t draw_index = 0;  // oracle calls that preceded this one
};

/// Stochastic gradient oracle bound to one objective.
///
/// Each call k draws its noise from the Philox stream (seed, k), so draw k is
/// produced only after its query point is known and can be replayed with
/// sample_at(). The oracle is single-owner state; use one per solver run.
class GradientOracle {
 public:
  GradientOracle(const CompositeObjective& obj, OracleConfig config);

  GradientSample sample(const Vector& x);
  // Recomputes draw `draw_index` at x without touching the call counter.
  GradientSample sample_at(const Vector& x, std::uint64_t draw_index) const;

  std::uint64_t calls() const noexcept { return calls_; }
  const OracleConfig& config() const noexcept { return config_; }
  bool is_exact() const noexcept { return config_.kind == OracleKind::exact; }

 private:
  const CompositeObjective* obj_;
  OracleConfig config_;
  std::uint64_t calls_ = 0;
};

GradientSample exact_oracle(const CompositeObjective& obj, const Vector& x);
GradientSample gaussian_oracle(const CompositeObjective& obj, const Vector& x, const OracleConfig& cfg,
                               std::uint64_t draw_index);
GradientSample minibatch_oracle(const CompositeObjective& obj, const Vector& x, const OracleConfig& cfg,
                                std::uint64_t draw_index);

}  // namespace ugm
