#include "ugm/oracle.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "ugm/dataio.hpp"
#include "ugm/errors.hpp"
#include "ugm/random.hpp"

namespace ugm {

namespace {

double parse_number(const std::string& text, const std::string& what) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) throw UsageError("invalid " + what + ": '" + text + "'");
  return v;
}

void check_config(const CompositeObjective& obj, const OracleConfig& cfg) {
  switch (cfg.kind) {
    case OracleKind::exact:
      return;
    case OracleKind::gaussian:
      if (!(cfg.sigma >= 0.0) || !std::isfinite(cfg.sigma)) throw UsageError("gaussian oracle: sigma must be >= 0");
      return;
    case OracleKind::minibatch: {
      const auto* fs = obj.finite_sum();
      if (fs == nullptr) throw UsageError("minibatch oracle: objective is not a finite sum");
      if (cfg.exhaustive) return;
      if (cfg.batch_size < 1) throw UsageError("minibatch oracle: batch size must be positive");
      if (cfg.batch_size > fs->num_terms())
        throw UsageError("minibatch oracle: batch size " + std::to_string(cfg.batch_size) + " exceeds " +
                         std::to_string(fs->num_terms()) + " rows");
      return;
    }
  }
}

}  // namespace

OracleConfig OracleConfig::gaussian_config(double sigma, std::uint64_t seed) {
  OracleConfig c;
  c.kind = OracleKind::gaussian;
  c.sigma = sigma;
  c.seed = seed;
  return c;
}

OracleConfig OracleConfig::minibatch_config(std::int64_t batch_size, std::uint64_t seed) {
  OracleConfig c;
  c.kind = OracleKind::minibatch;
  c.batch_size = batch_size;
  c.seed = seed;
  return c;
}

OracleConfig OracleConfig::parse(const std::string& text, std::uint64_t seed) {
  if (text == "exact") {
    OracleConfig c;
    c.seed = seed;
    return c;
  }
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "gaussian") {
    const double sigma = parse_number(arg, "gaussian sigma");
    if (!(sigma >= 0.0)) throw UsageError("gaussian sigma must be >= 0");
    return gaussian_config(sigma, seed);
  }
  if (head == "minibatch") {
    if (arg == "full") {
      auto c = minibatch_config(1, seed);
      c.exhaustive = true;
      return c;
    }
    const double b = parse_number(arg, "minibatch size");
    if (!(b >= 1.0) || b != std::floor(b)) throw UsageError("minibatch size must be a positive integer");
    return minibatch_config(static_cast<std::int64_t>(b), seed);
  }
  throw UsageError("unknown oracle '" + text + "' (expected exact, gaussian:SIGMA or minibatch:B)");
}

std::string OracleConfig::to_string() const {
  switch (kind) {
    case OracleKind::exact:
      return "exact";
    case OracleKind::gaussian:
      return "gaussian:" + format_double(sigma);
    case OracleKind::minibatch:
      return exhaustive ? "minibatch:full" : "minibatch:" + std::to_string(batch_size);
  }
  return "exact";
}

GradientSample exact_oracle(const CompositeObjective& obj, const Vector& x) { return {obj.evaluate(x).grad, 0}; }

GradientSample gaussian_oracle(const CompositeObjective& obj, const Vector& x, const OracleConfig& cfg,
                               std::uint64_t draw_index) {
  GradientSample s{obj.evaluate(x).grad, draw_index};
  if (cfg.sigma == 0.0) return s;
  Philox rng(cfg.seed, draw_index);
  const auto& b = obj.metric().b_diag();
  const double per_coord = cfg.sigma / std::sqrt(static_cast<double>(b.size()));
  for (Eigen::Index i = 0; i < b.size(); ++i) s.g[i] += per_coord * std::sqrt(b[i]) * rng.next_gaussian();
  return s;
}

GradientSample minibatch_oracle(const CompositeObjective& obj, const Vector& x, const OracleConfig& cfg,
                                std::uint64_t draw_index) {
  check_config(obj, cfg);
  if (cfg.exhaustive) return {obj.evaluate(x).grad, draw_index};
  const auto& fs = *obj.finite_sum();
  Philox rng(cfg.seed, draw_index);
  const auto m = static_cast<std::uint64_t>(fs.num_terms());
  Vector g = Vector::Zero(obj.dim());
  for (std::int64_t j = 0; j < cfg.batch_size; ++j)
    g += fs.term_gradient(static_cast<Eigen::Index>(rng.next_below(m)), x);
  g /= static_cast<double>(cfg.batch_size);
  return {std::move(g), draw_index};
}

GradientOracle::GradientOracle(const CompositeObjective& obj, OracleConfig config)
    : obj_(&obj), config_(config) {
  check_config(obj, config_);
}

GradientSample GradientOracle::sample_at(const Vector& x, std::uint64_t draw_index) const {
  GradientSample s;
  switch (config_.kind) {
    case OracleKind::exact:
      s = exact_oracle(*obj_, x);
      s.draw_index = draw_index;
      break;
    case OracleKind::gaussian:
      s = gaussian_oracle(*obj_, x, config_, draw_index);
      break;
    case OracleKind::minibatch:
      s = minibatch_oracle(*obj_, x, config_, draw_index);
      break;
  }
  return s;
}

GradientSample GradientOracle::sample(const Vector& x) { return sample_at(x, calls_++); }

}  // namespace ugm
