#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ugm/dataio.hpp"
#include "ugm/oracle.hpp"
#include "ugm/problem.hpp"
#include "ugm/solvers.hpp"

namespace ugm::bench {

struct ProblemSpec {
  enum class Kind { ls, logistic, ppower };
  Kind kind = Kind::ls;
  double p = 2.0;

  // "ls", "logistic" or "ppower:P".
  static ProblemSpec parse(const std::string& text);
  std::string to_string() const;
};

struct DataSpec {
  std::string path;  // empty for synthetic data
  Eigen::Index m = 100;
  Eigen::Index n = 50;
  std::uint64_t seed = 0;

  bool synthetic() const noexcept { return path.empty(); }
  // "synthetic:MxN[:SEED]" or a file path.
  static DataSpec parse(const std::string& text);
  std::string to_string() const;
};

struct SolverSpec {
  enum class Kind { ugm, usgm, usfgm, sgd, adagrad };
  Kind kind = Kind::ugm;
  SurrogateMode mode = SurrogateMode::stochastic_symmetrized;
  StepRule step;
  AdagradVariant variant = AdagradVariant::grad_diff;

  // ugm | usgm | usfgm[:det] | sgd[:STEP[:decay]] | adagrad[:grad_diff|:grad_norm]
  static SolverSpec parse(const std::string& text);
  // Name used in file names and CSV columns, e.g. "usfgm_det", "adagrad_norm".
  std::string label() const;
  bool uses_diameter() const noexcept { return kind != Kind::sgd; }
};

/// Everything a run, sweep or compare needs. Built from `key = value` files
/// and/or CLI flags; `[section]` headers prefix keys with "section.".
struct RunConfig {
  ProblemSpec problem;
  DataSpec data;
  bool normalize = false;
  double radius = 1.0;
  std::optional<double> D;  // defaults to 2 * radius
  std::vector<std::string> solvers{"ugm"};
  std::string oracle = "exact";
  std::int64_t max_iters = 1000;
  std::int64_t trace_every = 1;
  Report report = Report::average;
  std::string out = "ugbench_out";
  std::vector<std::uint64_t> seeds;  // empty: master seed + 0..nseeds-1
  std::int64_t nseeds = 1;
  int jobs = 1;
  std::optional<std::vector<double>> step_grid;
  std::optional<std::vector<double>> diameter_grid;
  std::map<std::string, std::string> section_keys;  // e.g. "sgd.step" -> "0.1"

  void set(const std::string& key, const std::string& value);
  void load_file(const std::string& path);
  void load_stream(std::istream& in, const std::string& name);

  double diameter() const { return D.value_or(2.0 * radius); }
  std::vector<SolverSpec> resolved_solvers() const;
  std::vector<std::uint64_t> resolved_seeds() const;
  OracleConfig oracle_config(std::uint64_t seed) const;
  void validate() const;
  // Keys that define the problem instance; compare requires them to agree.
  std::string problem_signature() const;
};

inline const std::vector<double> kDefaultStepGrid{10, 1, 0.1, 0.01, 0.001, 0.0001};
inline const std::vector<double> kDefaultDiameterGrid{50, 35, 20, 10, 5};

struct SummaryRow {
  std::string solver;
  std::uint64_t seed = 0;
  double final_F = kNaN;
  double final_gap_or_cert = kNaN;
  std::int64_t iters = 0;
  std::uint64_t oracle_calls = 0;
  double wall_time_s = 0.0;
};

/// Problem instance shared read-only by all runs of one command.
struct Instance {
  Dataset data;
  std::optional<CompositeObjective> objective;
  std::optional<double> f_star;  // known optimum (synthetic interpolating data)
};

Instance build_instance(const RunConfig& cfg);

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace);

/// Runs one solver on the instance with oracle seed `seed` and diameter D.
SolveResult solve(const Instance& inst, const RunConfig& cfg, const SolverSpec& spec, double D, std::uint64_t seed);

// Throw UsageError for bad configuration and DataError for unusable input.
void cmd_run(const RunConfig& cfg, std::ostream& log);
void cmd_sweep(const RunConfig& cfg, std::ostream& log);
void cmd_compare(const std::vector<RunConfig>& cfgs, std::ostream& log);

}  // namespace ugm::bench
