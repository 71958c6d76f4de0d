#include "ugm/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "ugm/errors.hpp"

namespace ugm::bench {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

double to_real(const std::string& key, const std::string& text) {
  std::string_view s = text;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw UsageError(key + ": '" + text + "' is not a finite number");
  return v;
}

double to_positive(const std::string& key, const std::string& text) {
  const double v = to_real(key, text);
  if (!(v > 0.0)) throw UsageError(key + " must be positive");
  return v;
}

std::int64_t to_int(const std::string& key, const std::string& text) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
    throw UsageError(key + ": '" + text + "' is not an integer");
  return v;
}

std::uint64_t to_uint(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
    throw UsageError(key + ": '" + text + "' is not a nonnegative integer");
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
  if (text == "0" || text == "false" || text == "no" || text == "off") return false;
  throw UsageError(key + ": '" + text + "' is not a boolean");
}

std::vector<double> to_real_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  for (const auto& item : split(text, ',')) out.push_back(to_real(key, item));
  return out;
}

std::string csv_number(double v) { return std::isnan(v) ? std::string() : format_double(v); }

const std::set<std::string> kSectionKeys{"sgd.step", "sgd.schedule", "adagrad.variant", "usfgm.mode"};

}  // namespace

// ---------------------------------------------------------------- specs

ProblemSpec ProblemSpec::parse(const std::string& text) {
  ProblemSpec p;
  if (text == "ls") return p;
  if (text == "logistic") {
    p.kind = Kind::logistic;
    return p;
  }
  if (text.rfind("ppower:", 0) == 0) {
    p.kind = Kind::ppower;
    p.p = to_real("problem", text.substr(7));
    if (!(p.p >= 1.0 && p.p <= 2.0)) throw UsageError("problem: p must lie in [1, 2]");
    return p;
  }
  throw UsageError("unknown problem '" + text + "' (expected ls, logistic or ppower:P)");
}

std::string ProblemSpec::to_string() const {
  switch (kind) {
    case Kind::ls:
      return "ls";
    case Kind::logistic:
      return "logistic";
    case Kind::ppower:
      return "ppower:" + format_double(p);
  }
  return "ls";
}

DataSpec DataSpec::parse(const std::string& text) {
  DataSpec d;
  if (text.rfind("synthetic", 0) != 0) {
    if (text.empty()) throw UsageError("data: empty path");
    d.path = text;
    return d;
  }
  const auto parts = split(text, ':');
  if (parts.size() < 2 || parts.size() > 3 || parts[0] != "synthetic")
    throw UsageError("data: expected synthetic:MxN[:SEED], got '" + text + "'");
  const auto x = parts[1].find('x');
  if (x == std::string::npos) throw UsageError("data: expected MxN in '" + text + "'");
  d.m = to_int("data rows", parts[1].substr(0, x));
  d.n = to_int("data columns", parts[1].substr(x + 1));
  if (d.m < 1 || d.n < 1) throw UsageError("data: synthetic dimensions must be positive");
  if (parts.size() == 3) d.seed = to_uint("data seed", parts[2]);
  return d;
}

std::string DataSpec::to_string() const {
  if (!synthetic()) return path;
  return "synthetic:" + std::to_string(m) + "x" + std::to_string(n) + ":" + std::to_string(seed);
}

SolverSpec SolverSpec::parse(const std::string& text) {
  const auto parts = split(text, ':');
  SolverSpec s;
  const std::string& name = parts.empty() ? text : parts[0];
  auto extra = [&](std::size_t max_parts) {
    if (parts.size() > max_parts) throw UsageError("solver '" + text + "': too many ':' fields");
  };
  if (name == "ugm" || name == "usgm") {
    extra(1);
    s.kind = name == "ugm" ? Kind::ugm : Kind::usgm;
  } else if (name == "usfgm") {
    extra(2);
    s.kind = Kind::usfgm;
    if (parts.size() == 2) {
      if (parts[1] == "det" || parts[1] == "deterministic") {
        s.mode = SurrogateMode::deterministic_bregman;
      } else if (parts[1] != "sto" && parts[1] != "stochastic") {
        throw UsageError("solver '" + text + "': mode must be det or stochastic");
      }
    }
  } else if (name == "sgd") {
    extra(3);
    s.kind = Kind::sgd;
    if (parts.size() >= 2) s.step.c = to_real("sgd step", parts[1]);
    if (parts.size() == 3) {
      if (parts[2] != "decay" && parts[2] != "constant")
        throw UsageError("solver '" + text + "': schedule must be constant or decay");
      s.step.decaying = parts[2] == "decay";
    }
    if (!(s.step.c >= 0.0)) throw UsageError("sgd step must be >= 0");
  } else if (name == "adagrad") {
    extra(2);
    s.kind = Kind::adagrad;
    if (parts.size() == 2) {
      if (parts[1] == "grad_norm" || parts[1] == "norm") {
        s.variant = AdagradVariant::grad_norm;
      } else if (parts[1] != "grad_diff" && parts[1] != "diff") {
        throw UsageError("solver '" + text + "': variant must be grad_diff or grad_norm");
      }
    }
  } else {
    throw UsageError("unknown solver '" + text + "' (expected ugm, usgm, usfgm, sgd or adagrad)");
  }
  return s;
}

std::string SolverSpec::label() const {
  switch (kind) {
    case Kind::ugm:
      return "ugm";
    case Kind::usgm:
      return "usgm";
    case Kind::usfgm:
      return mode == SurrogateMode::deterministic_bregman ? "usfgm_det" : "usfgm";
    case Kind::sgd:
      return step.decaying ? "sgd_decay" : "sgd";
    case Kind::adagrad:
      return variant == AdagradVariant::grad_norm ? "adagrad_norm" : "adagrad";
  }
  return "unknown";
}

// ---------------------------------------------------------------- config

void RunConfig::set(const std::string& raw_key, const std::string& raw_value) {
  std::string key = trim(raw_key);
  std::replace(key.begin(), key.end(), '-', '_');
  const std::string value = trim(raw_value);

  if (key.find('.') != std::string::npos) {
    if (!kSectionKeys.count(key)) throw UsageError("unknown section key '" + key + "'");
    section_keys[key] = value;
    return;
  }
  if (key == "problem") {
    problem = ProblemSpec::parse(value);
  } else if (key == "data") {
    data = DataSpec::parse(value);
  } else if (key == "normalize") {
    normalize = to_bool(key, value);
  } else if (key == "radius") {
    radius = to_positive(key, value);
  } else if (key == "D" || key == "diameter") {
    D = to_positive(key, value);
  } else if (key == "solver" || key == "solvers") {
    solvers = split(value, ',');
    std::erase(solvers, std::string());
  } else if (key == "oracle") {
    oracle = value;
  } else if (key == "iters" || key == "max_iters") {
    max_iters = to_int(key, value);
  } else if (key == "trace_every") {
    trace_every = to_int(key, value);
  } else if (key == "report") {
    if (value == "average") {
      report = Report::average;
    } else if (value == "last") {
      report = Report::last;
    } else {
      throw UsageError("report must be average or last");
    }
  } else if (key == "out") {
    out = value;
  } else if (key == "seeds") {
    seeds.clear();
    if (!value.empty())
      for (const auto& s : split(value, ',')) seeds.push_back(to_uint(key, s));
  } else if (key == "nseeds") {
    nseeds = to_int(key, value);
  } else if (key == "jobs") {
    jobs = static_cast<int>(to_int(key, value));
  } else if (key == "steps") {
    step_grid = to_real_list(key, value);
  } else if (key == "diameters") {
    diameter_grid = to_real_list(key, value);
  } else {
    throw UsageError("unknown configuration key '" + key + "'");
  }
}

void RunConfig::load_stream(std::istream& in, const std::string& name) {
  std::string line;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    try {
      if (t.front() == '[') {
        if (t.back() != ']') throw UsageError("unterminated section header");
        section = trim(t.substr(1, t.size() - 2));
        continue;
      }
      const auto eq = t.find('=');
      if (eq == std::string::npos) throw UsageError("expected key = value");
      const std::string key = trim(t.substr(0, eq));
      set(section.empty() ? key : section + "." + key, t.substr(eq + 1));
    } catch (const UsageError& e) {
      throw UsageError(name + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  load_stream(in, path);
}

std::vector<SolverSpec> RunConfig::resolved_solvers() const {
  std::vector<SolverSpec> out;
  for (const auto& text : solvers) {
    SolverSpec s = SolverSpec::parse(text);
    const bool bare = text.find(':') == std::string::npos;
    if (bare) {
      auto get = [&](const char* k) -> const std::string* {
        const auto it = section_keys.find(k);
        return it == section_keys.end() ? nullptr : &it->second;
      };
      if (s.kind == SolverSpec::Kind::sgd) {
        if (const auto* v = get("sgd.step")) s.step.c = to_real("sgd.step", *v);
        if (const auto* v = get("sgd.schedule")) {
          if (*v != "decay" && *v != "constant") throw UsageError("sgd.schedule must be constant or decay");
          s.step.decaying = *v == "decay";
        }
        if (!(s.step.c >= 0.0)) throw UsageError("sgd step must be >= 0");
      } else if (s.kind == SolverSpec::Kind::adagrad) {
        if (const auto* v = get("adagrad.variant")) s = SolverSpec::parse("adagrad:" + *v);
      } else if (s.kind == SolverSpec::Kind::usfgm) {
        if (const auto* v = get("usfgm.mode")) s = SolverSpec::parse("usfgm:" + *v);
      }
    }
    out.push_back(s);
  }
  return out;
}

std::vector<std::uint64_t> RunConfig::resolved_seeds() const {
  if (!seeds.empty()) return seeds;
  if (nseeds < 1) throw UsageError("nseeds must be positive");
  std::uint64_t master = 0;
  if (const char* env = std::getenv("UGBENCH_SEED"); env != nullptr && *env != '\0')
    master = to_uint("UGBENCH_SEED", env);
  std::vector<std::uint64_t> out;
  for (std::int64_t i = 0; i < nseeds; ++i) out.push_back(master + static_cast<std::uint64_t>(i));
  return out;
}

OracleConfig RunConfig::oracle_config(std::uint64_t seed) const { return OracleConfig::parse(oracle, seed); }

void RunConfig::validate() const {
  if (!(radius > 0.0)) throw UsageError("radius must be positive");
  if (!(diameter() > 0.0)) throw UsageError("D must be positive");
  if (max_iters < 0) throw UsageError("iters must be nonnegative");
  if (trace_every < 1) throw UsageError("trace_every must be positive");
  if (jobs < 1) throw UsageError("jobs must be positive");
  if (solvers.empty()) throw UsageError("no solver given");
  (void)resolved_solvers();
  (void)oracle_config(0);
  if (resolved_seeds().empty()) throw UsageError("seeds must be nonempty");
  if (!data.synthetic() && !fs::exists(data.path)) throw UsageError("data file '" + data.path + "' does not exist");
}

std::string RunConfig::problem_signature() const {
  std::ostringstream s;
  s << problem.to_string() << '|' << data.to_string() << '|' << normalize << '|' << format_double(radius) << '|'
    << OracleConfig::parse(oracle).to_string() << '|' << max_iters << '|' << trace_every << '|'
    << static_cast<int>(report) << '|';
  for (auto seed : resolved_seeds()) s << seed << ',';
  return s.str();
}

// ---------------------------------------------------------------- execution

Instance build_instance(const RunConfig& cfg) {
  Instance inst;
  const bool logistic = cfg.problem.kind == ProblemSpec::Kind::logistic;
  if (cfg.data.synthetic()) {
    if (logistic) {
      inst.data = synth_classification(cfg.data.m, cfg.data.n, cfg.data.seed);
    } else {
      inst.data = synth_least_squares(cfg.data.m, cfg.data.n, cfg.data.seed).data;
      // b = A x* with ||x*|| = 1, so F* = 0 whenever x* is feasible.
      if (cfg.radius >= 1.0 && !cfg.normalize) inst.f_star = 0.0;
    }
    if (cfg.normalize) normalize_columns(inst.data);
  } else {
    inst.data = load_libsvm(cfg.data.path, {logistic, cfg.normalize});
  }

  Matrix A = inst.data.features;
  Vector b = inst.data.labels;
  switch (cfg.problem.kind) {
    case ProblemSpec::Kind::ls:
      inst.objective.emplace(least_squares_objective(std::move(A), std::move(b), cfg.radius));
      break;
    case ProblemSpec::Kind::logistic:
      inst.objective.emplace(logistic_objective(std::move(A), std::move(b), cfg.radius));
      break;
    case ProblemSpec::Kind::ppower:
      inst.objective.emplace(p_power_objective(std::move(A), std::move(b), cfg.problem.p, cfg.radius));
      break;
  }
  return inst;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace) {
  out << "k,F,H,r,beta,cert_gap,oracle_calls,wall_time_s\n";
  for (const auto& rec : trace) {
    out << rec.k << ',' << csv_number(rec.F) << ',' << csv_number(rec.H) << ',' << csv_number(rec.r) << ','
        << csv_number(rec.beta) << ',' << csv_number(rec.cert_gap) << ',' << rec.oracle_calls << ','
        << csv_number(rec.wall_time_s) << '\n';
  }
}

SolveResult solve(const Instance& inst, const RunConfig& cfg, const SolverSpec& spec, double D, std::uint64_t seed) {
  const CompositeObjective& obj = *inst.objective;
  GradientOracle oracle(obj, cfg.oracle_config(seed));
  SolverOptions opts;
  opts.max_iters = cfg.max_iters;
  opts.trace_every = cfg.trace_every;
  opts.report = cfg.report;
  switch (spec.kind) {
    case SolverSpec::Kind::ugm:
      if (!oracle.is_exact()) throw UsageError("ugm requires the exact oracle");
      return run_ugm(obj, D, opts);
    case SolverSpec::Kind::usgm:
      return run_usgm(obj, oracle, D, opts);
    case SolverSpec::Kind::usfgm:
      return run_usfgm(obj, oracle, D, spec.mode, opts);
    case SolverSpec::Kind::sgd:
      return run_projected_subgrad(obj, oracle, spec.step, opts);
    case SolverSpec::Kind::adagrad:
      return run_adagrad_norm(obj, oracle, D, spec.variant, opts);
  }
  throw UsageError("unhandled solver kind");
}

namespace {

struct Task {
  SolverSpec spec;
  std::string name;  // solver column of summary.csv
  double D = 1.0;
  std::uint64_t seed = 0;
  fs::path trace_path;
};

struct Outcome {
  SummaryRow row;
  std::vector<TraceRecord> trace;
  std::exception_ptr error;
};

SummaryRow summarize(const Instance& inst, const Task& task, const SolveResult& res) {
  SummaryRow row;
  row.solver = task.name;
  row.seed = task.seed;
  row.iters = static_cast<std::int64_t>(res.trace.size());
  row.oracle_calls = res.oracle_calls;
  row.wall_time_s = res.wall_time_s;
  if (!res.trace.empty()) {
    const auto& last = res.trace.back();
    row.final_F = last.F;
    if (!std::isnan(last.cert_gap)) {
      row.final_gap_or_cert = last.cert_gap;
    } else if (inst.f_star) {
      row.final_gap_or_cert = last.F - *inst.f_star;
    }
  } else {
    row.final_F = inst.objective->value(res.x);
    if (inst.f_star) row.final_gap_or_cert = row.final_F - *inst.f_star;
  }
  return row;
}

std::vector<Outcome> run_tasks(const Instance& inst, const RunConfig& cfg, const std::vector<Task>& tasks) {
  std::vector<Outcome> outcomes(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& task = tasks[i];
      try {
        SolveResult res = solve(inst, cfg, task.spec, task.D, task.seed);
        fs::create_directories(task.trace_path.parent_path());
        std::ofstream out(task.trace_path);
        if (!out) throw UsageError("cannot write '" + task.trace_path.string() + "'");
        write_trace_csv(out, res.trace);
        outcomes[i].row = summarize(inst, task, res);
        outcomes[i].trace = std::move(res.trace);
      } catch (...) {
        outcomes[i].error = std::current_exception();
      }
    }
  };
  const auto n_threads = std::min<std::size_t>(static_cast<std::size_t>(cfg.jobs), tasks.size());
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& o : outcomes)
    if (o.error) std::rethrow_exception(o.error);
  return outcomes;
}

fs::path trace_file(const fs::path& dir, const std::string& label, std::uint64_t seed) {
  return dir / ("trace_" + label + "_" + std::to_string(seed) + ".csv");
}

void write_summary(const fs::path& path, const std::vector<Outcome>& outcomes) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write '" + path.string() + "'");
  out << "solver,seed,final_F,final_gap_or_cert,iters,oracle_calls,wall_time_s\n";
  for (const auto& o : outcomes) {
    const auto& r = o.row;
    out << r.solver << ',' << r.seed << ',' << csv_number(r.final_F) << ',' << csv_number(r.final_gap_or_cert) << ','
        << r.iters << ',' << r.oracle_calls << ',' << csv_number(r.wall_time_s) << '\n';
  }
}

void log_outcomes(std::ostream& log, const std::vector<Outcome>& outcomes) {
  for (const auto& o : outcomes) {
    log << o.row.solver << " seed=" << o.row.seed << " iters=" << o.row.iters
        << " final_F=" << format_double(o.row.final_F);
    if (!std::isnan(o.row.final_gap_or_cert)) log << " gap=" << format_double(o.row.final_gap_or_cert);
    log << '\n';
  }
}

void check_unique_labels(const std::vector<SolverSpec>& specs) {
  std::set<std::string> seen;
  for (const auto& s : specs)
    if (!seen.insert(s.label()).second) throw UsageError("solver '" + s.label() + "' given more than once");
}

}  // namespace

void cmd_run(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  const auto specs = cfg.resolved_solvers();
  check_unique_labels(specs);
  const Instance inst = build_instance(cfg);
  const fs::path out_dir = cfg.out;

  std::vector<Task> tasks;
  for (const auto& spec : specs)
    for (const auto seed : cfg.resolved_seeds())
      tasks.push_back({spec, spec.label(), cfg.diameter(), seed, trace_file(out_dir, spec.label(), seed)});

  const auto outcomes = run_tasks(inst, cfg, tasks);
  write_summary(out_dir / "summary.csv", outcomes);
  log_outcomes(log, outcomes);
}

void cmd_sweep(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  const auto specs = cfg.resolved_solvers();
  check_unique_labels(specs);
  const auto seeds = cfg.resolved_seeds();
  const fs::path out_dir = cfg.out;

  struct GridPoint {
    std::string solver;
    std::string param;
    double value;
    std::size_t first_task;
  };
  std::vector<GridPoint> points;
  std::vector<Task> tasks;
  for (const auto& spec : specs) {
    const bool by_step = !spec.uses_diameter();
    const auto& grid = by_step ? cfg.step_grid.value_or(kDefaultStepGrid)
                               : cfg.diameter_grid.value_or(kDefaultDiameterGrid);
    if (grid.empty()) throw UsageError("empty " + std::string(by_step ? "step" : "diameter") + " grid for " + spec.label());
    const std::string param = by_step ? "step" : "D";
    for (const double value : grid) {
      if (!(value > 0.0)) throw UsageError("sweep grid values must be positive");
      SolverSpec s = spec;
      double D = cfg.diameter();
      if (by_step) {
        s.step.c = value;
      } else {
        D = value;
      }
      const std::string tag = spec.label() + "_" + param + "=" + format_double(value);
      points.push_back({spec.label(), param, value, tasks.size()});
      for (const auto seed : seeds)
        tasks.push_back({s, spec.label() + "[" + param + "=" + format_double(value) + "]", D, seed,
                         trace_file(out_dir / tag, spec.label(), seed)});
    }
  }

  const Instance inst = build_instance(cfg);
  const auto outcomes = run_tasks(inst, cfg, tasks);
  write_summary(out_dir / "summary.csv", outcomes);
  log_outcomes(log, outcomes);

  std::vector<double> means;
  for (const auto& p : points) {
    double sum = 0.0;
    for (std::size_t j = 0; j < seeds.size(); ++j) sum += outcomes[p.first_task + j].row.final_F;
    const double mean = sum / static_cast<double>(seeds.size());
    means.push_back(std::isnan(mean) ? std::numeric_limits<double>::infinity() : mean);
  }
  std::vector<bool> best(points.size(), false);
  for (const auto& spec : specs) {
    std::optional<std::size_t> arg;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (points[i].solver != spec.label()) continue;
      if (!arg || means[i] < means[*arg] || (means[i] == means[*arg] && points[i].value < points[*arg].value))
        arg = i;
    }
    if (arg) {
      best[*arg] = true;
      log << "best " << spec.label() << ": " << points[*arg].param << "=" << format_double(points[*arg].value)
          << " mean_final_F=" << format_double(means[*arg]) << '\n';
    }
  }

  std::ofstream out(out_dir / "sweep.csv");
  if (!out) throw UsageError("cannot write sweep.csv");
  out << "solver,param,value,mean_final_F,seeds,best\n";
  for (std::size_t i = 0; i < points.size(); ++i)
    out << points[i].solver << ',' << points[i].param << ',' << format_double(points[i].value) << ','
        << csv_number(means[i]) << ',' << seeds.size() << ',' << (best[i] ? 1 : 0) << '\n';
}

void cmd_compare(const std::vector<RunConfig>& cfgs, std::ostream& log) {
  if (cfgs.empty()) throw UsageError("compare needs at least one configuration");
  for (const auto& c : cfgs) c.validate();
  const RunConfig& base = cfgs.front();
  const std::string signature = base.problem_signature();
  for (std::size_t i = 1; i < cfgs.size(); ++i)
    if (cfgs[i].problem_signature() != signature)
      throw UsageError("compare: configuration " + std::to_string(i + 1) +
                       " describes a different problem, oracle, iteration budget or seed set");

  std::vector<SolverSpec> specs;
  std::vector<double> diameters;
  for (const auto& c : cfgs)
    for (const auto& s : c.resolved_solvers()) {
      specs.push_back(s);
      diameters.push_back(c.diameter());
    }
  if (specs.size() < 2) throw UsageError("compare needs at least two solvers");
  check_unique_labels(specs);

  const auto seeds = base.resolved_seeds();
  const fs::path out_dir = base.out;
  std::vector<Task> tasks;
  for (std::size_t s = 0; s < specs.size(); ++s)
    for (const auto seed : seeds)
      tasks.push_back({specs[s], specs[s].label(), diameters[s], seed, trace_file(out_dir, specs[s].label(), seed)});

  const Instance inst = build_instance(base);
  const auto outcomes = run_tasks(inst, base, tasks);
  write_summary(out_dir / "summary.csv", outcomes);
  log_outcomes(log, outcomes);

  std::optional<std::size_t> usgm_idx;
  bool has_adagrad_diff = false;
  for (std::size_t s = 0; s < specs.size(); ++s) {
    if (specs[s].kind == SolverSpec::Kind::usgm) usgm_idx = s;
    if (specs[s].kind == SolverSpec::Kind::adagrad && specs[s].variant == AdagradVariant::grad_diff)
      has_adagrad_diff = true;
  }
  const bool domination = usgm_idx && has_adagrad_diff;

  for (std::size_t j = 0; j < seeds.size(); ++j) {
    std::ofstream out(out_dir / ("compare_" + std::to_string(seeds[j]) + ".csv"));
    if (!out) throw UsageError("cannot write compare CSV");
    out << 'k';
    for (const auto& s : specs) out << ",F_" << s.label();
    if (domination) out << ",H_usgm,Hprime_usgm,domination_margin";
    out << '\n';

    double sum_sq = 0.0;
    double worst_margin = std::numeric_limits<double>::infinity();
    const auto rows = static_cast<std::size_t>(base.max_iters);
    for (std::size_t k = 0; k < rows; ++k) {
      out << (k + 1);
      for (std::size_t s = 0; s < specs.size(); ++s) {
        const auto& trace = outcomes[s * seeds.size() + j].trace;
        out << ',' << (k < trace.size() ? csv_number(trace[k].F) : std::string());
      }
      if (domination) {
        const auto& rec = outcomes[*usgm_idx * seeds.size() + j].trace[k];
        sum_sq += rec.grad_diff * rec.grad_diff;
        const double h_prime = std::sqrt(sum_sq) / diameters[*usgm_idx];
        const double margin = h_prime - rec.H;
        worst_margin = std::min(worst_margin, margin);
        out << ',' << csv_number(rec.H) << ',' << csv_number(h_prime) << ',' << csv_number(margin);
      }
      out << '\n';
    }
    if (domination)
      log << "seed " << seeds[j] << ": min(H'_k - H_k) over the USGM run = " << format_double(worst_margin) << '\n';
  }
}

}  // namespace ugm::bench
