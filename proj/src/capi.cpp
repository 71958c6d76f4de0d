#include "ugm/ugm.h"

#include <iostream>
#include <limits>
#include <memory>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "ugm/bench.hpp"
#include "ugm/dataio.hpp"
#include "ugm/errors.hpp"
#include "ugm/problem.hpp"
#include "ugm/solvers.hpp"

struct ugm_dataset {
  ugm::Dataset data;
};

struct ugm_problem {
  ugm::bench::Instance instance;
};

struct ugm_result {
  ugm::SolveResult result;
};

struct ugm_config {
  ugm::bench::RunConfig config;
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
ugm_status guarded(Fn&& fn) {
  try {
    fn();
    return UGM_OK;
  } catch (const ugm::UsageError& e) {
    g_last_error = e.what();
    return UGM_ERR_USAGE;
  } catch (const ugm::DataError& e) {
    g_last_error = e.what();
    return UGM_ERR_DATA;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return UGM_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return UGM_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return UGM_ERR_INTERNAL;
  }
}

ugm_status null_argument(const char* what) {
  g_last_error = std::string(what) + " must not be NULL";
  return UGM_ERR_NULL_ARGUMENT;
}

}  // namespace

extern "C" {

const char* ugm_version(void) { return "0.1.0"; }

const char* ugm_last_error(void) { return g_last_error.c_str(); }

ugm_status ugm_dataset_load_libsvm(const char* path, int classification, int normalize, ugm_dataset** out) {
  if (path == nullptr || out == nullptr) return null_argument("path and out");
  *out = nullptr;
  return guarded([&] {
    auto ds = std::make_unique<ugm_dataset>();
    ds->data = ugm::load_libsvm(path, {classification != 0, normalize != 0});
    *out = ds.release();
  });
}

ugm_status ugm_dataset_parse_libsvm(const char* text, int classification, ugm_dataset** out) {
  if (text == nullptr || out == nullptr) return null_argument("text and out");
  *out = nullptr;
  return guarded([&] {
    std::istringstream in(text);
    auto ds = std::make_unique<ugm_dataset>();
    ds->data = ugm::parse_libsvm(in, {classification != 0, false}, "<text>");
    *out = ds.release();
  });
}

ugm_status ugm_dataset_synthetic(size_t m, size_t n, uint64_t seed, double* x_star, ugm_dataset** out) {
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    auto synth = ugm::synth_least_squares(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n), seed);
    if (x_star != nullptr) ugm::Vector::Map(x_star, synth.x_star.size()) = synth.x_star;
    auto ds = std::make_unique<ugm_dataset>();
    ds->data = std::move(synth.data);
    *out = ds.release();
  });
}

ugm_status ugm_dataset_shape(const ugm_dataset* ds, size_t* m, size_t* n) {
  if (ds == nullptr || m == nullptr || n == nullptr) return null_argument("dataset, m and n");
  *m = static_cast<size_t>(ds->data.rows());
  *n = static_cast<size_t>(ds->data.cols());
  return UGM_OK;
}

void ugm_dataset_free(ugm_dataset* ds) { delete ds; }

ugm_status ugm_problem_create(const ugm_dataset* ds, const char* kind, double radius, ugm_problem** out) {
  if (ds == nullptr || kind == nullptr || out == nullptr) return null_argument("dataset, kind and out");
  *out = nullptr;
  return guarded([&] {
    const auto spec = ugm::bench::ProblemSpec::parse(kind);
    auto p = std::make_unique<ugm_problem>();
    p->instance.data = ds->data;
    const auto& A = ds->data.features;
    const auto& b = ds->data.labels;
    switch (spec.kind) {
      case ugm::bench::ProblemSpec::Kind::ls:
        p->instance.objective.emplace(ugm::least_squares_objective(A, b, radius));
        break;
      case ugm::bench::ProblemSpec::Kind::logistic:
        p->instance.objective.emplace(ugm::logistic_objective(A, b, radius));
        break;
      case ugm::bench::ProblemSpec::Kind::ppower:
        p->instance.objective.emplace(ugm::p_power_objective(A, b, spec.p, radius));
        break;
    }
    *out = p.release();
  });
}

ugm_status ugm_problem_dim(const ugm_problem* p, size_t* n) {
  if (p == nullptr || n == nullptr) return null_argument("problem and n");
  *n = static_cast<size_t>(p->instance.objective->dim());
  return UGM_OK;
}

ugm_status ugm_problem_eval(const ugm_problem* p, const double* x, size_t n, double* value, double* grad) {
  if (p == nullptr || x == nullptr || value == nullptr) return null_argument("problem, x and value");
  return guarded([&] {
    const auto& obj = *p->instance.objective;
    if (n != static_cast<size_t>(obj.dim())) throw ugm::UsageError("ugm_problem_eval: dimension mismatch");
    const ugm::Vector xv = ugm::Vector::Map(x, static_cast<Eigen::Index>(n));
    const auto e = obj.evaluate(xv);
    *value = e.value;
    if (grad != nullptr) ugm::Vector::Map(grad, e.grad.size()) = e.grad;
  });
}

void ugm_problem_free(ugm_problem* p) { delete p; }

ugm_status ugm_solve(const ugm_problem* p, const ugm_solve_options* opts, ugm_result** out) {
  if (p == nullptr || opts == nullptr || out == nullptr) return null_argument("problem, options and out");
  *out = nullptr;
  return guarded([&] {
    ugm::bench::RunConfig cfg;
    cfg.radius = p->instance.objective->domain().radius;
    if (opts->diameter > 0.0) cfg.D = opts->diameter;
    cfg.oracle = opts->oracle != nullptr ? opts->oracle : "exact";
    cfg.max_iters = opts->max_iters;
    cfg.trace_every = opts->trace_every > 0 ? opts->trace_every : 1;
    const auto spec = ugm::bench::SolverSpec::parse(opts->solver != nullptr ? opts->solver : "ugm");
    auto r = std::make_unique<ugm_result>();
    r->result = ugm::bench::solve(p->instance, cfg, spec, cfg.diameter(), opts->seed);
    *out = r.release();
  });
}

ugm_status ugm_result_x(const ugm_result* r, double* x, size_t n) {
  if (r == nullptr || x == nullptr) return null_argument("result and x");
  if (n != static_cast<size_t>(r->result.x.size())) {
    g_last_error = "ugm_result_x: buffer length does not match the problem dimension";
    return UGM_ERR_USAGE;
  }
  ugm::Vector::Map(x, r->result.x.size()) = r->result.x;
  return UGM_OK;
}

size_t ugm_result_trace_length(const ugm_result* r) { return r == nullptr ? 0 : r->result.trace.size(); }

ugm_status ugm_result_trace_row(const ugm_result* r, size_t i, ugm_trace_row* row) {
  if (r == nullptr || row == nullptr) return null_argument("result and row");
  if (i >= r->result.trace.size()) {
    g_last_error = "ugm_result_trace_row: index out of range";
    return UGM_ERR_USAGE;
  }
  const auto& t = r->result.trace[i];
  *row = {t.k, t.F, t.H, t.r, t.beta, t.cert_gap, t.oracle_calls, t.wall_time_s};
  return UGM_OK;
}

void ugm_result_free(ugm_result* r) { delete r; }

double ugm_balance_update(double H, double beta, double rho, double omega) {
  try {
    return ugm::balance_update({H, beta, rho, omega});
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return std::numeric_limits<double>::quiet_NaN();
  }
}

ugm_status ugm_reg_max_bound(double M, double nu, double H, double* out) {
  if (out == nullptr) return null_argument("out");
  return guarded([&] { *out = ugm::reg_max_bound(M, nu, H); });
}

ugm_status ugm_config_create(ugm_config** out) {
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  return guarded([&] { *out = new ugm_config(); });
}

ugm_status ugm_config_set(ugm_config* cfg, const char* key, const char* value) {
  if (cfg == nullptr || key == nullptr || value == nullptr) return null_argument("config, key and value");
  return guarded([&] { cfg->config.set(key, value); });
}

ugm_status ugm_config_load_file(ugm_config* cfg, const char* path) {
  if (cfg == nullptr || path == nullptr) return null_argument("config and path");
  return guarded([&] { cfg->config.load_file(path); });
}

void ugm_config_free(ugm_config* cfg) { delete cfg; }

ugm_status ugm_cmd_run(const ugm_config* cfg) {
  if (cfg == nullptr) return null_argument("config");
  return guarded([&] { ugm::bench::cmd_run(cfg->config, std::cout); });
}

ugm_status ugm_cmd_sweep(const ugm_config* cfg) {
  if (cfg == nullptr) return null_argument("config");
  return guarded([&] { ugm::bench::cmd_sweep(cfg->config, std::cout); });
}

ugm_status ugm_cmd_compare(const ugm_config* const* cfgs, size_t count) {
  if (cfgs == nullptr && count > 0) return null_argument("configs");
  return guarded([&] {
    std::vector<ugm::bench::RunConfig> list;
    for (size_t i = 0; i < count; ++i) {
      if (cfgs[i] == nullptr) throw ugm::UsageError("compare: configuration " + std::to_string(i + 1) + " is NULL");
      list.push_back(cfgs[i]->config);
    }
    ugm::bench::cmd_compare(list, std::cout);
  });
}

}  // extern "C"
