#ifndef UGM_UGM_H
#define UGM_UGM_H

/*
 * C interface to the universal gradient method library.
 *
 * Every function returns a ugm_status. On failure, ugm_last_error() returns a
 * message for the calling thread that stays valid until the next failing call
 * on that thread. Objects are opaque handles released with the matching
 * *_free function; passing NULL to *_free is a no-op.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(UGM_BUILDING_LIBRARY)
#    define UGM_API __declspec(dllexport)
#  else
#    define UGM_API __declspec(dllimport)
#  endif
#else
#  define UGM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values double as process exit codes for the command-line tool. */
typedef enum ugm_status {
  UGM_OK = 0,
  UGM_ERR_INTERNAL = 1,
  UGM_ERR_USAGE = 2,
  UGM_ERR_DATA = 3,
  UGM_ERR_NULL_ARGUMENT = 4
} ugm_status;

typedef struct ugm_dataset ugm_dataset;
typedef struct ugm_problem ugm_problem;
typedef struct ugm_result ugm_result;
typedef struct ugm_config ugm_config;

typedef struct ugm_trace_row {
  int64_t k;
  double F;
  double H;
  double r;
  double beta;
  double cert_gap;
  uint64_t oracle_calls;
  double wall_time_s;
} ugm_trace_row;

UGM_API const char* ugm_version(void);
UGM_API const char* ugm_last_error(void);

/* Datasets */
UGM_API ugm_status ugm_dataset_load_libsvm(const char* path, int classification, int normalize,
                                           ugm_dataset** out);
UGM_API ugm_status ugm_dataset_parse_libsvm(const char* text, int classification, ugm_dataset** out);
/* x_star may be NULL; otherwise it receives n entries. */
UGM_API ugm_status ugm_dataset_synthetic(size_t m, size_t n, uint64_t seed, double* x_star, ugm_dataset** out);
UGM_API ugm_status ugm_dataset_shape(const ugm_dataset* ds, size_t* m, size_t* n);
UGM_API void ugm_dataset_free(ugm_dataset* ds);

/* Problems: kind is "ls", "logistic" or "ppower:P"; domain is the ball of given radius at 0. */
UGM_API ugm_status ugm_problem_create(const ugm_dataset* ds, const char* kind, double radius, ugm_problem** out);
UGM_API ugm_status ugm_problem_dim(const ugm_problem* p, size_t* n);
/* grad may be NULL. */
UGM_API ugm_status ugm_problem_eval(const ugm_problem* p, const double* x, size_t n, double* value, double* grad);
UGM_API void ugm_problem_free(ugm_problem* p);

typedef struct ugm_solve_options {
  const char* solver;   /* as accepted by `ugbench --solver`, e.g. "usfgm:det" */
  const char* oracle;   /* "exact", "gaussian:SIGMA" or "minibatch:B" */
  double diameter;      /* <= 0 selects 2 * radius */
  int64_t max_iters;
  int64_t trace_every;  /* <= 0 selects 1 */
  uint64_t seed;
} ugm_solve_options;

UGM_API ugm_status ugm_solve(const ugm_problem* p, const ugm_solve_options* opts, ugm_result** out);
UGM_API ugm_status ugm_result_x(const ugm_result* r, double* x, size_t n);
UGM_API size_t ugm_result_trace_length(const ugm_result* r);
UGM_API ugm_status ugm_result_trace_row(const ugm_result* r, size_t i, ugm_trace_row* row);
UGM_API void ugm_result_free(ugm_result* r);

/* Step-size rule primitives */
UGM_API double ugm_balance_update(double H, double beta, double rho, double omega);
UGM_API ugm_status ugm_reg_max_bound(double M, double nu, double H, double* out);

/* Benchmark harness configuration and commands */
UGM_API ugm_status ugm_config_create(ugm_config** out);
UGM_API ugm_status ugm_config_set(ugm_config* cfg, const char* key, const char* value);
UGM_API ugm_status ugm_config_load_file(ugm_config* cfg, const char* path);
UGM_API void ugm_config_free(ugm_config* cfg);

UGM_API ugm_status ugm_cmd_run(const ugm_config* cfg);
UGM_API ugm_status ugm_cmd_sweep(const ugm_config* cfg);
UGM_API ugm_status ugm_cmd_compare(const ugm_config* const* cfgs, size_t count);

#ifdef __cplusplus
}
#endif

#endif /* UGM_UGM_H */
