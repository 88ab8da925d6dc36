#ifndef RABI_LIMIT_C_API_H
#define RABI_LIMIT_C_API_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes returned by every fallible entry point. */
typedef enum rabi_status {
  RABI_OK = 0,
  RABI_ERR_INVALID_ARGUMENT = 1,
  RABI_ERR_TRUNCATION = 2,
  RABI_ERR_NUMERIC = 3,
  RABI_ERR_TOLERANCE = 4,
  RABI_ERR_INTERNAL = 5
} rabi_status;

/* Message for the most recent failure on the calling thread. */
const char* rabi_last_error(void);

typedef enum rabi_metric_id {
  RABI_METRIC_SPIN_TD_NUMERIC = 0,
  RABI_METRIC_SPIN_TD_ANALYTIC = 1,
  RABI_METRIC_FIELD_TD_NUMERIC = 2,
  RABI_METRIC_FIELD_TD_FBRWA = 3,
  RABI_METRIC_CORRELATION_NUMERIC = 4,
  RABI_METRIC_CORRELATION_ANALYTIC = 5,
  RABI_METRIC_ENTROPY_NUMERIC = 6,
  RABI_METRIC_ENTROPY_ANALYTIC = 7
} rabi_metric_id;

typedef enum rabi_engine_route {
  RABI_ROUTE_AUTO = 0,
  RABI_ROUTE_LAB = 1,
  RABI_ROUTE_DISPLACED = 2
} rabi_engine_route;

/* ---- time-series evolution (handle reusable across sample times) ---- */

typedef struct rabi_evolution rabi_evolution;

/* Initial state |alpha, n> x |+z> with |alpha| = A / lambda (alpha = 0 when
 * A = 0 or lambda = 0). Delta = Omega - omega0 in units of omega0 = 1.
 * t_max bounds the usable sample window. */
rabi_status rabi_evolution_create(double A, int n, double lambda, double Delta,
                                  double t_max, rabi_engine_route route,
                                  rabi_evolution** out);
/* Samples at time t: exact inversion W_q, semiclassical W_sc, closed-form
 * envelope model W_fb, spin entanglement entropy S, and the interaction-
 * picture field quadratures q, p. Any output pointer may be NULL. */
rabi_status rabi_evolution_sample(rabi_evolution* ev, double t, double* W_q,
                                  double* W_sc, double* W_fb, double* S,
                                  double* q, double* p);
void rabi_evolution_destroy(rabi_evolution* ev);

/* ---- metric curves (lambda sweeps at fixed A, n) ---- */

typedef struct rabi_curve rabi_curve;

typedef struct rabi_sweep_params {
  rabi_metric_id metric;
  double A;
  int n;
  double t1;          /* comparison time / averaging window */
  double Delta;
  rabi_engine_route route;
  int samples;        /* time grid for the sampled numeric metrics */
  double entropy_tol; /* series tolerance for the entropy closed form */
  int workers;        /* 0 -> hardware concurrency */
} rabi_sweep_params;

/* Evaluates the metric over `count` lambda values. Per-point failures are
 * recorded on the curve (valid = 0), not returned as an error. */
rabi_status rabi_run_sweep(const rabi_sweep_params* params,
                           const double* lambdas, size_t count,
                           rabi_curve** out);
size_t rabi_curve_size(const rabi_curve* c);
rabi_status rabi_curve_point(const rabi_curve* c, size_t i, double* lambda,
                             double* value, int* valid);
/* Error message for an invalid point; empty string for valid points. The
 * pointer stays owned by the curve. */
const char* rabi_curve_point_error(const rabi_curve* c, size_t i);
void rabi_curve_destroy(rabi_curve* c);

/* ---- single-point metric evaluation ---- */

rabi_status rabi_metric_eval(const rabi_sweep_params* params, double lambda,
                             double* value);

/* ---- inflection points and scaling ---- */

/* found = 0 with RABI_OK means the curvature never changes sign. */
rabi_status rabi_inflection_numeric(const rabi_curve* c, int window,
                                    double* lambda_star, int* found,
                                    double* residual);
rabi_status rabi_inflection_taylor(int n, double t, double* lambda_star,
                                   int* found);
rabi_status rabi_inflection_large_n(int n, double t, double* lambda_star);

/* Least-squares power law y = prefactor * x^exponent on log-log axes. */
rabi_status rabi_fit_power_law(const double* x, const double* y, size_t count,
                               double* exponent, double* prefactor,
                               double* residual);

/* Log-spaced grid helper: fills `out` (length count) over [lo, hi]. */
rabi_status rabi_log_grid(double lo, double hi, int count, double* out);

/* ---- self-validation checks (cross-method consistency probes) ---- */

size_t rabi_validate_count(void);
/* Runs check `index`. `name` (may be NULL) receives a label, truncated to
 * name_len including the terminator. measure = achieved discrepancy,
 * threshold = allowed bound, pass = measure <= threshold. */
rabi_status rabi_validate_run(size_t index, char* name, size_t name_len,
                              double* measure, double* threshold, int* pass);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* RABI_LIMIT_C_API_H */
