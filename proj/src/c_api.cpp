#include "rabi_limit/c_api.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include "rabi_limit/analysis.hpp"
#include "rabi_limit/specfun.hpp"

using cplx = std::complex<double>;

namespace {

constexpr double kPi = 3.14159265358979323846;

thread_local std::string g_last_error;

template <typename F>
rabi_status wrap(F&& body) {
  try {
    body();
    return RABI_OK;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return RABI_ERR_INVALID_ARGUMENT;
  } catch (const rabi::TruncationError& e) {
    g_last_error = e.what();
    return RABI_ERR_TRUNCATION;
  } catch (const rabi::ToleranceError& e) {
    g_last_error = e.what();
    return RABI_ERR_TOLERANCE;
  } catch (const rabi::NumericError& e) {
    g_last_error = e.what();
    return RABI_ERR_NUMERIC;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return RABI_ERR_INTERNAL;
  }
}

rabi::analysis::MetricId to_metric_id(rabi_metric_id m) {
  using rabi::analysis::MetricId;
  switch (m) {
    case RABI_METRIC_SPIN_TD_NUMERIC: return MetricId::SpinTdNumeric;
    case RABI_METRIC_SPIN_TD_ANALYTIC: return MetricId::SpinTdAnalytic;
    case RABI_METRIC_FIELD_TD_NUMERIC: return MetricId::FieldTdNumeric;
    case RABI_METRIC_FIELD_TD_FBRWA: return MetricId::FieldTdFbrwa;
    case RABI_METRIC_CORRELATION_NUMERIC: return MetricId::CorrelationNumeric;
    case RABI_METRIC_CORRELATION_ANALYTIC: return MetricId::CorrelationAnalytic;
    case RABI_METRIC_ENTROPY_NUMERIC: return MetricId::EntropyNumeric;
    case RABI_METRIC_ENTROPY_ANALYTIC: return MetricId::EntropyAnalytic;
  }
  throw std::invalid_argument("unknown metric id");
}

rabi::analysis::SweepOptions to_sweep_options(const rabi_sweep_params& p) {
  rabi::analysis::SweepOptions opts;
  switch (p.route) {
    case RABI_ROUTE_AUTO: opts.engine.route = rabi::metrics::EngineRoute::Auto; break;
    case RABI_ROUTE_LAB: opts.engine.route = rabi::metrics::EngineRoute::Lab; break;
    case RABI_ROUTE_DISPLACED:
      opts.engine.route = rabi::metrics::EngineRoute::Displaced;
      break;
    default:
      throw std::invalid_argument("unknown engine route");
  }
  if (p.samples > 0) opts.samples = p.samples;
  if (p.entropy_tol > 0.0) opts.entropy_tol = p.entropy_tol;
  if (p.workers > 0) opts.workers = p.workers;
  return opts;
}

cplx joint_annihilation(const rabi::hilbert::JointKet& ket) {
  cplx a{0.0, 0.0};
  const int n = ket.n_trunc;
  for (int s = 0; s < 2; ++s)
    for (int m = 0; m + 1 < n; ++m)
      a += std::conj(ket.amp(s, m)) * std::sqrt(m + 1.0) * ket.amp(s, m + 1);
  return a;
}

}  // namespace

struct rabi_evolution {
  rabi::dynamics::ModelParams params;
  int n = 0;
  cplx alpha{0.0, 0.0};
  double A = 0.0;
  double Delta = 0.0;
  bool lab = true;
  rabi::hilbert::JointKet initial;  // lab route
  std::unique_ptr<rabi::dynamics::DisplacedPropagator> prop;
};

struct rabi_curve {
  rabi::analysis::MetricCurve curve;
};

extern "C" {

const char* rabi_last_error(void) { return g_last_error.c_str(); }

rabi_status rabi_evolution_create(double A, int n, double lambda, double Delta,
                                  double t_max, rabi_engine_route route,
                                  rabi_evolution** out) {
  return wrap([&]() {
    if (!out) throw std::invalid_argument("rabi_evolution_create: out is NULL");
    if (A < 0.0 || n < 0 || lambda < 0.0 || !(t_max > 0.0))
      throw std::invalid_argument(
          "rabi_evolution_create: need A >= 0, n >= 0, lambda >= 0, t_max > 0");
    auto ev = std::make_unique<rabi_evolution>();
    ev->params = rabi::dynamics::ModelParams{1.0 + Delta, 1.0, lambda};
    ev->n = n;
    ev->A = A;
    ev->Delta = Delta;
    ev->alpha = (A > 0.0 && lambda > 0.0) ? cplx(A / lambda, 0.0) : cplx(0.0, 0.0);

    bool lab = route != RABI_ROUTE_DISPLACED;
    if (route == RABI_ROUTE_AUTO)
      lab = rabi::hilbert::default_n_trunc(std::abs(ev->alpha), n) <= 200000;
    ev->lab = lab;
    if (lab) {
      const rabi::hilbert::FockKet field =
          rabi::hilbert::make_displaced_fock(ev->alpha, n);
      const int nt = field.n_trunc();
      ev->initial.amps = Eigen::VectorXcd::Zero(2 * nt);
      ev->initial.amps.head(nt) = field.amps;
      ev->initial.n_trunc = nt;
      ev->initial.frame = rabi::hilbert::Frame::Lab;
      ev->initial.omega0 = 1.0;
    } else {
      int n_small = rabi::dynamics::displaced_n_small(n, lambda, t_max);
      for (int attempt = 0;; ++attempt) {
        try {
          ev->prop = std::make_unique<rabi::dynamics::DisplacedPropagator>(
              Eigen::Vector2cd(1.0, 0.0), n, ev->params, ev->alpha, n_small);
          ev->prop->state(t_max);
          break;
        } catch (const rabi::TruncationError&) {
          if (attempt >= 4) throw;
          ev->prop.reset();
          n_small *= 2;
        }
      }
    }
    *out = ev.release();
  });
}

rabi_status rabi_evolution_sample(rabi_evolution* ev, double t, double* W_q,
                                  double* W_sc, double* W_fb, double* S,
                                  double* q, double* p) {
  return wrap([&]() {
    if (!ev) throw std::invalid_argument("rabi_evolution_sample: handle is NULL");
    double wq, entropy;
    cplx a_int;  // interaction-picture <a> (free rotation removed)
    if (ev->lab) {
      const rabi::hilbert::JointKet st =
          rabi::dynamics::jc_propagate_lab(ev->initial, ev->params, t);
      wq = 0.0;
      for (int m = 0; m < st.n_trunc; ++m)
        wq += std::norm(st.amp(0, m)) - std::norm(st.amp(1, m));
      entropy = rabi::hilbert::von_neumann_entropy(
          rabi::hilbert::partial_trace_spin(st));
      a_int = joint_annihilation(st) * std::polar(1.0, ev->params.omega0 * t);
    } else {
      wq = ev->prop->inversion(t);
      entropy = rabi::hilbert::von_neumann_entropy(
          Eigen::MatrixXcd(ev->prop->reduced_spin(t)));
      // lab <a> = e^{-i w0 t} (<a>_displaced + alpha)
      a_int = joint_annihilation(ev->prop->state(t)) + ev->alpha;
    }
    const rabi::hilbert::Quadratures quad =
        rabi::hilbert::quadratures_from_a(a_int, 0.0, ev->params.omega0);
    if (W_q) *W_q = wq;
    if (W_sc) *W_sc = rabi::dynamics::semiclassical_inversion(ev->A, ev->Delta, t);
    if (W_fb)
      *W_fb = rabi::dynamics::fbrwa_inversion(ev->n, ev->params.lambda,
                                              std::abs(ev->alpha), t);
    if (S) *S = entropy;
    if (q) *q = quad.q;
    if (p) *p = quad.p;
  });
}

void rabi_evolution_destroy(rabi_evolution* ev) { delete ev; }

rabi_status rabi_run_sweep(const rabi_sweep_params* params,
                           const double* lambdas, size_t count,
                           rabi_curve** out) {
  return wrap([&]() {
    if (!params || !lambdas || !out || count == 0)
      throw std::invalid_argument("rabi_run_sweep: NULL argument or empty grid");
    auto handle = std::make_unique<rabi_curve>();
    handle->curve = rabi::analysis::run_sweep(
        to_metric_id(params->metric), params->A, params->n,
        std::vector<double>(lambdas, lambdas + count), params->t1,
        params->Delta, to_sweep_options(*params));
    *out = handle.release();
  });
}

size_t rabi_curve_size(const rabi_curve* c) {
  return c ? c->curve.points.size() : 0;
}

rabi_status rabi_curve_point(const rabi_curve* c, size_t i, double* lambda,
                             double* value, int* valid) {
  return wrap([&]() {
    if (!c || i >= c->curve.points.size())
      throw std::invalid_argument("rabi_curve_point: bad handle or index");
    const rabi::analysis::MetricPoint& pt = c->curve.points[i];
    if (lambda) *lambda = pt.lambda;
    if (value) *value = pt.value;
    if (valid) *valid = pt.valid ? 1 : 0;
  });
}

const char* rabi_curve_point_error(const rabi_curve* c, size_t i) {
  if (!c || i >= c->curve.points.size()) return "";
  return c->curve.points[i].error.c_str();
}

void rabi_curve_destroy(rabi_curve* c) { delete c; }

rabi_status rabi_metric_eval(const rabi_sweep_params* params, double lambda,
                             double* value) {
  return wrap([&]() {
    if (!params || !value)
      throw std::invalid_argument("rabi_metric_eval: NULL argument");
    *value = rabi::analysis::evaluate_point(
        to_metric_id(params->metric), params->A, params->n, lambda, params->t1,
        params->Delta, to_sweep_options(*params));
  });
}

rabi_status rabi_inflection_numeric(const rabi_curve* c, int window,
                                    double* lambda_star, int* found,
                                    double* residual) {
  return wrap([&]() {
    if (!c) throw std::invalid_argument("rabi_inflection_numeric: NULL curve");
    const rabi::analysis::InflectionResult r =
        rabi::analysis::inflection_numeric(c->curve, window > 0 ? window : 7);
    if (found) *found = r.lambda_star.has_value() ? 1 : 0;
    if (lambda_star) *lambda_star = r.lambda_star.value_or(0.0);
    if (residual) *residual = r.residual;
  });
}

rabi_status rabi_inflection_taylor(int n, double t, double* lambda_star,
                                   int* found) {
  return wrap([&]() {
    const rabi::analysis::InflectionResult r =
        rabi::analysis::inflection_taylor(n, t);
    if (found) *found = r.lambda_star.has_value() ? 1 : 0;
    if (lambda_star) *lambda_star = r.lambda_star.value_or(0.0);
  });
}

rabi_status rabi_inflection_large_n(int n, double t, double* lambda_star) {
  return wrap([&]() {
    if (!lambda_star)
      throw std::invalid_argument("rabi_inflection_large_n: NULL output");
    *lambda_star = *rabi::analysis::inflection_large_n(n, t).lambda_star;
  });
}

rabi_status rabi_fit_power_law(const double* x, const double* y, size_t count,
                               double* exponent, double* prefactor,
                               double* residual) {
  return wrap([&]() {
    if (!x || !y) throw std::invalid_argument("rabi_fit_power_law: NULL input");
    std::vector<std::pair<double, double>> pts(count);
    for (size_t i = 0; i < count; ++i) pts[i] = {x[i], y[i]};
    const rabi::analysis::PowerLawFit fit = rabi::analysis::fit_power_law(pts);
    if (exponent) *exponent = fit.exponent;
    if (prefactor) *prefactor = fit.prefactor;
    if (residual) *residual = fit.residual;
  });
}

rabi_status rabi_log_grid(double lo, double hi, int count, double* out) {
  return wrap([&]() {
    if (!out) throw std::invalid_argument("rabi_log_grid: NULL output");
    const std::vector<double> g = rabi::analysis::log_grid(lo, hi, count);
    std::memcpy(out, g.data(), g.size() * sizeof(double));
  });
}

}  // extern "C"

namespace {

struct ValidationCheck {
  const char* name;
  double threshold;
  double (*measure)();
};

// lab vs displaced-rotating propagation, compared on the lab reduced spin
double check_dual_route() {
  const double lambda = 0.05;
  const double alpha = 4.0;
  const int n = 2;
  const double A = lambda * alpha;
  const double t = 10.0 * rabi::dynamics::rabi_period(A);
  const rabi::dynamics::ModelParams params{1.0, 1.0, lambda};

  const rabi::hilbert::FockKet field = rabi::hilbert::make_displaced_fock(alpha, n);
  rabi::hilbert::JointKet init;
  init.amps = Eigen::VectorXcd::Zero(2 * field.n_trunc());
  init.amps.head(field.n_trunc()) = field.amps;
  init.n_trunc = field.n_trunc();
  const Eigen::Matrix2cd rho_lab = rabi::dynamics::reduced_spin_lab(
      rabi::dynamics::jc_propagate_lab(init, params, t));

  const rabi::hilbert::JointKet disp = rabi::dynamics::jc_propagate_displaced(
      Eigen::Vector2cd(1.0, 0.0), n, params, alpha, t,
      rabi::dynamics::displaced_n_small(n, lambda, t));
  const Eigen::Matrix2cd rho_disp = rabi::dynamics::reduced_spin_lab(disp);
  return rabi::hilbert::trace_distance(Eigen::MatrixXcd(rho_lab),
                                       Eigen::MatrixXcd(rho_disp));
}

// moment recurrence vs direct adaptive quadrature
double check_moment_quadrature() {
  const double mu = 0.5, nu = 2.0, T = 5.0;
  const double rec = rabi::specfun::oscillatory_gaussian_moment(1, mu, nu, T);
  const double quad = rabi::specfun::integrate(
      [&](double t) { return t * t * std::exp(-mu * t * t) * std::cos(nu * t); },
      0.0, T);
  return std::abs(rec - quad);
}

// the field correction operator should be supported on a 3-dim subspace
double check_correction_rank() {
  const double lambda = 0.02, alpha = 10.0;
  const int n = 2;
  const double t = 10.0 * kPi / (lambda * alpha);
  const int nt = rabi::hilbert::default_n_trunc(alpha, n);
  const rabi::hilbert::DensityMatrix rho =
      rabi::dynamics::fbrwa_field_density(alpha, n, lambda, t, nt);
  const rabi::hilbert::FockKet ref = rabi::hilbert::displaced_fock_ket(
      {alpha * std::polar(1.0, -t), n, nt});
  const Eigen::MatrixXcd delta = rho.m - ref.amps * ref.amps.adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(delta,
                                                     Eigen::EigenvaluesOnly);
  Eigen::VectorXd mags = es.eigenvalues().cwiseAbs();
  std::sort(mags.data(), mags.data() + mags.size(), std::greater<double>());
  return mags[3];
}

// spectral vs time-domain correlation (Plancherel)
double check_plancherel() {
  const double lambda = 0.05, A = 0.2;
  const int n = 1, samples = 4096;
  const double T = 10.0 * rabi::dynamics::rabi_period(A);
  std::vector<double> f(samples), g(samples);
  for (int i = 0; i < samples; ++i) {
    const double t = T * i / samples;
    f[i] = rabi::dynamics::fbrwa_inversion(n, lambda, A / lambda, t);
    g[i] = rabi::dynamics::semiclassical_inversion(A, 0.0, t);
  }
  const rabi::metrics::PearsonResult r = rabi::metrics::pearson(f, g);
  return std::abs(r.r_spectral - r.r_time);
}

const ValidationCheck kChecks[] = {
    {"dual-route reduced spin agreement", 1e-8, check_dual_route},
    {"oscillatory moment vs quadrature", 1e-8, check_moment_quadrature},
    {"field correction rank-3 support", 1e-9, check_correction_rank},
    {"spectral vs time-domain correlation", 1e-10, check_plancherel},
};

}  // namespace

extern "C" {

size_t rabi_validate_count(void) {
  return sizeof(kChecks) / sizeof(kChecks[0]);
}

rabi_status rabi_validate_run(size_t index, char* name, size_t name_len,
                              double* measure, double* threshold, int* pass) {
  return wrap([&]() {
    if (index >= rabi_validate_count())
      throw std::invalid_argument("rabi_validate_run: index out of range");
    const ValidationCheck& check = kChecks[index];
    if (name && name_len > 0) {
      std::strncpy(name, check.name, name_len - 1);
      name[name_len - 1] = '\0';
    }
    const double m = check.measure();
    if (measure) *measure = m;
    if (threshold) *threshold = check.threshold;
    if (pass) *pass = m <= check.threshold ? 1 : 0;
  });
}

}  // extern "C"
