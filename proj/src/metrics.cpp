#include "rabi_limit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "rabi_limit/specfun.hpp"

namespace rabi::metrics {

namespace {

using dynamics::DisplacedPropagator;
using dynamics::ModelParams;
using hilbert::DensityMatrix;
using hilbert::Frame;
using hilbert::JointKet;

constexpr double kPi = 3.14159265358979323846;

// Lab-route field comparisons materialize an N x N density matrix; past this
// size the displaced frame is the only tractable representation.
constexpr int kFieldLabLimit = 4096;

// Exact-dynamics engine behind the numeric metrics: either closed-form lab
// blocks or the displaced-rotating spectral propagator, sized for [0, t_max].
class ExactEngine {
 public:
  ExactEngine(double A, int n, double lambda, double Delta, double t_max,
              EngineRoute route, int lab_limit, bool field_needed) {
    if (lambda < 0.0) throw std::invalid_argument("ExactEngine: lambda must be >= 0");
    params_ = ModelParams{1.0 + Delta, 1.0, lambda};
    n_ = n;
    alpha_ = lambda > 0.0 ? A / lambda : 0.0;
    if (route == EngineRoute::Auto) {
      const int predicted = hilbert::default_n_trunc(alpha_, n);
      route = predicted <= (field_needed ? std::min(lab_limit, kFieldLabLimit)
                                         : lab_limit)
                  ? EngineRoute::Lab
                  : EngineRoute::Displaced;
    }
    route_ = route;
    if (route_ == EngineRoute::Lab) {
      hilbert::FockKet field = hilbert::make_displaced_fock(alpha_, n);
      const int nt = field.n_trunc();
      initial_.amps = Eigen::VectorXcd::Zero(2 * nt);
      initial_.amps.head(nt) = field.amps;
      initial_.n_trunc = nt;
      initial_.frame = Frame::Lab;
      initial_.omega0 = params_.omega0;
    } else {
      int n_small = dynamics::displaced_n_small(n, lambda, t_max);
      for (int attempt = 0;; ++attempt) {
        try {
          prop_ = std::make_unique<DisplacedPropagator>(
              Eigen::Vector2cd(1.0, 0.0), n, params_, alpha_, n_small);
          prop_->state(t_max);  // leakage probe at the far end of the window
          break;
        } catch (const TruncationError&) {
          if (attempt >= 4) throw;
          prop_.reset();
          n_small *= 2;
        }
      }
    }
  }

  EngineRoute route() const { return route_; }

  JointKet state(double t) const {
    if (route_ == EngineRoute::Lab)
      return dynamics::jc_propagate_lab(initial_, params_, t);
    return prop_->state(t);
  }

  Eigen::Matrix2cd reduced_spin_lab(double t) const {
    if (route_ == EngineRoute::Lab)
      return dynamics::reduced_spin_lab(dynamics::jc_propagate_lab(initial_, params_, t));
    // undo the spin part of the rotating frame: R = diag(e^{-i w0 t/2}, c.c.)
    const cplx rp = std::polar(1.0, -0.5 * params_.omega0 * t);
    Eigen::Matrix2cd r = Eigen::Matrix2cd::Zero();
    r(0, 0) = rp;
    r(1, 1) = std::conj(rp);
    return r * prop_->reduced_spin(t) * r.adjoint();
  }

  double inversion(double t) const {
    if (route_ == EngineRoute::Lab) {
      const JointKet st = dynamics::jc_propagate_lab(initial_, params_, t);
      double w = 0.0;
      for (int m = 0; m < st.n_trunc; ++m)
        w += std::norm(st.amp(0, m)) - std::norm(st.amp(1, m));
      return w;
    }
    return prop_->inversion(t);
  }

  double spin_entropy(double t) const {
    Eigen::Matrix2cd rho =
        route_ == EngineRoute::Lab
            ? Eigen::Matrix2cd(hilbert::partial_trace_spin(
                                   dynamics::jc_propagate_lab(initial_, params_, t))
                                   .m)
            : prop_->reduced_spin(t);
    return hilbert::von_neumann_entropy(Eigen::MatrixXcd(rho));
  }

  // Trace distance between the reduced field state and the free-evolved
  // initial field state, evaluated in whichever frame both fit.
  double field_trace_distance(double t) const {
    if (route_ == EngineRoute::Lab) {
      const JointKet st = dynamics::jc_propagate_lab(initial_, params_, t);
      const DensityMatrix rho = hilbert::partial_trace_field(st);
      const hilbert::FockKet ref = hilbert::displaced_fock_ket(
          {alpha_ * std::polar(1.0, -params_.omega0 * t), n_, st.n_trunc});
      return hilbert::trace_distance(
          rho.m, Eigen::MatrixXcd(ref.amps * ref.amps.adjoint()));
    }
    // Displaced frame: the freely evolved reference is |n><n| exactly, and
    // the trace distance is invariant under the (common) frame unitary.
    const JointKet st = prop_->state(t);
    const DensityMatrix rho = hilbert::partial_trace_field(st);
    Eigen::MatrixXcd ref = Eigen::MatrixXcd::Zero(rho.dim(), rho.dim());
    ref(n_, n_) = 1.0;
    return hilbert::trace_distance(rho.m, ref);
  }

 private:
  ModelParams params_;
  int n_ = 0;
  double alpha_ = 0.0;
  EngineRoute route_ = EngineRoute::Lab;
  JointKet initial_;                          // lab route
  std::unique_ptr<DisplacedPropagator> prop_;  // displaced route
};

}  // namespace

FbrwaFieldGeometry fbrwa_field_geometry(int n, double lambda, double alpha_abs,
                                        double t) {
  FbrwaFieldGeometry g;
  const double s = lambda * lambda * t * t;
  g.kappa = std::exp(-s / 8.0) * specfun::laguerre(n, s / 4.0);
  g.zeta = std::exp(-s / 2.0) * specfun::laguerre(n, s);
  g.phi = lambda * alpha_abs * t;

  const double one_minus_k2 = 1.0 - g.kappa * g.kappa;
  g.c0p = std::polar(g.kappa, -0.5 * g.phi);
  g.c0m = std::polar(g.kappa, 0.5 * g.phi);
  if (one_minus_k2 < 1e-14) return g;  // all three kets coincide; Delta ~ 0

  const double root = std::sqrt(one_minus_k2);
  g.c1p = root;
  g.c1m = std::polar(1.0, g.phi) * (g.zeta - g.kappa * g.kappa) / root;
  const double c2m2 = std::max(0.0, one_minus_k2 - std::norm(g.c1m));
  g.c2m = std::sqrt(c2m2);

  const double d00 = g.kappa * g.kappa - 1.0;
  const double d11 = 0.5 * (one_minus_k2 + std::norm(g.c1m));
  const double d22 = 0.5 * c2m2;
  const cplx d01 = 0.5 * (g.c0p * std::conj(g.c1p) + g.c0m * std::conj(g.c1m));
  const cplx d02 = 0.5 * g.c0m * std::conj(g.c2m);
  const cplx d12 = 0.5 * g.c1m * std::conj(g.c2m);

  g.a = d00 * d11 + d00 * d22 + d11 * d22 -
        (std::norm(d01) + std::norm(d02) + std::norm(d12));
  Eigen::Matrix3cd delta;
  delta << d00, d01, d02, std::conj(d01), d11, d12, std::conj(d02),
      std::conj(d12), d22;
  g.b = -delta.determinant().real();

  if (std::abs(g.a) < 1e-14) return g;
  if (g.a > 0.0)
    throw NumericError("fbrwa_field_geometry: cubic coefficient a > 0");

  double arg = (-3.0 * g.b / (2.0 * g.a)) * std::sqrt(-3.0 / g.a);
  if (arg > 1.0 + 1e-9 || arg < -1.0 - 1e-9)
    throw NumericError("fbrwa_field_geometry: arccos argument outside clipping band");
  arg = std::clamp(arg, -1.0, 1.0);
  g.theta = std::acos(arg) / 3.0;
  const double radius = 2.0 * std::sqrt(-g.a / 3.0);
  for (int k = 0; k < 3; ++k)
    g.chi[k] = radius * std::cos(g.theta + 2.0 * kPi * k / 3.0);
  return g;
}

double spin_trace_distance_analytic(int n, double lambda, double t) {
  const double s = lambda * lambda * t * t;
  return 0.5 * (1.0 - specfun::laguerre(n, s) * std::exp(-0.5 * s));
}

double field_trace_distance_fbrwa(int n, double lambda, double alpha_abs,
                                  double t, FbrwaFieldGeometry* geo) {
  const FbrwaFieldGeometry g = fbrwa_field_geometry(n, lambda, alpha_abs, t);
  if (geo) *geo = g;
  if (std::abs(g.a) < 1e-14) return 0.0;
  return 0.5 * (std::abs(g.chi[0]) + std::abs(g.chi[1]) + std::abs(g.chi[2]));
}

double spin_trace_distance_numeric(double A, int n, double lambda, double t1,
                                   double Delta, const EngineOptions& opts) {
  if (lambda == 0.0) return 0.0;
  ExactEngine engine(A, n, lambda, Delta, t1, opts.route, opts.lab_n_trunc_limit,
                     false);
  const Eigen::Matrix2cd rho = engine.reduced_spin_lab(t1);
  const Eigen::Matrix2cd sigma =
      dynamics::semiclassical_spin_state(A, Delta, 1.0, t1);
  return hilbert::trace_distance(Eigen::MatrixXcd(rho), Eigen::MatrixXcd(sigma));
}

double field_trace_distance_numeric(double A, int n, double lambda, double t1,
                                    double Delta, const EngineOptions& opts) {
  if (lambda == 0.0 || t1 == 0.0) return 0.0;
  ExactEngine engine(A, n, lambda, Delta, t1, opts.route, opts.lab_n_trunc_limit,
                     true);
  return engine.field_trace_distance(t1);
}

PearsonResult pearson(const std::vector<double>& f, const std::vector<double>& g) {
  if (f.size() != g.size() || f.size() < 2)
    throw std::invalid_argument("pearson: need two equally sized series");
  const int n = static_cast<int>(f.size());
  double mf = 0.0, mg = 0.0;
  for (int i = 0; i < n; ++i) {
    mf += f[i];
    mg += g[i];
  }
  mf /= n;
  mg /= n;
  std::vector<double> a(n), b(n);
  for (int i = 0; i < n; ++i) {
    a[i] = f[i] - mf;
    b[i] = g[i] - mg;
  }

  double st = 0.0, sa = 0.0, sb = 0.0;
  for (int i = 0; i < n; ++i) {
    st += a[i] * b[i];
    sa += a[i] * a[i];
    sb += b[i] * b[i];
  }
  const double r_time = st / std::sqrt(sa * sb);

  // unwindowed DFT of both series; normalized real inner product of spectra
  double num = 0.0, na = 0.0, nb = 0.0;
  for (int k = 0; k < n; ++k) {
    cplx fa{0.0, 0.0}, fb{0.0, 0.0};
    for (int j = 0; j < n; ++j) {
      const cplx w = std::polar(1.0, -2.0 * kPi * j * k / n);
      fa += a[j] * w;
      fb += b[j] * w;
    }
    num += (fa * std::conj(fb)).real();
    na += std::norm(fa);
    nb += std::norm(fb);
  }
  return {num / std::sqrt(na * nb), r_time};
}

namespace {

double correlation_from_engine(const ExactEngine& engine, double A,
                               double Delta, double T, int samples) {
  std::vector<double> wq(samples), wsc(samples);
  for (int i = 0; i < samples; ++i) {
    const double t = T * i / samples;
    wq[i] = engine.inversion(t);
    wsc[i] = dynamics::semiclassical_inversion(A, Delta, t);
  }
  return 1.0 - pearson(wq, wsc).r_spectral;
}

}  // namespace

double correlation_numeric(double A, int n, double lambda, double T,
                           int samples, double Delta, const EngineOptions& opts,
                           bool* sampling_converged) {
  if (sampling_converged) *sampling_converged = true;
  if (lambda == 0.0) return 0.0;
  ExactEngine engine(A, n, lambda, Delta, T, opts.route, opts.lab_n_trunc_limit,
                     false);
  const double metric = correlation_from_engine(engine, A, Delta, T, samples);
  if (opts.validate) {
    const double refined = correlation_from_engine(engine, A, Delta, T, 2 * samples);
    if (std::abs(refined - metric) > 1e-6 && sampling_converged)
      *sampling_converged = false;
  }
  return metric;
}

double correlation_analytic(int n, double lambda, double alpha_abs, int N) {
  if (n < 0 || N < 1 || !(alpha_abs > 0.0) || !(lambda > 0.0))
    throw std::invalid_argument("correlation_analytic: bad arguments");
  const double A = lambda * alpha_abs;
  const double T = N * kPi / A;
  const double mu = 0.5 * lambda * lambda;
  const double nu_osc = 4.0 * A;  // cos^2(2At) -> cos(4At) component

  const std::vector<double> a = specfun::laguerre_coefficients(n);
  const std::vector<double> b = specfun::poly_power_coefficients(a, 2);

  const double l2 = lambda * lambda;
  double numer = 0.0, numer_abs = 0.0;
  double pw = 1.0;
  for (int r = 0; r <= n; ++r) {
    const double mr = specfun::oscillatory_gaussian_moment(r, mu, 0.0, T) +
                      specfun::oscillatory_gaussian_moment(r, mu, nu_osc, T);
    const double term = 0.5 * a[r] * pw * mr;
    numer += term;
    numer_abs += std::abs(term);
    pw *= l2;
  }

  double denom = 0.0, denom_abs = 0.0;
  pw = 1.0;
  for (int j = 0; j <= 2 * n; ++j) {
    const double mj = specfun::oscillatory_gaussian_moment(j, 2.0 * mu, 0.0, T) +
                      specfun::oscillatory_gaussian_moment(j, 2.0 * mu, nu_osc, T);
    const double term = 0.5 * b[j] * pw * mj;
    denom += term;
    denom_abs += std::abs(term);
    pw *= l2;
  }

  // The alternating Laguerre sums cancel catastrophically once (lambda T)^2
  // is large; rebuild the offending integral by quadrature of the closed-form
  // integrand in that regime.
  const double loss_floor = 1e-7;
  if (!(std::abs(numer) > loss_floor * numer_abs)) {
    numer = specfun::integrate(
        [&](double t) {
          const double s = l2 * t * t;
          const double c = std::cos(2.0 * A * t);
          return std::exp(-0.5 * s) * specfun::laguerre(n, s) * c * c;
        },
        0.0, T, 1e-13, 1e-15);
  }
  if (!(std::abs(denom) > loss_floor * denom_abs)) {
    denom = specfun::integrate(
        [&](double t) {
          const double s = l2 * t * t;
          const double L = specfun::laguerre(n, s);
          const double c = std::cos(2.0 * A * t);
          return std::exp(-s) * L * L * c * c;
        },
        0.0, T, 1e-13, 1e-15);
  }

  const double r = numer / std::sqrt(0.5 * T * denom);
  return 1.0 - r;
}

double entropy_numeric(double A, int n, double lambda, double T, int samples,
                       double Delta, const EngineOptions& opts,
                       bool* sampling_converged) {
  if (sampling_converged) *sampling_converged = true;
  if (lambda == 0.0) return 0.0;
  ExactEngine engine(A, n, lambda, Delta, T, opts.route, opts.lab_n_trunc_limit,
                     false);
  auto average = [&](int m) {
    double acc = 0.0;
    for (int i = 0; i <= m; ++i) {
      const double s = engine.spin_entropy(T * i / m);
      acc += (i == 0 || i == m) ? 0.5 * s : s;
    }
    return acc / m;
  };
  const double value = average(samples);
  if (opts.validate) {
    const double refined = average(2 * samples);
    if (std::abs(refined - value) > 1e-6 && sampling_converged)
      *sampling_converged = false;
  }
  return value;
}

double entropy_analytic(int n, double lambda, double alpha_abs, int N,
                        double tol, EntropySeriesState* state, int m_cap) {
  if (!(tol > 0.0)) throw std::invalid_argument("entropy_analytic: tol must be > 0");
  if (!(alpha_abs > 0.0) || !(lambda > 0.0) || N < 1 || n < 0)
    throw std::invalid_argument("entropy_analytic: bad arguments");
  const double T = N * kPi / (lambda * alpha_abs);
  const double chi = lambda * T;
  const double chi2 = chi * chi;

  const std::vector<double> base = specfun::laguerre_coefficients(n);
  const std::vector<double> base2 = specfun::poly_power_coefficients(base, 2);
  std::vector<double> power{1.0};  // running coefficients of L_n^{2m}
  bool coeff_route = true;

  double sum = 0.0;
  double tail = 0.0;
  int m_used = 0;
  for (int m = 1; m <= m_cap; ++m) {
    // V_m = int_0^{chi^2} L_n(s)^{2m} s^{-1/2} e^{-ms} ds
    double vm = 0.0;
    if (coeff_route) {
      // advance L^{2m} coefficients; abandon the route when the gamma terms
      // would overflow or the alternating sum cancels below tolerance
      std::vector<double> next(power.size() + base2.size() - 1, 0.0);
      for (std::size_t i = 0; i < power.size(); ++i)
        for (std::size_t j = 0; j < base2.size(); ++j)
          next[i + j] += power[i] * base2[j];
      power.swap(next);
      const int lmax = static_cast<int>(power.size()) - 1;
      if (lmax > 150) {
        coeff_route = false;
      } else {
        double vabs = 0.0;
        vm = 0.0;
        for (int l = 0; l <= lmax; ++l) {
          const double piece = power[l] * std::pow(m, -(l + 0.5)) *
                               specfun::lower_incomplete_gamma(l + 0.5, m * chi2);
          vm += piece;
          vabs += std::abs(piece);
        }
        if (!std::isfinite(vabs) || !(std::abs(vm) > 1e-7 * vabs))
          coeff_route = false;
      }
    }
    if (!coeff_route) {
      // evaluate |L|^{2m} e^{-m x^2} in log space: either factor alone can
      // overflow/underflow long before their product does
      vm = 2.0 * specfun::integrate(
                     [&](double x) {
                       const double L = std::abs(specfun::laguerre(n, x * x));
                       if (L == 0.0) return 0.0;
                       const double lg = m * (2.0 * std::log(L) - x * x);
                       return lg < -745.0 ? 0.0 : std::exp(lg);
                     },
                     0.0, chi, 1e-12, 1e-16);
    }
    const double term = vm / (2.0 * chi * 2.0 * m * (2.0 * m - 1.0));
    sum += term;
    m_used = m;
    tail = std::min(term * m, 1.0 / (2.0 * (m + 1.0) * (2.0 * m + 1.0)));
    if (tail < tol) break;
  }

  if (state) {
    state->n = n;
    state->lambda = lambda;
    state->T = T;
    state->m_max = m_used;
    state->tail_bound = tail;
  }
  if (tail >= tol)
    throw ToleranceError("entropy_analytic: m_cap reached before tolerance");
  return std::log(2.0) - sum;
}

}  // namespace rabi::metrics
