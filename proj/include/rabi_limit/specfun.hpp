#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace rabi::specfun {

using cplx = std::complex<double>;

// Laguerre polynomial L_n(x) via the three-term upward recurrence.
double laguerre(int n, double x);

// Coefficients c_r = (-1)^r binom(n,r) / r! of L_n, r = 0..n.
// Throws std::invalid_argument for n < 0 or n > 30.
std::vector<double> laguerre_coefficients(int n);

// Coefficients of p(x)^k by repeated convolution.
// Throws std::length_error if deg(p)*k exceeds max_degree.
std::vector<double> poly_power_coefficients(const std::vector<double>& p,
                                            int k, int max_degree = 400);

// Lower incomplete gamma gamma(s, z), s in (0, 500], z >= 0.
double lower_incomplete_gamma(double s, double z);

// erf(z) for complex z. The evaluation is accuracy-certified for
// |Im z| <= 30; outside that band *certified (if non-null) is set false.
cplx erf_complex(cplx z, bool* certified = nullptr);

// Adaptive Gauss-Kronrod (G7/K15) quadrature of f on [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-12, double abs_tol = 1e-14);

struct MomentInfo {
  bool used_quadrature = false;   // quadrature value replaced the recurrence
  bool erf_route = false;         // r = 0 seed came from the erf closed form
  double cross_check = 0.0;       // |recurrence - quadrature|, when computed
};

// M_r = int_0^T t^{2r} exp(-mu t^2) cos(nu t) dt.
// nu = 0 reduces to the incomplete-gamma closed form; r = 0 uses the
// complex-erf closed form inside its certified region; r >= 1 runs the
// coupled cosine/sine integration-by-parts recurrence, cross-checked
// against adaptive quadrature.
double oscillatory_gaussian_moment(int r, double mu, double nu, double T,
                                   MomentInfo* info = nullptr);

}  // namespace rabi::specfun
