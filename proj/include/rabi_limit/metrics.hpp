#pragma once

#include <vector>

#include "rabi_limit/dynamics.hpp"

namespace rabi::metrics {

using cplx = std::complex<double>;

enum class EngineRoute { Lab, Displaced, Auto };

struct EngineOptions {
  EngineRoute route = EngineRoute::Auto;
  // Auto picks the lab route while the predicted truncation stays below this.
  int lab_n_trunc_limit = 200000;
  bool validate = false;  // enable the sampling-convergence cross-checks
};

// Intermediates of the closed-form field trace distance.
struct FbrwaFieldGeometry {
  double kappa = 0.0;  // e^{-l^2t^2/8} L_n(l^2t^2/4)
  double zeta = 0.0;   // e^{-l^2t^2/2} L_n(l^2t^2)
  double phi = 0.0;    // lambda |alpha| t
  cplx c0p, c0m, c1p, c1m, c2m;  // Gram-Schmidt coefficients
  double a = 0.0, b = 0.0, theta = 0.0;  // depressed-cubic data
  double chi[3] = {0.0, 0.0, 0.0};       // eigenvalues of Delta
};

FbrwaFieldGeometry fbrwa_field_geometry(int n, double lambda, double alpha_abs,
                                        double t);

// (1/2)[1 - L_n(l^2 t^2) e^{-l^2 t^2 / 2}]
double spin_trace_distance_analytic(int n, double lambda, double t);

// Closed-form field trace distance from the 3x3 overlap geometry.
double field_trace_distance_fbrwa(int n, double lambda, double alpha_abs,
                                  double t, FbrwaFieldGeometry* geo = nullptr);

// Numeric metrics from exact JC dynamics at |alpha| = A / lambda, spin |+z>.
double spin_trace_distance_numeric(double A, int n, double lambda, double t1,
                                   double Delta, const EngineOptions& = {});
double field_trace_distance_numeric(double A, int n, double lambda, double t1,
                                    double Delta, const EngineOptions& = {});

struct PearsonResult {
  double r_spectral;
  double r_time;
};

// Pearson correlation of two equally sampled series, mean-subtracted,
// evaluated both on the DFT spectra and in the time domain (Plancherel).
PearsonResult pearson(const std::vector<double>& f, const std::vector<double>& g);

// 1 - r between exact and semiclassical inversion spectra over [0, T].
double correlation_numeric(double A, int n, double lambda, double T,
                           int samples, double Delta,
                           const EngineOptions& = {},
                           bool* sampling_converged = nullptr);

// Closed-form 1 - r from the Laguerre/moment decomposition.
double correlation_analytic(int n, double lambda, double alpha_abs, int N);

// Trapezoid average of the reduced-spin entropy over [0, T].
double entropy_numeric(double A, int n, double lambda, double T, int samples,
                       double Delta, const EngineOptions& = {},
                       bool* sampling_converged = nullptr);

struct EntropySeriesState {
  int n = 0;
  double lambda = 0.0;
  double T = 0.0;
  int m_max = 0;
  double tail_bound = 0.0;
};

// ln 2 minus the adaptive double series of the windowed-average entropy.
// Throws ToleranceError if m_cap is reached before the tail bound drops
// below tol.
double entropy_analytic(int n, double lambda, double alpha_abs, int N,
                        double tol, EntropySeriesState* state = nullptr,
                        int m_cap = 200);

}  // namespace rabi::metrics
