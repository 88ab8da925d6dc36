#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rabi_limit/metrics.hpp"

namespace rabi::analysis {

enum class MetricId {
  SpinTdNumeric,
  SpinTdAnalytic,
  FieldTdNumeric,
  FieldTdFbrwa,
  CorrelationNumeric,
  CorrelationAnalytic,
  EntropyNumeric,
  EntropyAnalytic,
};

struct MetricPoint {
  double lambda = 0.0;
  double value = 0.0;
  bool valid = false;
  std::string error;  // empty when valid
};

struct MetricCurve {
  MetricId metric = MetricId::SpinTdAnalytic;
  double A = 0.0;
  int n = 0;
  double t1 = 0.0;
  double Delta = 0.0;
  std::vector<MetricPoint> points;  // lambda strictly increasing
};

struct SweepOptions {
  metrics::EngineOptions engine;
  int samples = 2048;        // time grid for the sampled numeric metrics
  double entropy_tol = 1e-8;
  int entropy_m_cap = 50000;  // series terms decay ~ m^-5/2, so deep sums
  int workers = 0;           // 0 -> hardware concurrency
};

std::vector<double> log_grid(double lo, double hi, int count);

// Single metric evaluation at one lambda; throws on failure.
double evaluate_point(MetricId metric, double A, int n, double lambda,
                      double t1, double Delta, const SweepOptions& opts = {});

// Evaluates the metric at each lambda with |alpha| = A / lambda. Points are
// computed concurrently; per-point failures mark the point invalid instead of
// aborting. Output is sorted by lambda regardless of input order.
MetricCurve run_sweep(MetricId metric, double A, int n,
                      std::vector<double> lambda_grid, double t1, double Delta,
                      const SweepOptions& opts = {});

enum class InflectionMethod { Numeric, Taylor, LargeN };

struct InflectionResult {
  std::optional<double> lambda_star;
  InflectionMethod method = InflectionMethod::Numeric;
  int window = 0;      // numeric method: fit window size
  double residual = 0.0;
};

// Sliding local-quadratic curvature estimate on (lambda, value); smallest-
// lambda sign change of the second derivative, refined by bisection on the
// fitted curvature. Requires >= 15 valid points.
InflectionResult inflection_numeric(const MetricCurve& curve, int window = 7);

// Inflection of the small-lambda expansion  D ~ a l^2 - b l^4 + c l^6 with
// a = (2n+1)t^2/4, b = (2n^2+2n+1)t^4/16, c = (4n^3+6n^2+8n+3)t^6/288;
// absent when the quartic in lambda^2 has no real root (n = 0).
InflectionResult inflection_taylor(int n, double t);

// Asymptotic  lambda_star = sqrt((9 - sqrt(21))/5) / (t sqrt(n)),  n >= 1.
InflectionResult inflection_large_n(int n, double t);

struct PowerLawFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double residual = 0.0;  // rms residual in log-log space
};

// Least-squares line on (ln n, ln lambda_star).
PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points);

}  // namespace rabi::analysis
