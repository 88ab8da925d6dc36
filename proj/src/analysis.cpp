#include "rabi_limit/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace rabi::analysis {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Least-squares quadratic y = c0 + c1 x + c2 x^2 over the window; returns
// {c2, rms residual}.
std::pair<double, double> quadratic_curvature(const MetricPoint* pts, int w,
                                              double x0) {
  Eigen::MatrixXd X(w, 3);
  Eigen::VectorXd y(w);
  for (int i = 0; i < w; ++i) {
    const double x = pts[i].lambda - x0;  // center for conditioning
    X(i, 0) = 1.0;
    X(i, 1) = x;
    X(i, 2) = x * x;
    y(i) = pts[i].value;
  }
  const Eigen::Vector3d c = X.colPivHouseholderQr().solve(y);
  const double rms = std::sqrt((X * c - y).squaredNorm() / w);
  return {2.0 * c(2), rms};
}

}  // namespace

double evaluate_point(MetricId metric, double A, int n, double lambda,
                      double t1, double Delta, const SweepOptions& opts) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("run_sweep: lambda must be > 0");
  const double alpha_abs = A / lambda;
  // Periods contained in the window, for the closed forms defined at t = N tau_R.
  const int N = std::max(1, static_cast<int>(std::lround(t1 * A / kPi)));
  switch (metric) {
    case MetricId::SpinTdNumeric:
      return metrics::spin_trace_distance_numeric(A, n, lambda, t1, Delta,
                                                  opts.engine);
    case MetricId::SpinTdAnalytic:
      return metrics::spin_trace_distance_analytic(n, lambda, t1);
    case MetricId::FieldTdNumeric:
      return metrics::field_trace_distance_numeric(A, n, lambda, t1, Delta,
                                                   opts.engine);
    case MetricId::FieldTdFbrwa:
      return metrics::field_trace_distance_fbrwa(n, lambda, alpha_abs, t1);
    case MetricId::CorrelationNumeric:
      return metrics::correlation_numeric(A, n, lambda, t1, opts.samples,
                                          Delta, opts.engine);
    case MetricId::CorrelationAnalytic:
      return metrics::correlation_analytic(n, lambda, alpha_abs, N);
    case MetricId::EntropyNumeric:
      return metrics::entropy_numeric(A, n, lambda, t1, opts.samples, Delta,
                                      opts.engine);
    case MetricId::EntropyAnalytic:
      return metrics::entropy_analytic(n, lambda, alpha_abs, N,
                                       opts.entropy_tol, nullptr,
                                       opts.entropy_m_cap);
  }
  throw std::invalid_argument("run_sweep: unknown metric id");
}

std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2)
    throw std::invalid_argument("log_grid: need 0 < lo < hi and count >= 2");
  std::vector<double> g(count);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < count; ++i)
    g[i] = std::exp(llo + (lhi - llo) * i / (count - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

MetricCurve run_sweep(MetricId metric, double A, int n,
                      std::vector<double> lambda_grid, double t1, double Delta,
                      const SweepOptions& opts) {
  if (!(A > 0.0) || n < 0 || !(t1 > 0.0))
    throw std::invalid_argument("run_sweep: need A > 0, n >= 0, t1 > 0");
  std::sort(lambda_grid.begin(), lambda_grid.end());
  if (std::adjacent_find(lambda_grid.begin(), lambda_grid.end()) !=
      lambda_grid.end())
    throw std::invalid_argument("run_sweep: lambda grid has duplicates");

  MetricCurve curve;
  curve.metric = metric;
  curve.A = A;
  curve.n = n;
  curve.t1 = t1;
  curve.Delta = Delta;
  curve.points.resize(lambda_grid.size());
  for (std::size_t i = 0; i < lambda_grid.size(); ++i)
    curve.points[i].lambda = lambda_grid[i];

  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  int workers = opts.workers > 0 ? opts.workers : std::max(1, hw);
  workers = std::min<int>(workers, static_cast<int>(lambda_grid.size()));

  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= curve.points.size()) return;
      MetricPoint& p = curve.points[i];
      try {
        p.value = evaluate_point(metric, A, n, p.lambda, t1, Delta, opts);
        p.valid = true;
      } catch (const std::exception& e) {
        p.valid = false;
        p.error = e.what();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return curve;
}

InflectionResult inflection_numeric(const MetricCurve& curve, int window) {
  if (window < 5 || window % 2 == 0)
    throw std::invalid_argument("inflection_numeric: window must be odd, >= 5");
  std::vector<MetricPoint> pts;
  pts.reserve(curve.points.size());
  for (const MetricPoint& p : curve.points)
    if (p.valid) pts.push_back(p);
  if (static_cast<int>(pts.size()) < std::max(15, window))
    throw std::invalid_argument("inflection_numeric: need >= 15 valid points");

  const int half = window / 2;
  const int centers = static_cast<int>(pts.size()) - 2 * half;

  // curvature of the local quadratic fit whose window is centered nearest x
  auto curvature_at = [&](double x, double* rms) {
    int c = half;
    for (int i = half; i < half + centers; ++i)
      if (std::abs(pts[i].lambda - x) < std::abs(pts[c].lambda - x)) c = i;
    auto [k, r] = quadratic_curvature(&pts[c - half], window, x);
    if (rms) *rms = r;
    return k;
  };

  InflectionResult result;
  result.method = InflectionMethod::Numeric;
  result.window = window;
  double prev = curvature_at(pts[half].lambda, nullptr);
  for (int i = 1; i < centers; ++i) {
    const double cur = curvature_at(pts[half + i].lambda, nullptr);
    if (prev != 0.0 && cur != 0.0 && (prev > 0.0) != (cur > 0.0)) {
      double lo = pts[half + i - 1].lambda, hi = pts[half + i].lambda;
      double flo = prev;
      for (int it = 0; it < 80 && hi - lo > 1e-14 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = curvature_at(mid, nullptr);
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((fm > 0.0) == (flo > 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      const double star = 0.5 * (lo + hi);
      double rms = 0.0;
      curvature_at(star, &rms);
      result.lambda_star = star;
      result.residual = rms;
      return result;
    }
    prev = cur;
  }
  return result;  // monotone curvature: absent
}

InflectionResult inflection_taylor(int n, double t) {
  if (n < 0 || !(t > 0.0))
    throw std::invalid_argument("inflection_taylor: need n >= 0, t > 0");
  const double t2 = t * t;
  const double a = (2.0 * n + 1.0) * t2 / 4.0;
  const double b = (2.0 * n * n + 2.0 * n + 1.0) * t2 * t2 / 16.0;
  const double c =
      (4.0 * std::pow(n, 3) + 6.0 * n * n + 8.0 * n + 3.0) * t2 * t2 * t2 / 288.0;
  InflectionResult result;
  result.method = InflectionMethod::Taylor;
  const double disc = 144.0 * b * b - 240.0 * a * c;
  if (disc < 0.0) return result;  // no real curvature root (n = 0)
  const double l2 = (12.0 * b - std::sqrt(disc)) / (60.0 * c);
  if (l2 > 0.0) result.lambda_star = std::sqrt(l2);
  return result;
}

InflectionResult inflection_large_n(int n, double t) {
  if (n < 1 || !(t > 0.0))
    throw std::invalid_argument("inflection_large_n: need n >= 1, t > 0");
  InflectionResult result;
  result.method = InflectionMethod::LargeN;
  result.lambda_star =
      std::sqrt((9.0 - std::sqrt(21.0)) / 5.0) / (t * std::sqrt(double(n)));
  return result;
}

PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2)
    throw std::invalid_argument("fit_power_law: need at least two points");
  const int m = static_cast<int>(points.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0))
      throw std::invalid_argument("fit_power_law: points must be positive");
    const double lx = std::log(x), ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double det = m * sxx - sx * sx;
  if (std::abs(det) < 1e-12 * m * sxx)
    throw std::invalid_argument("fit_power_law: degenerate abscissae");
  PowerLawFit fit;
  fit.exponent = (m * sxy - sx * sy) / det;
  const double intercept = (sy - fit.exponent * sx) / m;
  fit.prefactor = std::exp(intercept);
  double ss = 0.0;
  for (const auto& [x, y] : points) {
    const double r = std::log(y) - (intercept + fit.exponent * std::log(x));
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / m);
  return fit;
}

}  // namespace rabi::analysis
