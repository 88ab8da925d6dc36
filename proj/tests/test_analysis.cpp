#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <rabi_limit/analysis.hpp>

#include <algorithm>
#include <cmath>
#include <random>

using namespace rabi;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("log grid endpoints and spacing") {
  const std::vector<double> g = analysis::log_grid(1e-3, 1.0, 31);
  REQUIRE(g.size() == 31);
  CHECK(g.front() == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(g.back() == doctest::Approx(1.0).epsilon(1e-12));
  // constant ratio
  const double ratio = g[1] / g[0];
  for (std::size_t i = 1; i + 1 < g.size(); ++i)
    CHECK(g[i + 1] / g[i] == doctest::Approx(ratio).epsilon(1e-10));
}

TEST_CASE("run_sweep passthrough equals the closed form") {
  const double A = 0.2, t1 = 10.0 * kPi / A;
  const std::vector<double> grid = analysis::log_grid(1e-3, 0.1, 24);
  const analysis::MetricCurve curve =
      analysis::run_sweep(analysis::MetricId::SpinTdAnalytic, A, 2, grid, t1, 0.0);
  REQUIRE(curve.points.size() == grid.size());
  for (const analysis::MetricPoint& p : curve.points) {
    CHECK(p.valid);
    CHECK(p.value == doctest::Approx(metrics::spin_trace_distance_analytic(
                                         2, p.lambda, t1))
                         .epsilon(1e-13));
  }

  SUBCASE("output order is independent of input order") {
    std::vector<double> shuffled = grid;
    std::mt19937 rng(3);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const analysis::MetricCurve again = analysis::run_sweep(
        analysis::MetricId::SpinTdAnalytic, A, 2, shuffled, t1, 0.0);
    REQUIRE(again.points.size() == curve.points.size());
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
      CHECK(again.points[i].lambda == curve.points[i].lambda);
      CHECK(again.points[i].value == curve.points[i].value);
    }
  }

  SUBCASE("duplicate grid values are rejected") {
    std::vector<double> dup = grid;
    dup.push_back(grid[5]);
    CHECK_THROWS_AS((void)analysis::run_sweep(
                        analysis::MetricId::SpinTdAnalytic, A, 2, dup, t1, 0.0),
                    std::invalid_argument);
  }
}

TEST_CASE("per-point failures mark points invalid without aborting the sweep") {
  // the closed-form correlation needs the Laguerre coefficient table, which
  // is capped at n = 30; n = 31 fails per point
  const double A = 0.2, t1 = 10.0 * kPi / A;
  const std::vector<double> grid = analysis::log_grid(1e-2, 0.1, 8);
  const analysis::MetricCurve curve = analysis::run_sweep(
      analysis::MetricId::CorrelationAnalytic, A, 31, grid, t1, 0.0);
  REQUIRE(curve.points.size() == grid.size());
  for (const analysis::MetricPoint& p : curve.points) {
    CHECK_FALSE(p.valid);
    CHECK_FALSE(p.error.empty());
  }
}

TEST_CASE("numeric inflection point of the closed-form curve") {
  const double A = 0.2, t1 = 10.0 * kPi / A;

  SUBCASE("n = 0: exact inflection of (1/2)(1 - e^{-l^2 t^2 / 2}) at 1/t") {
    const analysis::MetricCurve curve =
        analysis::run_sweep(analysis::MetricId::SpinTdAnalytic, A, 0,
                            analysis::log_grid(1e-3, 0.05, 200), t1, 0.0);
    const analysis::InflectionResult r = analysis::inflection_numeric(curve);
    REQUIRE(r.lambda_star.has_value());
    CHECK(*r.lambda_star == doctest::Approx(1.0 / t1).epsilon(0.02));
  }

  SUBCASE("taylor estimate tracks the numeric one for moderate n") {
    for (int n : {4, 8, 16}) {
      const analysis::MetricCurve curve =
          analysis::run_sweep(analysis::MetricId::SpinTdAnalytic, A, n,
                              analysis::log_grid(2e-4, 0.05, 160), t1, 0.0);
      const analysis::InflectionResult num = analysis::inflection_numeric(curve);
      const analysis::InflectionResult tay = analysis::inflection_taylor(n, t1);
      REQUIRE(num.lambda_star.has_value());
      REQUIRE(tay.lambda_star.has_value());
      CHECK(std::abs(*num.lambda_star / *tay.lambda_star - 1.0) < 0.1);
    }
  }

  SUBCASE("monotone-curvature data has no inflection") {
    // a pure power law is convex on log-log axes everywhere
    analysis::MetricCurve fake;
    fake.t1 = t1;
    for (double l : analysis::log_grid(1e-3, 1e-1, 60))
      fake.points.push_back({l, 3.0 * l * l, true, {}});
    CHECK_FALSE(analysis::inflection_numeric(fake).lambda_star.has_value());
  }

  SUBCASE("too few points throws") {
    analysis::MetricCurve tiny;
    for (double l : analysis::log_grid(1e-3, 1e-2, 5))
      tiny.points.push_back({l, l, true, {}});
    CHECK_THROWS_AS((void)analysis::inflection_numeric(tiny),
                    std::invalid_argument);
  }
}

TEST_CASE("small-coupling expansion coefficients via a long-double series oracle") {
  // D(l) = (1/2)(1 - L_n(l^2 t^2) e^{-l^2 t^2 / 2}) expands as
  // (1/2)(a l^2 - b l^4 + c l^6 - ...). Recover a, b, c from the series
  // product L_n(s) e^{-s/2} in long double and verify the inflection root.
  const int n = 3;
  const double t = 25.0;
  // series of L_n(s): coefficients up to s^3
  long double L[4] = {1.0L, -(long double)n,
                      (long double)n * (n - 1) / 4.0L,
                      -(long double)n * (n - 1) * (n - 2) / 36.0L};
  // series of e^{-s/2}
  long double E[4] = {1.0L, -0.5L, 0.125L, -1.0L / 48.0L};
  long double X[4] = {0.0L, 0.0L, 0.0L, 0.0L};  // product coefficients in s
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j + i < 4; ++j) X[i + j] += L[i] * E[j];
  // with s = l^2 t^2: D = (1/2)(-X1 t^2 l^2 - X2 t^4 l^4 - X3 t^6 l^6 - ...)
  const double a = (double)(-X[1]) * t * t;
  const double b = (double)(X[2]) * t * t * t * t;
  const double c = (double)(-X[3]) * t * t * t * t * t * t;
  // these are twice the canonical a = (2n+1)t^2/4, b = (2n^2+2n+1)t^4/16,
  // c = (4n^3+6n^2+8n+3)t^6/288; the overall scale cancels in the root
  CHECK(a == doctest::Approx(2.0 * (2.0 * n + 1.0) * t * t / 4.0).epsilon(1e-12));
  CHECK(b == doctest::Approx(2.0 * (2.0 * n * n + 2.0 * n + 1.0) *
                             std::pow(t, 4) / 16.0)
                 .epsilon(1e-12));
  CHECK(c == doctest::Approx(2.0 * (4.0 * std::pow(n, 3) + 6.0 * n * n +
                                    8.0 * n + 3.0) *
                             std::pow(t, 6) / 288.0)
                 .epsilon(1e-12));
  const double disc = 144.0 * b * b - 240.0 * a * c;
  REQUIRE(disc > 0.0);
  const double l2 = (12.0 * b - std::sqrt(disc)) / (60.0 * c);
  const analysis::InflectionResult tay = analysis::inflection_taylor(n, t);
  REQUIRE(tay.lambda_star.has_value());
  CHECK(*tay.lambda_star == doctest::Approx(std::sqrt(l2)).epsilon(1e-10));
}

TEST_CASE("asymptotic inflection estimate") {
  const double t = 50.0;
  SUBCASE("n = 0 has no expansion root") {
    CHECK_FALSE(analysis::inflection_taylor(0, t).lambda_star.has_value());
  }
  SUBCASE("constant sqrt((9 - sqrt(21)) / 5)") {
    const analysis::InflectionResult r = analysis::inflection_large_n(1, t);
    REQUIRE(r.lambda_star.has_value());
    CHECK(*r.lambda_star ==
          doctest::Approx(std::sqrt((9.0 - std::sqrt(21.0)) / 5.0) / t)
              .epsilon(1e-12));
    CHECK(*r.lambda_star == doctest::Approx(0.93994 / t).epsilon(1e-4));
  }
  SUBCASE("agrees with the expansion root as n grows") {
    const double tay = *analysis::inflection_taylor(1000, t).lambda_star;
    const double asym = *analysis::inflection_large_n(1000, t).lambda_star;
    CHECK(std::abs(tay / asym - 1.0) < 5e-3);
  }
}

TEST_CASE("power-law fit") {
  SUBCASE("exact recovery") {
    std::vector<std::pair<double, double>> pts;
    for (double x : {1.0, 2.0, 5.0, 9.0, 20.0})
      pts.push_back({x, 3.2 * std::pow(x, -0.5)});
    const analysis::PowerLawFit fit = analysis::fit_power_law(pts);
    CHECK(fit.exponent == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(fit.prefactor == doctest::Approx(3.2).epsilon(1e-12));
    CHECK(fit.residual < 1e-12);
  }
  SUBCASE("degenerate inputs throw") {
    CHECK_THROWS_AS((void)analysis::fit_power_law({{2.0, 1.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)analysis::fit_power_law({{2.0, 1.0}, {2.0, 3.0}}),
                    std::invalid_argument);
  }
}

TEST_CASE("evaluate_point matches the sweep values") {
  const double A = 0.2, t1 = 10.0 * kPi / A;
  const double lambda = 0.02;
  const double direct = analysis::evaluate_point(
      analysis::MetricId::SpinTdAnalytic, A, 1, lambda, t1, 0.0);
  CHECK(direct == doctest::Approx(metrics::spin_trace_distance_analytic(
                                      1, lambda, t1))
                      .epsilon(1e-14));
}
