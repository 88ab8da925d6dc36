#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <rabi_limit/metrics.hpp>
#include <rabi_limit/specfun.hpp>

#include <cmath>
#include <vector>

using namespace rabi;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("closed-form spin trace distance") {
  // n = 0, lambda t = 1: (1/2)(1 - e^{-1/2})
  CHECK(metrics::spin_trace_distance_analytic(0, 0.1, 10.0) ==
        doctest::Approx(0.5 * (1.0 - std::exp(-0.5))).epsilon(1e-14));
  CHECK(metrics::spin_trace_distance_analytic(3, 0.1, 0.0) ==
        doctest::Approx(0.0));
  // general n via the Laguerre evaluation
  for (int n : {1, 2, 5}) {
    const double lambda = 0.07, t = 6.0, s = lambda * lambda * t * t;
    const double want =
        0.5 * (1.0 - specfun::laguerre(n, s) * std::exp(-0.5 * s));
    CHECK(metrics::spin_trace_distance_analytic(n, lambda, t) ==
          doctest::Approx(want).epsilon(1e-13));
  }
  // bounded in [0, 1]
  for (double lt : {0.5, 2.0, 9.0}) {
    const double d = metrics::spin_trace_distance_analytic(4, 1.0, lt);
    CHECK(d >= 0.0);
    CHECK(d <= 1.0);
  }
}

TEST_CASE("closed-form field trace distance geometry") {
  const int n = 2;
  const double lambda = 0.03, alpha = 10.0, t = 11.0;
  metrics::FbrwaFieldGeometry geo;
  const double d = metrics::field_trace_distance_fbrwa(n, lambda, alpha, t, &geo);
  CHECK(d >= 0.0);
  CHECK(d <= 1.0);

  // kappa and zeta are the two Laguerre-Gaussian envelope factors
  const double s = lambda * lambda * t * t;
  CHECK(geo.kappa == doctest::Approx(std::exp(-s / 8.0) *
                                     specfun::laguerre(n, s / 4.0))
                         .epsilon(1e-12));
  CHECK(geo.zeta == doctest::Approx(std::exp(-s / 2.0) *
                                    specfun::laguerre(n, s))
                        .epsilon(1e-12));
  CHECK(geo.phi == doctest::Approx(lambda * alpha * t).epsilon(1e-13));

  // the difference operator is traceless: its eigenvalues sum to zero,
  // and the distance is half the absolute sum
  CHECK(std::abs(geo.chi[0] + geo.chi[1] + geo.chi[2]) < 1e-10);
  CHECK(d == doctest::Approx(0.5 * (std::abs(geo.chi[0]) + std::abs(geo.chi[1]) +
                                    std::abs(geo.chi[2])))
                 .epsilon(1e-12));

  SUBCASE("t = 0 gives identical states") {
    CHECK(metrics::field_trace_distance_fbrwa(n, lambda, alpha, 0.0) < 1e-12);
  }
}

TEST_CASE("pearson correlation of sampled series") {
  std::vector<double> f(256), g(256), h(256);
  for (int i = 0; i < 256; ++i) {
    const double t = i * 0.1;
    f[i] = std::cos(2.0 * t) + 0.3 * std::cos(5.0 * t);
    g[i] = 2.5 * f[i] + 1.0;  // affine image: r = 1
    h[i] = -f[i];             // sign flip: r = -1
  }
  const metrics::PearsonResult same = metrics::pearson(f, g);
  CHECK(same.r_time == doctest::Approx(1.0).epsilon(1e-12));
  const metrics::PearsonResult flip = metrics::pearson(f, h);
  CHECK(flip.r_time == doctest::Approx(-1.0).epsilon(1e-12));

  // Plancherel: spectral and time-domain r agree
  std::vector<double> noisy(f);
  for (int i = 0; i < 256; ++i) noisy[i] += 0.05 * std::sin(11.0 * i);
  const metrics::PearsonResult mixed = metrics::pearson(f, noisy);
  CHECK(std::abs(mixed.r_spectral - mixed.r_time) < 1e-10);
  CHECK(mixed.r_time < 1.0);
  CHECK(mixed.r_time > 0.9);
}

TEST_CASE("correlation metric: closed form vs sampled dynamics") {
  const double A = 0.2;
  const int n = 1, N = 10;
  const double T = N * kPi / A;
  // the closed form carries only the leading quantum correction, so compare
  // in the weak-coupling regime where that correction dominates
  const double lambda = 0.01;
  const double closed = metrics::correlation_analytic(n, lambda, A / lambda, N);
  const double sampled = metrics::correlation_numeric(A, n, lambda, T, 2048, 0.0);
  CHECK(std::abs(closed - sampled) < 5e-3);
  CHECK(closed >= 0.0);
  CHECK(closed <= 2.0);

  SUBCASE("vanishes in the weak-coupling limit") {
    CHECK(metrics::correlation_analytic(0, 1e-4, 2000.0, N) < 1e-6);
  }
}

TEST_CASE("entropy metric") {
  SUBCASE("small window: series vs direct quadrature") {
    const int n = 2, N = 10;
    const double lambda = 0.04, alpha = 5.0;
    const double T = N * kPi / (lambda * alpha);
    const double closed =
        metrics::entropy_analytic(n, lambda, alpha, N, 1e-8, nullptr, 50000);
    const double direct =
        specfun::integrate(
            [&](double t) {
              const double s = lambda * lambda * t * t;
              const double X = specfun::laguerre(n, s) * std::exp(-0.5 * s);
              return hilbert::binary_entropy_symmetric(X);
            },
            0.0, T, 1e-12, 1e-14) /
        T;
    CHECK(std::abs(closed - direct) < 1e-6);
    CHECK(closed <= std::log(2.0));
    CHECK(closed >= 0.0);
  }

  SUBCASE("tolerance cap raises ToleranceError") {
    CHECK_THROWS_AS(
        (void)metrics::entropy_analytic(1, 0.05, 4.0, 10, 1e-12, nullptr, 3),
        ToleranceError);
  }

  SUBCASE("series state reports the depth used") {
    metrics::EntropySeriesState st;
    (void)metrics::entropy_analytic(0, 0.05, 4.0, 10, 1e-6, &st, 50000);
    CHECK(st.n == 0);
    CHECK(st.m_max >= 1);
    CHECK(st.tail_bound < 1e-6);
  }

  SUBCASE("sampled average matches the closed form at weak coupling") {
    const double A = 0.2, lambda = 0.01;
    const double T = 10.0 * kPi / A;
    const double sampled = metrics::entropy_numeric(A, 1, lambda, T, 2048, 0.0);
    const double closed =
        metrics::entropy_analytic(1, lambda, A / lambda, 10, 1e-8, nullptr, 50000);
    CHECK(std::abs(sampled - closed) < 2e-3);
  }
}

TEST_CASE("numeric metrics agree across engine routes") {
  const double A = 0.2, lambda = 0.05, Delta = 0.0;
  const double t1 = 10.0 * kPi / A;
  metrics::EngineOptions lab;
  lab.route = metrics::EngineRoute::Lab;
  metrics::EngineOptions disp;
  disp.route = metrics::EngineRoute::Displaced;
  const double d_lab = metrics::spin_trace_distance_numeric(A, 1, lambda, t1, Delta, lab);
  const double d_disp =
      metrics::spin_trace_distance_numeric(A, 1, lambda, t1, Delta, disp);
  CHECK(std::abs(d_lab - d_disp) < 1e-8);

  const double f_lab =
      metrics::field_trace_distance_numeric(A, 1, lambda, t1, Delta, lab);
  const double f_disp =
      metrics::field_trace_distance_numeric(A, 1, lambda, t1, Delta, disp);
  CHECK(std::abs(f_lab - f_disp) < 1e-6);
}

TEST_CASE("metrics decrease towards the weak-coupling limit") {
  const double A = 0.2, t1 = 10.0 * kPi / A;
  // the closed-form spin TD is monotone in lambda below the inflection point
  double prev = -1.0;
  for (double lambda : {1e-3, 3e-3, 1e-2}) {
    const double d = metrics::spin_trace_distance_analytic(2, lambda, t1);
    CHECK(d > prev);
    prev = d;
  }
}
