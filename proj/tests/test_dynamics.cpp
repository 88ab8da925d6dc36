#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <rabi_limit/dynamics.hpp>

#include <cmath>
#include <complex>

using namespace rabi;
using cplx = std::complex<double>;

namespace {

hilbert::JointKet plus_z_with_field(const hilbert::FockKet& field) {
  hilbert::JointKet ket;
  ket.n_trunc = field.n_trunc();
  ket.amps = Eigen::VectorXcd::Zero(2 * ket.n_trunc);
  ket.amps.head(ket.n_trunc) = field.amps;
  return ket;
}

double inversion_of(const hilbert::JointKet& ket) {
  const int N = ket.n_trunc;
  return ket.amps.head(N).squaredNorm() - ket.amps.tail(N).squaredNorm();
}

}  // namespace

TEST_CASE("vacuum Rabi oscillation") {
  const dynamics::ModelParams params{1.0, 1.0, 0.25};
  hilbert::JointKet init;
  init.n_trunc = 16;
  init.amps = Eigen::VectorXcd::Zero(32);
  init.amps[0] = 1.0;  // |+z, 0>
  for (double t : {0.3, 1.0, 4.7, 20.0}) {
    const hilbert::JointKet out = dynamics::jc_propagate_lab(init, params, t);
    const double pe = std::norm(out.amp(0, 0));
    CHECK(pe == doctest::Approx(std::pow(std::cos(params.lambda * t), 2))
                    .epsilon(1e-12));
    CHECK(std::abs(out.norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("lab propagation conserves norm and excitation number") {
  const dynamics::ModelParams params{1.0, 1.0, 0.1};
  const hilbert::FockKet field = hilbert::make_displaced_fock(cplx(2.0, 0.5), 1);
  hilbert::JointKet init = plus_z_with_field(field);
  const hilbert::JointKet out = dynamics::jc_propagate_lab(init, params, 12.0);
  CHECK(std::abs(out.norm() - 1.0) < 1e-11);

  // excitation operator N = a^dag a + |+z><+z|
  auto excitation = [](const hilbert::JointKet& k) {
    double e = 0.0;
    for (int m = 0; m < k.n_trunc; ++m) {
      e += (m + 1) * std::norm(k.amp(0, m));
      e += m * std::norm(k.amp(1, m));
    }
    return e;
  };
  CHECK(excitation(out) == doctest::Approx(excitation(init)).epsilon(1e-10));
}

TEST_CASE("semiclassical spin state matches the detuned RWA closed form") {
  // From |+z>, H = (Delta/2) sz + A sx in the rotating frame gives
  // W(t) = (Delta^2 + 4 A^2 cos(2 sqrt(A^2 + Delta^2/4) t)) / (Delta^2 + 4 A^2)
  for (double A : {0.2, 0.7})
    for (double Delta : {0.0, 0.3, -0.9})
      for (double t : {0.0, 1.3, 8.0}) {
        const double omega = std::sqrt(A * A + 0.25 * Delta * Delta);
        const double want = (Delta * Delta +
                             4.0 * A * A * std::cos(2.0 * omega * t)) /
                            (Delta * Delta + 4.0 * A * A);
        CHECK(dynamics::semiclassical_inversion(A, Delta, t) ==
              doctest::Approx(want).epsilon(1e-12));
        const Eigen::Matrix2cd rho =
            dynamics::semiclassical_spin_state(A, Delta, 1.0, t);
        CHECK(std::abs(rho.trace().real() - 1.0) < 1e-12);
        CHECK((rho * rho - rho).norm() < 1e-10);  // pure state
        CHECK((rho(0, 0) - rho(1, 1)).real() ==
              doctest::Approx(want).epsilon(1e-10));
      }
}

TEST_CASE("displaced route agrees with the lab route") {
  const double lambda = 0.05;
  const cplx alpha(4.0, 0.0);
  const int n = 2;
  const dynamics::ModelParams params{1.0, 1.0, lambda};
  const double t = 10.0 * dynamics::rabi_period(lambda * std::abs(alpha));

  const hilbert::FockKet field = hilbert::make_displaced_fock(alpha, n);
  const hilbert::JointKet lab =
      dynamics::jc_propagate_lab(plus_z_with_field(field), params, t);

  const int n_small = dynamics::displaced_n_small(n, lambda, t);
  const hilbert::JointKet disp = dynamics::jc_propagate_displaced(
      Eigen::Vector2cd(1.0, 0.0), n, params, alpha, t, n_small);

  const Eigen::Matrix2cd rho_lab = dynamics::reduced_spin_lab(lab);
  const Eigen::Matrix2cd rho_disp = dynamics::reduced_spin_lab(disp);
  CHECK(hilbert::trace_distance(Eigen::MatrixXcd(rho_lab),
                                Eigen::MatrixXcd(rho_disp)) < 1e-8);
  CHECK(inversion_of(lab) == doctest::Approx(inversion_of(disp)).epsilon(1e-8));
}

TEST_CASE("DisplacedPropagator sampling matches the one-shot helper") {
  const double lambda = 0.08;
  const cplx alpha(3.0, 1.0);
  const dynamics::ModelParams params{1.2, 1.0, lambda};
  const int n = 1;
  const int n_small = dynamics::displaced_n_small(n, lambda, 30.0);
  dynamics::DisplacedPropagator prop(Eigen::Vector2cd(1.0, 0.0), n, params,
                                     alpha, n_small);
  for (double t : {0.0, 5.0, 17.0, 30.0}) {
    const hilbert::JointKet one_shot = dynamics::jc_propagate_displaced(
        Eigen::Vector2cd(1.0, 0.0), n, params, alpha, t, n_small);
    const hilbert::JointKet sampled = prop.state(t);
    CHECK((one_shot.amps - sampled.amps).norm() < 1e-11);
    CHECK(prop.inversion(t) ==
          doctest::Approx(inversion_of(one_shot)).epsilon(1e-11));
  }
}

TEST_CASE("frame transforms round-trip and preserve sigma_z") {
  const dynamics::ModelParams params{1.0, 1.0, 0.1};
  const hilbert::FockKet field = hilbert::make_displaced_fock(cplx(1.5, 0.7), 1);
  hilbert::JointKet lab = plus_z_with_field(field);
  lab.t = 3.7;

  for (hilbert::Frame mid :
       {hilbert::Frame::FieldInteraction, hilbert::Frame::RotatingDisplaced}) {
    const hilbert::JointKet there =
        dynamics::frame_transform(lab, mid, params, cplx(1.5, 0.7));
    CHECK(std::abs(there.norm() - 1.0) < 1e-11);
    const hilbert::JointKet back =
        dynamics::frame_transform(there, hilbert::Frame::Lab, params);
    CHECK((back.amps - lab.amps).norm() < 1e-9);
  }

  // sigma_z is invariant under both picture changes (they act diagonally in
  // spin up to the co-rotating phase, which cancels in |amp|^2 sums)
  const hilbert::JointKet rot = dynamics::frame_transform(
      lab, hilbert::Frame::FieldInteraction, params, cplx(0.0, 0.0));
  CHECK(inversion_of(rot) == doctest::Approx(inversion_of(lab)).epsilon(1e-11));
}

TEST_CASE("closed-form envelope model internal consistency") {
  const int n = 2;
  const double lambda = 0.05;
  const cplx alpha(8.0, 0.0);
  const double t = 14.0;

  SUBCASE("spin density matches (1/2)(I + X sz) and the inversion factorizes") {
    const double s = lambda * lambda * t * t;
    double L = 1.0;  // L_2(s) by hand
    L = 1.0 - 2.0 * s + 0.5 * s * s;
    const double X = L * std::exp(-0.5 * s);
    const Eigen::Matrix2cd rho = dynamics::fbrwa_spin_density(n, lambda, t);
    CHECK(std::abs(rho.trace().real() - 1.0) < 1e-14);
    CHECK((rho(0, 0) - rho(1, 1)).real() == doctest::Approx(X).epsilon(1e-12));
    CHECK(std::abs(rho(0, 1)) < 1e-15);
    CHECK(dynamics::fbrwa_inversion(n, lambda, std::abs(alpha), t) ==
          doctest::Approx(X * std::cos(2.0 * lambda * std::abs(alpha) * t))
              .epsilon(1e-12));
  }

  SUBCASE("branch centers and their overlap") {
    const int nt = hilbert::default_n_trunc(std::abs(alpha) + 1.0, n);
    const dynamics::FbrwaState st =
        dynamics::fbrwa_joint_state(alpha, n, lambda, t, nt);
    // branches alpha_pm = alpha e^{-i w0 t} (1 -/+ i lambda t / (2 |alpha|))
    const cplx rot = std::exp(cplx(0.0, -t));
    const cplx want_p =
        alpha * rot * (1.0 - cplx(0.0, 1.0) * lambda * t / (2.0 * std::abs(alpha)));
    const cplx want_m =
        alpha * rot * (1.0 + cplx(0.0, 1.0) * lambda * t / (2.0 * std::abs(alpha)));
    CHECK(std::abs(st.branches.alpha_plus - want_p) < 1e-12);
    CHECK(std::abs(st.branches.alpha_minus - want_m) < 1e-12);

    // the centers sit lambda*t apart, so |<a+, n | a-, n>| is the envelope
    // factor e^{-l^2t^2/2} |L_n(l^2t^2)|; the branch-to-center overlap uses
    // the half separation (arguments / 4)
    const double s = lambda * lambda * t * t;
    auto laguerre2 = [](double x) { return 1.0 - 2.0 * x + 0.5 * x * x; };
    const double zeta = std::abs(laguerre2(s)) * std::exp(-0.5 * s);
    CHECK(std::abs(hilbert::displaced_fock_overlap(st.branches.alpha_plus,
                                                   st.branches.alpha_minus, n)) ==
          doctest::Approx(zeta).epsilon(1e-10));
    const double kappa = std::abs(laguerre2(s / 4.0)) * std::exp(-s / 8.0);
    CHECK(std::abs(hilbert::displaced_fock_overlap(
              st.branches.alpha_plus, alpha * rot, n)) ==
          doctest::Approx(kappa).epsilon(1e-10));
  }

  SUBCASE("field density is a proper state of rank <= 2") {
    const int nt = hilbert::default_n_trunc(std::abs(alpha) + 1.0, n);
    const hilbert::DensityMatrix rho =
        dynamics::fbrwa_field_density(alpha, n, lambda, t, nt);
    CHECK(std::abs(rho.m.trace().real() - 1.0) < 1e-9);
    CHECK(rho.min_eigenvalue() > -1e-10);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.m);
    int rank = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
      if (es.eigenvalues()[i] > 1e-9) ++rank;
    CHECK(rank <= 2);
  }
}

TEST_CASE("displaced-frame box sizing floor") {
  CHECK(dynamics::displaced_n_small(0, 0.01, 10.0) >= 48);
  CHECK(dynamics::displaced_n_small(5, 0.01, 10.0) >= 53);
  CHECK(dynamics::displaced_n_small(2, 0.2, 400.0) >
        dynamics::displaced_n_small(2, 0.2, 40.0));
}
