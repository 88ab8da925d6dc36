#include "rabi_limit/dynamics.hpp"

#include <cmath>

#include "rabi_limit/specfun.hpp"

namespace rabi::dynamics {

namespace {

constexpr double kLeakTol = 1e-8;
constexpr int kLeakBand = 8;

Eigen::Matrix2cd spin_rotation(double omega0, double t) {
  Eigen::Matrix2cd r = Eigen::Matrix2cd::Zero();
  r(0, 0) = std::polar(1.0, -0.5 * omega0 * t);
  r(1, 1) = std::polar(1.0, 0.5 * omega0 * t);
  return r;
}

}  // namespace

JointKet jc_propagate_lab(const JointKet& initial, const ModelParams& params,
                          double t) {
  if (initial.frame != Frame::Lab)
    throw std::invalid_argument("jc_propagate_lab: initial state must be in the lab frame");
  const int n = initial.n_trunc;

  // Excitation sectors are invariant, so leakage cannot grow: check once.
  double top = 0.0;
  for (int m = std::max(0, n - kLeakBand); m < n; ++m)
    top += std::norm(initial.amp(0, m)) + std::norm(initial.amp(1, m));
  if (top > kLeakTol)
    throw TruncationError("jc_propagate_lab: top-sector population exceeds 1e-8");

  const double delta = params.delta();
  const double w0 = params.omega0;
  const double lam = params.lambda;

  Eigen::VectorXcd out(2 * n);
  // |-z, 0> evolves by phase exp(+i Omega t / 2)
  out[n] = initial.amps[n] * std::polar(1.0, 0.5 * params.Omega * t);
  // top |+z, n-1> has no partner inside the box; bare phase
  out[n - 1] = initial.amps[n - 1] *
               std::polar(1.0, -(0.5 * params.Omega + w0 * (n - 1)) * t);

  for (int k = 0; k + 1 < n; ++k) {
    const cplx cp = initial.amps[k];           // |+z, k>
    const cplx cm = initial.amps[n + k + 1];   // |-z, k+1>
    const double g = lam * std::sqrt(k + 1.0);
    const double half_delta = 0.5 * delta;
    const double rabi = std::sqrt(half_delta * half_delta + g * g);
    const cplx common = std::polar(1.0, -w0 * (k + 0.5) * t);
    cplx u00, u01, u10, u11;
    if (rabi < 1e-300) {
      u00 = u11 = 1.0;
      u01 = u10 = 0.0;
    } else {
      const double c = std::cos(rabi * t);
      const double s = std::sin(rabi * t);
      const double nx = g / rabi, nz = half_delta / rabi;
      u00 = cplx(c, -s * nz);
      u11 = cplx(c, s * nz);
      u01 = u10 = cplx(0.0, -s * nx);
    }
    out[k] = common * (u00 * cp + u01 * cm);
    out[n + k + 1] = common * (u10 * cp + u11 * cm);
  }

  JointKet result = initial;
  result.amps = std::move(out);
  result.t = t;
  return result;
}

int displaced_n_small(int n, double lambda, double t_max) {
  const double excursion = 0.5 * lambda * t_max;
  return std::max(n + 48, hilbert::default_n_trunc(excursion, n));
}

DisplacedPropagator::DisplacedPropagator(const Eigen::Vector2cd& spin_initial,
                                         int n, const ModelParams& params,
                                         cplx alpha, int n_small)
    : n_small_(n_small), params_(params), alpha_(alpha) {
  if (n_small <= n + 1)
    throw std::invalid_argument("DisplacedPropagator: n_small too small for n");
  const int dim = 2 * n_small;
  const double lam = params.lambda;
  const double half_delta = 0.5 * params.delta();

  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (int m = 0; m < n_small; ++m) {
    h(m, m) = half_delta;
    h(n_small + m, n_small + m) = -half_delta;
    // lambda (a s+ + a^dag s-): |-z, m> -> sqrt(m) |+z, m-1>
    if (m >= 1) {
      h(m - 1, n_small + m) = lam * std::sqrt(static_cast<double>(m));
      h(n_small + m, m - 1) = lam * std::sqrt(static_cast<double>(m));
    }
    // lambda (alpha s+ + alpha* s-)
    h(m, n_small + m) += lam * alpha;
    h(n_small + m, m) += lam * std::conj(alpha);
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  evals_ = es.eigenvalues();
  evecs_ = es.eigenvectors();

  Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(dim);
  psi0[n] = spin_initial[0];
  psi0[n_small + n] = spin_initial[1];
  initial_coeffs_ = evecs_.adjoint() * psi0;
}

Eigen::VectorXcd DisplacedPropagator::amps_at(double t) const {
  Eigen::VectorXcd phased(initial_coeffs_.size());
  for (int j = 0; j < phased.size(); ++j)
    phased[j] = initial_coeffs_[j] * std::polar(1.0, -evals_[j] * t);
  return evecs_ * phased;
}

void DisplacedPropagator::check_leakage(const Eigen::VectorXcd& amps) const {
  double top = 0.0;
  for (int m = std::max(0, n_small_ - kLeakBand); m < n_small_; ++m)
    top += std::norm(amps[m]) + std::norm(amps[n_small_ + m]);
  if (top > kLeakTol)
    throw TruncationError("DisplacedPropagator: top-sector population exceeds 1e-8");
}

JointKet DisplacedPropagator::state(double t) const {
  Eigen::VectorXcd amps = amps_at(t);
  check_leakage(amps);
  JointKet ket;
  ket.amps = std::move(amps);
  ket.n_trunc = n_small_;
  ket.frame = Frame::RotatingDisplaced;
  ket.frame_alpha = alpha_;
  ket.omega0 = params_.omega0;
  ket.t = t;
  return ket;
}

double DisplacedPropagator::inversion(double t) const {
  const Eigen::VectorXcd amps = amps_at(t);
  check_leakage(amps);
  double w = 0.0;
  for (int m = 0; m < n_small_; ++m)
    w += std::norm(amps[m]) - std::norm(amps[n_small_ + m]);
  return w;
}

Eigen::Matrix2cd DisplacedPropagator::reduced_spin(double t) const {
  const Eigen::VectorXcd amps = amps_at(t);
  check_leakage(amps);
  Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
  for (int m = 0; m < n_small_; ++m) {
    const cplx up = amps[m];
    const cplx dn = amps[n_small_ + m];
    rho(0, 0) += up * std::conj(up);
    rho(0, 1) += up * std::conj(dn);
    rho(1, 0) += dn * std::conj(up);
    rho(1, 1) += dn * std::conj(dn);
  }
  return rho;
}

JointKet jc_propagate_displaced(const Eigen::Vector2cd& spin_initial, int n,
                                const ModelParams& params, cplx alpha,
                                double t, int n_small) {
  DisplacedPropagator prop(spin_initial, n, params, alpha, n_small);
  return prop.state(t);
}

namespace {

JointKet to_lab(const JointKet& state, const ModelParams& params) {
  if (state.frame == Frame::Lab) return state;
  const int n = state.n_trunc;
  const double w0 = params.omega0;
  const double t = state.t;
  JointKet out = state;

  if (state.frame == Frame::RotatingDisplaced) {
    // psi_lab = R_s(t) e^{-i w0 t a^dag a} D(alpha) psi
    const Eigen::MatrixXcd d = hilbert::displacement_matrix(state.frame_alpha, n);
    for (int s = 0; s < 2; ++s)
      out.amps.segment(s * n, n) = d * state.amps.segment(s * n, n);
    for (int m = 0; m < n; ++m) {
      const cplx f = std::polar(1.0, -w0 * t * m);
      out.amps[m] *= f * std::polar(1.0, -0.5 * w0 * t);
      out.amps[n + m] *= f * std::polar(1.0, 0.5 * w0 * t);
    }
  } else {  // FieldInteraction
    for (int m = 0; m < n; ++m) {
      const cplx f = std::polar(1.0, -w0 * t * m);
      out.amps[m] *= f;
      out.amps[n + m] *= f;
    }
  }
  out.frame = Frame::Lab;
  out.frame_alpha = {0.0, 0.0};
  return out;
}

JointKet from_lab(const JointKet& lab, Frame target, cplx alpha,
                  const ModelParams& params) {
  if (target == Frame::Lab) return lab;
  const int n = lab.n_trunc;
  const double w0 = params.omega0;
  const double t = lab.t;
  JointKet out = lab;

  if (target == Frame::FieldInteraction) {
    for (int m = 0; m < n; ++m) {
      const cplx f = std::polar(1.0, w0 * t * m);
      out.amps[m] *= f;
      out.amps[n + m] *= f;
    }
  } else {  // RotatingDisplaced: psi = D^dag(alpha) e^{i w0 t a^dag a} R_s^dag psi_lab
    for (int m = 0; m < n; ++m) {
      const cplx f = std::polar(1.0, w0 * t * m);
      out.amps[m] *= f * std::polar(1.0, 0.5 * w0 * t);
      out.amps[n + m] *= f * std::polar(1.0, -0.5 * w0 * t);
    }
    const Eigen::MatrixXcd d = hilbert::displacement_matrix(alpha, n);
    for (int s = 0; s < 2; ++s)
      out.amps.segment(s * n, n) = d.adjoint() * out.amps.segment(s * n, n);
    out.frame_alpha = alpha;
  }
  out.frame = target;
  return out;
}

}  // namespace

JointKet frame_transform(const JointKet& state, Frame target,
                         const ModelParams& params, cplx target_alpha) {
  if (state.frame == target &&
      (target != Frame::RotatingDisplaced || target_alpha == state.frame_alpha))
    return state;
  return from_lab(to_lab(state, params), target, target_alpha, params);
}

JointKet frame_transform(const JointKet& state, Frame target,
                         const ModelParams& params) {
  return frame_transform(state, target, params, state.frame_alpha);
}

Eigen::Matrix2cd reduced_spin_lab(const JointKet& state) {
  Eigen::Matrix2cd rho = hilbert::partial_trace_spin(state).m;
  if (state.frame == Frame::RotatingDisplaced) {
    const Eigen::Matrix2cd r = spin_rotation(state.omega0, state.t);
    rho = r * rho * r.adjoint();
  }
  return rho;
}

Eigen::Matrix2cd semiclassical_spin_state(double A, double Delta, double omega0,
                                          double t) {
  const double rabi = std::sqrt(0.25 * Delta * Delta + A * A);
  Eigen::Vector2cd psi;
  if (rabi < 1e-300) {
    psi << 1.0, 0.0;
  } else {
    const double c = std::cos(rabi * t);
    const double s = std::sin(rabi * t);
    const double nx = A / rabi, nz = 0.5 * Delta / rabi;
    psi << cplx(c, -s * nz), cplx(0.0, -s * nx);
  }
  psi = spin_rotation(omega0, t) * psi;
  return psi * psi.adjoint();
}

double semiclassical_inversion(double A, double Delta, double t) {
  const double rabi = std::sqrt(0.25 * Delta * Delta + A * A);
  if (rabi < 1e-300) return 1.0;
  const double c = std::cos(rabi * t);
  const double s = std::sin(rabi * t) * (A / rabi);
  const double sz = std::sin(rabi * t) * (0.5 * Delta / rabi);
  return c * c + sz * sz - s * s;
}

FbrwaState fbrwa_joint_state(cplx alpha, int n, double lambda, double t,
                             int n_trunc) {
  const double a_abs = std::abs(alpha);
  if (!(a_abs > 0.0))
    throw std::invalid_argument("fbrwa_joint_state: |alpha| must be > 0");
  const double omega0 = 1.0;
  const double phi = lambda * a_abs * t;
  const cplx rot = std::polar(1.0, -omega0 * t);
  const cplx drift(0.0, 0.5 * lambda * t / a_abs);
  FbrwaBranches br;
  br.alpha_plus = alpha * rot * (1.0 - drift);
  br.alpha_minus = alpha * rot * (1.0 + drift);
  br.phi = phi;

  const FockKet kp = hilbert::displaced_fock_ket({br.alpha_plus, n, n_trunc});
  const FockKet km = hilbert::displaced_fock_ket({br.alpha_minus, n, n_trunc});

  const cplx pref = 0.5 * std::polar(1.0, -omega0 * t * (n + 0.5));
  const cplx ep = std::polar(1.0, -0.5 * phi);
  const cplx em = std::polar(1.0, 0.5 * phi);
  const cplx spin_phase = std::polar(1.0, omega0 * t);

  JointKet ket;
  ket.n_trunc = n_trunc;
  ket.frame = Frame::Lab;
  ket.omega0 = omega0;
  ket.t = t;
  ket.amps.resize(2 * n_trunc);
  for (int m = 0; m < n_trunc; ++m) {
    const cplx plus = ep * kp.amps[m];
    const cplx minus = em * km.amps[m];
    ket.amps[m] = pref * (plus + minus);
    ket.amps[n_trunc + m] = pref * spin_phase * (plus - minus);
  }
  if (std::abs(ket.norm() - 1.0) > 1e-9)
    throw TruncationError("fbrwa_joint_state: norm deviates beyond 1e-9");
  return FbrwaState{std::move(ket), br};
}

Eigen::Matrix2cd fbrwa_spin_density(int n, double lambda, double t) {
  const double s = lambda * lambda * t * t;
  const double x = specfun::laguerre(n, s) * std::exp(-0.5 * s);
  Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
  rho(0, 0) = 0.5 * (1.0 + x);
  rho(1, 1) = 0.5 * (1.0 - x);
  return rho;
}

double fbrwa_inversion(int n, double lambda, double alpha_abs, double t) {
  const double s = lambda * lambda * t * t;
  return specfun::laguerre(n, s) * std::exp(-0.5 * s) *
         std::cos(2.0 * lambda * alpha_abs * t);
}

DensityMatrix fbrwa_field_density(cplx alpha, int n, double lambda, double t,
                                  int n_trunc) {
  const FbrwaState st = fbrwa_joint_state(alpha, n, lambda, t, n_trunc);
  const FockKet kp = hilbert::displaced_fock_ket({st.branches.alpha_plus, n, n_trunc});
  const FockKet km = hilbert::displaced_fock_ket({st.branches.alpha_minus, n, n_trunc});
  Eigen::MatrixXcd rho = 0.5 * (kp.amps * kp.amps.adjoint() +
                                km.amps * km.amps.adjoint());
  return DensityMatrix::from_matrix(std::move(rho));
}

}  // namespace rabi::dynamics
