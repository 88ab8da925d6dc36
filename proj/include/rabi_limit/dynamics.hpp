#pragma once

#include <Eigen/Dense>

#include "rabi_limit/hilbert.hpp"

namespace rabi::dynamics {

using cplx = std::complex<double>;
using hilbert::DensityMatrix;
using hilbert::FockKet;
using hilbert::Frame;
using hilbert::JointKet;

struct ModelParams {
  double Omega = 1.0;   // spin splitting
  double omega0 = 1.0;  // field frequency
  double lambda = 0.0;  // single-photon coupling

  double delta() const { return Omega - omega0; }
};

// Displaced-branch centers of the FBRWA state.
struct FbrwaBranches {
  cplx alpha_plus, alpha_minus;
  double phi = 0.0;  // lambda |alpha| t
};

// Semiclassical Rabi period pi / A.
inline double rabi_period(double A) { return M_PI / A; }

// Exact JC evolution in the lab frame via the closed-form 2x2 excitation
// blocks. Throws TruncationError if the top sectors carry weight > 1e-8.
JointKet jc_propagate_lab(const JointKet& initial, const ModelParams& params,
                          double t);

// Spectral propagator for the time-independent displaced-rotating-frame
// Hamiltonian  H = (Delta/2) sz + lambda (a s+ + a^dag s-) + lambda (alpha s+ + alpha* s-).
// Reusable across time samples; states come out in Frame::RotatingDisplaced.
class DisplacedPropagator {
 public:
  DisplacedPropagator(const Eigen::Vector2cd& spin_initial, int n,
                      const ModelParams& params, cplx alpha, int n_small);

  JointKet state(double t) const;
  // <sigma_z>(t) without materializing the JointKet
  double inversion(double t) const;
  // reduced spin density matrix at t, still in the rotating-displaced frame
  Eigen::Matrix2cd reduced_spin(double t) const;

  int n_small() const { return n_small_; }

 private:
  Eigen::VectorXcd amps_at(double t) const;
  void check_leakage(const Eigen::VectorXcd& amps) const;

  int n_small_;
  ModelParams params_;
  cplx alpha_;
  Eigen::VectorXd evals_;
  Eigen::MatrixXcd evecs_;
  Eigen::VectorXcd initial_coeffs_;  // eigenbasis coefficients of psi(0)
};

// Frame-local truncation for the displaced route; the field excursion over
// [0, t_max] is ~ lambda t / 2, so size the box like a displaced Fock state
// with that effective displacement. Never below n + 48.
int displaced_n_small(int n, double lambda, double t_max);

JointKet jc_propagate_displaced(const Eigen::Vector2cd& spin_initial, int n,
                                const ModelParams& params, cplx alpha,
                                double t, int n_small);

// Exact picture changes between Frame tags. sigma_z expectations are
// invariant; quadratures map per the interaction-picture definitions.
// target_alpha is the displacement of the target RotatingDisplaced frame
// (ignored for the other tags; defaults to the state's own frame_alpha).
JointKet frame_transform(const JointKet& state, Frame target,
                         const ModelParams& params, cplx target_alpha);
JointKet frame_transform(const JointKet& state, Frame target,
                         const ModelParams& params);

// Reduced spin state rotated to the lab frame (local unitaries on the field
// drop out of the partial trace).
Eigen::Matrix2cd reduced_spin_lab(const JointKet& state);

// Two-level evolution under the semiclassical RWA Hamiltonian from |+z>,
// solved in the frame rotating at omega0 and rotated back to the lab.
Eigen::Matrix2cd semiclassical_spin_state(double A, double Delta, double omega0,
                                          double t);
double semiclassical_inversion(double A, double Delta, double t);

struct FbrwaState {
  JointKet state;
  FbrwaBranches branches;
};

// Closed-form FBRWA joint state (lab frame).
FbrwaState fbrwa_joint_state(cplx alpha, int n, double lambda, double t,
                             int n_trunc);

// (1/2)[I + L_n(l^2 t^2) e^{-l^2 t^2 / 2} sigma_z]
Eigen::Matrix2cd fbrwa_spin_density(int n, double lambda, double t);

// FBRWA atomic inversion L_n(l^2t^2) e^{-l^2t^2/2} cos(2 lambda |alpha| t)
double fbrwa_inversion(int n, double lambda, double alpha_abs, double t);

// (1/2)(|a+,n><a+,n| + |a-,n><a-,n|)
DensityMatrix fbrwa_field_density(cplx alpha, int n, double lambda, double t,
                                  int n_trunc);

}  // namespace rabi::dynamics
