#pragma once

#include <Eigen/Dense>
#include <complex>

#include "rabi_limit/errors.hpp"

namespace rabi::hilbert {

using cplx = std::complex<double>;

// Reference frame a state's amplitudes are expressed in.
enum class Frame {
  Lab,                // Schroedinger picture
  FieldInteraction,   // e^{i w0 t a^dag a} applied, spin untouched
  RotatingDisplaced,  // field+spin co-rotating at w0, then D^dag(alpha)
};

struct DisplacedFockSpec {
  cplx alpha;
  int n = 0;
  int n_trunc = 0;
};

// Default truncation rule: |alpha|^2 + 6 |alpha| sqrt(2n+1) + n + 64.
int default_n_trunc(double alpha_abs, int n);

// Pure field state on the truncated Fock space, photon index 0..N-1.
struct FockKet {
  Eigen::VectorXcd amps;

  int n_trunc() const { return static_cast<int>(amps.size()); }
  double norm() const { return amps.norm(); }
};

// Pure joint spin (x) field state. Amplitude layout: index s*N + m with
// s = 0 (+z), s = 1 (-z) and photon number m.
struct JointKet {
  Eigen::VectorXcd amps;
  int n_trunc = 0;
  Frame frame = Frame::Lab;
  cplx frame_alpha{0.0, 0.0};  // displacement of the RotatingDisplaced frame
  double omega0 = 1.0;
  double t = 0.0;  // reference time the frame parameters refer to

  double norm() const { return amps.norm(); }
  cplx amp(int spin, int m) const { return amps[spin * n_trunc + m]; }
};

struct DensityMatrix {
  Eigen::MatrixXcd m;

  int dim() const { return static_cast<int>(m.rows()); }
  // hermiticity within 1e-10 and unit trace within 1e-9; throws NumericError
  static DensityMatrix from_matrix(Eigen::MatrixXcd mat);
  // smallest eigenvalue (for the positivity invariant)
  double min_eigenvalue() const;
};

// <m|D(alpha)|n> by the stable two-index recurrence (log-space seed).
cplx displacement_element(int m, int n, cplx alpha);

// Truncated displacement operator matrix, columns built by the recurrence.
Eigen::MatrixXcd displacement_matrix(cplx alpha, int n_trunc);

// |alpha, n> = D(alpha)|n>. Throws TruncationError if the tail-weight
// invariant (guard band of 16) fails at spec.n_trunc.
FockKet displaced_fock_ket(const DisplacedFockSpec& spec);

// Auto-sized variant: starts at the default truncation rule and doubles
// until the tail-weight invariant passes.
FockKet make_displaced_fock(cplx alpha, int n);

// Closed-form <alpha1,n|alpha2,n>.
cplx displaced_fock_overlap(cplx alpha1, cplx alpha2, int n);

// <a> on a pure field state.
cplx annihilation_expectation(const FockKet& ket);

// Interaction-picture quadrature expectations (hbar = 1).
struct Quadratures {
  double q, p;
};
Quadratures quadrature_expectations(const FockKet& ket, double t, double omega0);
Quadratures quadratures_from_a(cplx a_expect, double t, double omega0);

double mean_photon_number(const FockKet& ket);

DensityMatrix partial_trace_spin(const JointKet& state);   // 2x2
DensityMatrix partial_trace_field(const JointKet& state);  // NxN

// (1/2) sum_k |eig_k(rho - sigma)|
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);
double trace_distance(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma);

// -sum p ln p with eigenvalue clipping window 1e-9
double von_neumann_entropy(const DensityMatrix& rho);
double von_neumann_entropy(const Eigen::MatrixXcd& rho);

// binary entropy of eigenvalues (1 +- X)/2; used by the closed-form spin state
double binary_entropy_symmetric(double X);

}  // namespace rabi::hilbert
