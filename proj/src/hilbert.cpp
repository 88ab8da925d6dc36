#include "rabi_limit/hilbert.hpp"

#include <cmath>

#include "rabi_limit/specfun.hpp"

namespace rabi::hilbert {

namespace {
constexpr int kTailGuard = 16;
constexpr double kTailTol = 1e-10;
}  // namespace

int default_n_trunc(double alpha_abs, int n) {
  return static_cast<int>(std::ceil(alpha_abs * alpha_abs +
                                    6.0 * alpha_abs * std::sqrt(2.0 * n + 1.0) +
                                    n + 64.0));
}

DensityMatrix DensityMatrix::from_matrix(Eigen::MatrixXcd mat) {
  if (mat.rows() != mat.cols())
    throw NumericError("DensityMatrix: matrix must be square");
  const double herm = (mat - mat.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-10) throw NumericError("DensityMatrix: not Hermitian within 1e-10");
  const double tr = std::abs(mat.trace() - cplx(1.0, 0.0));
  if (tr > 1e-9) throw NumericError("DensityMatrix: trace deviates from 1 beyond 1e-9");
  return DensityMatrix{std::move(mat)};
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

namespace {

using lcplx = std::complex<long double>;
using VectorXlc = Eigen::Matrix<lcplx, Eigen::Dynamic, 1>;

// Coherent column <m|D(alpha)|0>, log-space so large |alpha| cannot underflow
// the seed before the significant rows near m ~ |alpha|^2 are reached.
VectorXlc coherent_column_l(cplx alpha, int n_trunc) {
  VectorXlc col(n_trunc);
  const long double a = std::abs(alpha);
  if (a == 0.0L) {
    col.setZero();
    col[0] = 1.0L;
    return col;
  }
  const long double la = std::log(a);
  const lcplx phase_unit = lcplx(alpha) / a;
  lcplx phase = 1.0L;
  for (int m = 0; m < n_trunc; ++m) {
    const long double logmag =
        -0.5L * a * a + m * la - 0.5L * std::lgammal(m + 1.0L);
    col[m] = std::exp(logmag) * phase;
    phase *= phase_unit;
  }
  return col;
}

// <m|D(alpha)|n> for m >= n via the associated-Laguerre closed form
//   sqrt(n!/m!) alpha^{m-n} e^{-|alpha|^2/2} L_n^{(m-n)}(|alpha|^2),
// evaluated with log-magnitude bookkeeping in extended precision. Raising the
// Fock order by repeated application of (a^dag - alpha^*) is unstable at
// large |alpha| (the operator norm ~ sqrt(N) + |alpha| amplifies roundoff),
// so each entry is summed directly; the alternating sum has only n+1 terms.
lcplx d_element_upper(int m, int n, cplx alpha) {
  const long double x = std::norm(lcplx(alpha));
  const int k = m - n;
  // L_n^{(k)}(x) = sum_i (-1)^i binom(n+k, n-i) x^i / i!
  long double term = std::exp(std::lgammal(m + 1.0L) - std::lgammal(n + 1.0L) -
                              std::lgammal(k + 1.0L));  // i = 0
  long double sum = term;
  for (int i = 0; i < n; ++i) {
    term *= -x * (n - i) / (static_cast<long double>(k + i + 1) * (i + 1));
    sum += term;
  }
  if (sum == 0.0L) return lcplx(0.0L, 0.0L);
  const long double logmag =
      0.5L * (std::lgammal(n + 1.0L) - std::lgammal(m + 1.0L)) +
      k * std::log(std::abs(lcplx(alpha))) - 0.5L * x +
      std::log(std::abs(sum));
  lcplx phase = std::pow(lcplx(alpha) / std::abs(lcplx(alpha)),
                         static_cast<long double>(k));
  if (sum < 0.0L) phase = -phase;
  return std::exp(logmag) * phase;
}

lcplx d_element_l(int m, int n, cplx alpha) {
  if (alpha == cplx(0.0, 0.0)) return m == n ? 1.0L : 0.0L;
  if (m >= n) return d_element_upper(m, n, alpha);
  // <m|D(alpha)|n> = conj(<n|D(-alpha)|m>)
  return std::conj(d_element_upper(n, m, -alpha));
}

Eigen::VectorXcd displacement_column(cplx alpha, int n, int n_trunc) {
  if (n == 0) return coherent_column_l(alpha, n_trunc).cast<cplx>();
  Eigen::VectorXcd col(n_trunc);
  for (int m = 0; m < n_trunc; ++m)
    col[m] = static_cast<cplx>(d_element_l(m, n, alpha));
  return col;
}

}  // namespace

cplx displacement_element(int m, int n, cplx alpha) {
  if (m < 0 || n < 0)
    throw std::invalid_argument("displacement_element: indices must be >= 0");
  if (alpha == cplx(0.0, 0.0)) return m == n ? 1.0 : 0.0;
  return displacement_column(alpha, n, m + 1)[m];
}

Eigen::MatrixXcd displacement_matrix(cplx alpha, int n_trunc) {
  Eigen::MatrixXcd d(n_trunc, n_trunc);
  Eigen::VectorXcd col = coherent_column_l(alpha, n_trunc).cast<cplx>();
  d.col(0) = col;
  const cplx ac = std::conj(alpha);
  for (int j = 0; j + 1 < n_trunc; ++j) {
    Eigen::VectorXcd next(n_trunc);
    const double inv = 1.0 / std::sqrt(j + 1.0);
    next[0] = -ac * col[0] * inv;
    for (int m = 1; m < n_trunc; ++m)
      next[m] = (std::sqrt(static_cast<double>(m)) * col[m - 1] - ac * col[m]) * inv;
    d.col(j + 1) = next;
    col.swap(next);
  }
  return d;
}

FockKet displaced_fock_ket(const DisplacedFockSpec& spec) {
  if (spec.n < 0 || spec.n_trunc <= spec.n)
    throw std::invalid_argument("displaced_fock_ket: need 0 <= n < n_trunc");
  Eigen::VectorXcd col = displacement_column(spec.alpha, spec.n, spec.n_trunc);
  double tail = 0.0;
  for (int m = std::max(0, spec.n_trunc - kTailGuard); m < spec.n_trunc; ++m)
    tail += std::norm(col[m]);
  if (tail >= kTailTol)
    throw TruncationError("displaced_fock_ket: tail weight exceeds 1e-10; enlarge n_trunc");
  const double nrm = col.norm();
  if (std::abs(nrm - 1.0) > 1e-9)
    throw TruncationError("displaced_fock_ket: norm deficit exceeds 1e-9");
  col /= nrm;
  return FockKet{std::move(col)};
}

FockKet make_displaced_fock(cplx alpha, int n) {
  int n_trunc = default_n_trunc(std::abs(alpha), n);
  for (int attempt = 0; attempt < 6; ++attempt) {
    try {
      return displaced_fock_ket({alpha, n, n_trunc});
    } catch (const TruncationError&) {
      n_trunc *= 2;
    }
  }
  throw TruncationError("make_displaced_fock: truncation did not converge");
}

cplx displaced_fock_overlap(cplx alpha1, cplx alpha2, int n) {
  const cplx delta = alpha2 - alpha1;
  const double d2 = std::norm(delta);
  const double phase = std::imag(std::conj(alpha1) * alpha2);
  return std::polar(1.0, phase) * std::exp(-0.5 * d2) * specfun::laguerre(n, d2);
}

cplx annihilation_expectation(const FockKet& ket) {
  cplx a{0.0, 0.0};
  const int n = ket.n_trunc();
  for (int m = 0; m + 1 < n; ++m)
    a += std::conj(ket.amps[m]) * std::sqrt(m + 1.0) * ket.amps[m + 1];
  return a;
}

Quadratures quadratures_from_a(cplx a_expect, double t, double omega0) {
  const cplx u = a_expect * std::polar(1.0, -omega0 * t);
  return {std::sqrt(1.0 / (2.0 * omega0)) * 2.0 * u.real(),
          std::sqrt(omega0 / 2.0) * 2.0 * u.imag()};
}

Quadratures quadrature_expectations(const FockKet& ket, double t, double omega0) {
  return quadratures_from_a(annihilation_expectation(ket), t, omega0);
}

double mean_photon_number(const FockKet& ket) {
  double s = 0.0;
  for (int m = 0; m < ket.n_trunc(); ++m) s += m * std::norm(ket.amps[m]);
  return s;
}

DensityMatrix partial_trace_spin(const JointKet& state) {
  const int n = state.n_trunc;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(2, 2);
  for (int s = 0; s < 2; ++s)
    for (int sp = 0; sp < 2; ++sp) {
      cplx v{0.0, 0.0};
      for (int m = 0; m < n; ++m)
        v += state.amps[s * n + m] * std::conj(state.amps[sp * n + m]);
      rho(s, sp) = v;
    }
  return DensityMatrix::from_matrix(std::move(rho));
}

DensityMatrix partial_trace_field(const JointKet& state) {
  const int n = state.n_trunc;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(n, n);
  for (int s = 0; s < 2; ++s) {
    const auto block = state.amps.segment(s * n, n);
    rho.noalias() += block * block.adjoint();
  }
  return DensityMatrix::from_matrix(std::move(rho));
}

double trace_distance(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
    throw std::invalid_argument("trace_distance: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho - sigma,
                                                     Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return trace_distance(rho.m, sigma.m);
}

double von_neumann_entropy(const Eigen::MatrixXcd& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    double p = es.eigenvalues()[i];
    if (p < -1e-9 || p > 1.0 + 1e-9)
      throw NumericError("von_neumann_entropy: eigenvalue outside clipping window");
    p = std::clamp(p, 0.0, 1.0);
    if (p > 0.0) s -= p * std::log(p);
  }
  return s;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  return von_neumann_entropy(rho.m);
}

double binary_entropy_symmetric(double X) {
  const double pp = 0.5 * (1.0 + X);
  const double pm = 0.5 * (1.0 - X);
  double s = 0.0;
  if (pp > 0.0) s -= pp * std::log(pp);
  if (pm > 0.0) s -= pm * std::log(pm);
  return s;
}

}  // namespace rabi::hilbert
