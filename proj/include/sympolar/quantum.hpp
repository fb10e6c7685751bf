#pragma once

#include "sympolar/duality.hpp"

// Uncertainty certification with hbar = 1 throughout.

namespace sympolar {

// 2n x 2n covariance matrix with the (X, P) block structure.
class CovarianceMatrix {
 public:
  explicit CovarianceMatrix(SpdMatrix sigma);

  int dof() const { return sigma_.dim() / 2; }
  const SpdMatrix& sigma() const { return sigma_; }
  const BlockSplit& blocks() const { return blocks_; }

 private:
  SpdMatrix sigma_;
  BlockSplit blocks_;
};

// psi(x) = (1/pi)^{n/4} (det A)^{1/4} e^{-(A+iB)x.x/2}.
struct GaussianState {
  GaussianState(SpdMatrix a_in, SymMatrix b_in);
  SpdMatrix a;
  SymMatrix b;
  int dof() const { return a.dim(); }
};

struct CertificationReport {
  std::vector<double> rs_margins;  // sigma_xx sigma_pp - sigma_xp^2 - 1/4, per mode
  double min_hermitian_eig;        // smallest eigenvalue of Sigma + (i/2) J
  double min_symplectic_eig;       // smallest symplectic eigenvalue of Sigma
  bool admissible;
};

// Quantum condition Sigma + (i/2)J >= 0, checked through two routes that
// must agree: the real 4n x 4n embedding of the Hermitian matrix, and the
// symplectic spectrum test lambda_min >= 1/2.
CertificationReport certify(const CovarianceMatrix& sigma);

// Omega = {z : (1/2) Sigma^{-1} z.z <= 1}; capacity >= pi iff admissible.
AmbientEllipsoid uncertainty_ellipsoid(const CovarianceMatrix& sigma);

// Gaussian Wigner distribution value at z.
double gaussian_wigner_eval(const CovarianceMatrix& sigma, const PhaseVector& zbar,
                            const PhaseVector& z);

// W psi(z) = pi^{-n} e^{-G z.z} for the Gaussian state above;
// G = [[A + B A^{-1} B, B A^{-1}], [A^{-1} B, A^{-1}]] is symplectic.
AmbientEllipsoid gaussian_state_wigner_form(const GaussianState& psi);

enum class UncertaintyVerdict { Inadmissible, Admissible, GaussianForced };

const char* to_string(UncertaintyVerdict v);

struct HardyReport {
  UncertaintyVerdict verdict;
  std::vector<double> ab_eigenvalues;  // eigenvalues of AB, descending
};

// Matrix Hardy test: sub-Gaussian bounds e^{-Ax.x/2} on psi and
// e^{-Bp.p/2} on its Fourier transform are compatible iff all eigenvalues
// of AB are <= 1; all equal to 1 forces the Gaussian.
HardyReport hardy_verdict(const SpdMatrix& a, const SpdMatrix& b);

struct JointDiagonalization {
  Matrix l;
  std::vector<double> lambdas;  // eigenvalues of AB, descending
};

// L with L^T A L = L^{-1} B L^{-T} = diag(sqrt(lambda_j)).
JointDiagonalization joint_diagonalize(const SpdMatrix& a, const SpdMatrix& b);

// A nonzero psi with W psi(z) <= C e^{-Mz.z} exists iff the symplectic
// spectrum of M stays <= 1; spectrum identically 1 forces a Gaussian.
UncertaintyVerdict wigner_subgaussian_check(const SpdMatrix& m);

}  // namespace sympolar
