#pragma once

#include <Eigen/Dense>

#include "sympolar/errors.hpp"
#include "sympolar/tolerances.hpp"

namespace sympolar {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Dense real symmetric matrix. Construction tolerates asymmetry up to
// kConstruction relative to max(1, |M|_max) and stores (M + M^T)/2.
class SymMatrix {
 public:
  explicit SymMatrix(Matrix m);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& mat() const { return m_; }
  double max_abs() const { return max_abs_; }

 private:
  Matrix m_;
  double max_abs_;
};

// Symmetric positive definite matrix; smallest eigenvalue is cached and
// must exceed kSpdMinEig times the largest eigenvalue.
class SpdMatrix {
 public:
  explicit SpdMatrix(SymMatrix m);
  explicit SpdMatrix(Matrix m) : SpdMatrix(SymMatrix(std::move(m))) {}

  int dim() const { return base_.dim(); }
  const Matrix& mat() const { return base_.mat(); }
  const SymMatrix& sym() const { return base_; }
  double min_eig() const { return min_eig_; }

 private:
  SymMatrix base_;
  double min_eig_;
};

// n x n blocks of a 2n x 2n symmetric matrix in the (x, p) splitting;
// px equals xp^T exactly.
struct BlockSplit {
  Matrix xx, xp, px, pp;

  static BlockSplit of(const SymMatrix& m);
  Matrix assemble() const;
};

struct EigenDecomposition {
  Vector values;   // ascending
  Matrix vectors;  // orthonormal columns
};

// Full eigendecomposition of a symmetric matrix; eigenvalues ascending.
EigenDecomposition sym_eig(const SymMatrix& m);

struct SpdRoots {
  SpdMatrix sqrt;
  SpdMatrix inv_sqrt;
};

SpdRoots spd_roots(const SpdMatrix& m);

// Smallest eigenvalue; callers classify PSD as margin >= -tolerance.
double psd_margin(const SymMatrix& m);

enum class Eliminate { PP, XX };

// M/M_PP = M_XX - M_XP M_PP^{-1} M_PX (and the XX counterpart).
SymMatrix schur_complement(const BlockSplit& m, Eliminate which);

// Helpers shared across modules.
Matrix symmetrized(const Matrix& m);
Matrix spd_inverse(const SpdMatrix& m);  // symmetrized LLT inverse
double log_det(const SpdMatrix& m);

}  // namespace sympolar
