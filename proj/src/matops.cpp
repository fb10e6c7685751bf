#include "sympolar/matops.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace sympolar {

namespace {

void require_square(const Matrix& m, const char* who) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    std::ostringstream os;
    os << who << ": expected a nonempty square matrix, got " << m.rows() << "x" << m.cols();
    throw BadShape(os.str());
  }
  if (!m.allFinite()) throw BadShape(std::string(who) + ": non-finite entries");
}

}  // namespace

SymMatrix::SymMatrix(Matrix m) {
  require_square(m, "SymMatrix");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > tol::kConstruction * scale) {
    std::ostringstream os;
    os << "SymMatrix: asymmetry " << asym << " exceeds " << tol::kConstruction * scale;
    throw BadShape(os.str());
  }
  m_ = 0.5 * (m + m.transpose());
  max_abs_ = m_.cwiseAbs().maxCoeff();
}

SpdMatrix::SpdMatrix(SymMatrix m) : base_(std::move(m)) {
  const EigenDecomposition eig = sym_eig(base_);
  const double lo = eig.values(0);
  const double hi = eig.values(eig.values.size() - 1);
  min_eig_ = lo;
  if (hi <= 0.0 || lo <= tol::kSpdMinEig * hi) {
    std::ostringstream os;
    os << "not positive definite (min eig " << lo << ")";
    throw NotPositiveDefinite(os.str());
  }
}

BlockSplit BlockSplit::of(const SymMatrix& m) {
  const int d = m.dim();
  if (d % 2 != 0) throw BadShape("BlockSplit: dimension must be even");
  const int n = d / 2;
  BlockSplit b;
  b.xx = m.mat().topLeftCorner(n, n);
  b.xp = m.mat().topRightCorner(n, n);
  b.px = b.xp.transpose();
  b.pp = m.mat().bottomRightCorner(n, n);
  return b;
}

Matrix BlockSplit::assemble() const {
  const int n = static_cast<int>(xx.rows());
  Matrix m(2 * n, 2 * n);
  m.topLeftCorner(n, n) = xx;
  m.topRightCorner(n, n) = xp;
  m.bottomLeftCorner(n, n) = px;
  m.bottomRightCorner(n, n) = pp;
  return m;
}

EigenDecomposition sym_eig(const SymMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.mat());
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("sym_eig: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

SpdRoots spd_roots(const SpdMatrix& m) {
  const EigenDecomposition eig = sym_eig(m.sym());
  const Vector root = eig.values.cwiseSqrt();
  Matrix s = eig.vectors * root.asDiagonal() * eig.vectors.transpose();
  Matrix si = eig.vectors * root.cwiseInverse().asDiagonal() * eig.vectors.transpose();
  return {SpdMatrix(symmetrized(s)), SpdMatrix(symmetrized(si))};
}

double psd_margin(const SymMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.mat(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("psd_margin: eigensolver did not converge");
  }
  return solver.eigenvalues()(0);
}

SymMatrix schur_complement(const BlockSplit& m, Eliminate which) {
  const Matrix& kept = which == Eliminate::PP ? m.xx : m.pp;
  const Matrix& gone = which == Eliminate::PP ? m.pp : m.xx;
  const Matrix& off = which == Eliminate::PP ? m.xp : m.px;

  // SPD check of the eliminated block doubles as the invertibility test.
  const SpdMatrix pivot{SymMatrix(gone)};
  const Matrix solved = pivot.mat().llt().solve(off.transpose());
  return SymMatrix(symmetrized(kept - off * solved));
}

Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

Matrix spd_inverse(const SpdMatrix& m) {
  const Matrix id = Matrix::Identity(m.dim(), m.dim());
  return symmetrized(m.mat().llt().solve(id));
}

double log_det(const SpdMatrix& m) {
  const Matrix l = m.mat().llt().matrixL();
  return 2.0 * l.diagonal().array().log().sum();
}

}  // namespace sympolar
