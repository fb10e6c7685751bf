#include "sympolar/lagrangian.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace sympolar {

namespace {

// Thin Householder QR with column signs fixed so the factorization is
// deterministic (diagonal of R nonnegative).
Matrix orthonormalized(const Matrix& b) {
  const Eigen::HouseholderQR<Matrix> qr(b);
  Matrix q = qr.householderQ() * Matrix::Identity(b.rows(), b.cols());
  const Matrix r = qr.matrixQR().topRows(b.cols()).triangularView<Eigen::Upper>();
  for (int c = 0; c < b.cols(); ++c) {
    if (r(c, c) < 0) q.col(c) = -q.col(c);
  }
  return q;
}

void check_isotropy(const Matrix& b, const Matrix& j) {
  const double scale = b.cwiseAbs().maxCoeff();
  const double residual = (b.transpose() * j * b).cwiseAbs().maxCoeff();
  if (residual > tol::kPlaneIsotropy * scale * scale) {
    std::ostringstream os;
    os << "plane basis is not isotropic: |B^T J B|_max = " << residual;
    throw NotIsotropic(os.str());
  }
}

}  // namespace

LagrangianPlane LagrangianPlane::from_basis(const Matrix& b) {
  if (b.rows() == 0 || b.cols() == 0 || b.rows() != 2 * b.cols()) {
    std::ostringstream os;
    os << "plane basis must be 2n x n, got " << b.rows() << "x" << b.cols();
    throw BadShape(os.str());
  }
  if (!b.allFinite()) throw BadShape("plane basis has non-finite entries");

  const Eigen::JacobiSVD<Matrix> svd(b);
  const Vector sv = svd.singularValues();
  if (sv(sv.size() - 1) <= tol::kPlaneRank * sv(0)) {
    throw RankDeficient("plane basis is rank deficient");
  }

  const Matrix j = standard_j(static_cast<int>(b.cols()));
  check_isotropy(b, j);
  Matrix q = orthonormalized(b);
  check_isotropy(q, j);
  return LagrangianPlane(std::move(q));
}

LagrangianPlane LagrangianPlane::from_ab(const Matrix& a, const Matrix& b) {
  if (a.rows() != a.cols() || a.rows() == 0 || b.rows() != a.rows() || b.cols() != a.cols()) {
    throw BadShape("from_ab: A and B must be square of equal size");
  }
  const int n = static_cast<int>(a.rows());
  const double c1 = (a.transpose() * b - b.transpose() * a).cwiseAbs().maxCoeff();
  const double c2 =
      (a.transpose() * a + b.transpose() * b - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (c1 > tol::kPlaneConstraint || c2 > tol::kPlaneConstraint) {
    std::ostringstream os;
    os << "from_ab: |A^T B - B^T A| = " << c1 << ", |A^T A + B^T B - I| = " << c2;
    throw ConstraintViolated(os.str());
  }
  Matrix basis(2 * n, n);
  basis.topRows(n) = b.transpose();
  basis.bottomRows(n) = -a.transpose();
  return from_basis(basis);
}

LagrangianPlane LagrangianPlane::coordinate_x(int n) {
  Matrix b = Matrix::Zero(2 * n, n);
  b.topRows(n) = Matrix::Identity(n, n);
  return LagrangianPlane(std::move(b));
}

LagrangianPlane LagrangianPlane::coordinate_p(int n) {
  Matrix b = Matrix::Zero(2 * n, n);
  b.bottomRows(n) = Matrix::Identity(n, n);
  return LagrangianPlane(std::move(b));
}

double LagrangianPlane::gap_to(const LagrangianPlane& other) const {
  if (dof() != other.dof()) throw BadShape("gap_to: dimension mismatch");
  const Matrix& b1 = basis_;
  const Matrix& b2 = other.basis();
  const Matrix residual = b2 - b1 * (b1.transpose() * b2);
  return Eigen::JacobiSVD<Matrix>(residual).singularValues()(0);
}

bool LagrangianPlane::same_plane(const LagrangianPlane& other, double tolerance) const {
  return gap_to(other) <= tolerance;
}

TransverseCheck is_transverse(const LagrangianPlane& l1, const LagrangianPlane& l2) {
  if (l1.dof() != l2.dof()) throw BadShape("is_transverse: dimension mismatch");
  const int n = l1.dof();
  Matrix stacked(2 * n, 2 * n);
  stacked.leftCols(n) = l1.basis();
  stacked.rightCols(n) = l2.basis();
  const double margin = std::abs(stacked.determinant());
  return {margin > tol::kTransverseDet, margin};
}

SymplecticMatrix frame_symplectic(const LagrangianPlane& l1, const LagrangianPlane& l2) {
  const TransverseCheck check = is_transverse(l1, l2);
  if (!check.ok) {
    std::ostringstream os;
    os << "planes are not transverse (|det| = " << check.margin << ")";
    throw NotTransverse(os.str());
  }
  const int n = l1.dof();
  const Matrix j = standard_j(n);
  const Matrix& e = l1.basis();
  const Matrix& f = l2.basis();

  // G_ij = omega(e_i, f_j) = (J e_i) . f_j
  const Matrix g = -e.transpose() * j * f;
  const Eigen::PartialPivLU<Matrix> lu(g.transpose());
  Matrix x = lu.solve(f.transpose());
  x += lu.solve(f.transpose() - g.transpose() * x);  // one refinement pass
  const Matrix f_corr = -x.transpose();

  Matrix s(2 * n, 2 * n);
  s.leftCols(n) = e;
  s.rightCols(n) = f_corr;
  return SymplecticMatrix(std::move(s));
}

TransversePair::TransversePair(LagrangianPlane first, LagrangianPlane second)
    : first_(std::move(first)),
      second_(std::move(second)),
      frame_(frame_symplectic(first_, second_)),
      margin_(is_transverse(first_, second_).margin) {}

TransversePair TransversePair::coordinate(int n) {
  return {LagrangianPlane::coordinate_x(n), LagrangianPlane::coordinate_p(n)};
}

}  // namespace sympolar
