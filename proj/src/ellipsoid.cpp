#include "sympolar/ellipsoid.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace sympolar {

AmbientEllipsoid::AmbientEllipsoid(SpdMatrix m) : form_(std::move(m)) {
  if (form_.dim() % 2 != 0) throw BadShape("AmbientEllipsoid: form must be 2n x 2n");
}

AmbientEllipsoid AmbientEllipsoid::ball(int n, double radius) {
  if (n < 1 || !(radius > 0.0)) throw BadShape("ball: need n >= 1 and radius > 0");
  return AmbientEllipsoid(
      SpdMatrix(Matrix::Identity(2 * n, 2 * n) / (radius * radius)));
}

PlaneEllipsoid::PlaneEllipsoid(LagrangianPlane plane, SpdMatrix form)
    : plane_(std::move(plane)), form_(std::move(form)) {
  if (plane_.dof() != form_.dim()) {
    throw BadShape("PlaneEllipsoid: form dimension must match the plane");
  }
}

SpdMatrix polar_dual(const SpdMatrix& form) { return SpdMatrix(spd_inverse(form)); }

PlaneEllipsoid polar_dual(const PlaneEllipsoid& x) {
  const int n = x.dof();
  if (x.plane().same_plane(LagrangianPlane::coordinate_x(n))) {
    return {LagrangianPlane::coordinate_p(n), polar_dual(x.form())};
  }
  if (x.plane().same_plane(LagrangianPlane::coordinate_p(n))) {
    return {LagrangianPlane::coordinate_x(n), polar_dual(x.form())};
  }
  throw PlaneMismatch("polar_dual: plane is not a coordinate plane; use lagrangian_polar_dual");
}

PlaneEllipsoid linear_image(const Matrix& l, const PlaneEllipsoid& x) {
  if (l.rows() != l.cols() || l.rows() != x.dof()) {
    throw BadShape("linear_image: L must be n x n");
  }
  const Eigen::PartialPivLU<Matrix> lu(l);
  if (std::abs(lu.determinant()) < 1e-13) throw RankDeficient("linear_image: L is singular");
  const Matrix linv = lu.inverse();
  return {x.plane(), SpdMatrix(symmetrized(linv.transpose() * x.form().mat() * linv))};
}

PlaneEllipsoid orthogonal_projection(const AmbientEllipsoid& omega, CoordinateAxis onto) {
  const int n = omega.dof();
  const BlockSplit split = BlockSplit::of(omega.form().sym());
  if (onto == CoordinateAxis::X) {
    return {LagrangianPlane::coordinate_x(n), SpdMatrix(schur_complement(split, Eliminate::PP))};
  }
  return {LagrangianPlane::coordinate_p(n), SpdMatrix(schur_complement(split, Eliminate::XX))};
}

Matrix chart_transfer(const TransversePair& pair, PairSlot slot) {
  const int n = pair.dof();
  const Matrix& s = pair.frame().mat();
  const Matrix cols = slot == PairSlot::First ? s.leftCols(n) : s.rightCols(n);
  const Matrix& basis =
      slot == PairSlot::First ? pair.first().basis() : pair.second().basis();
  return basis.transpose() * cols;  // invertible: both span the same plane
}

SpdMatrix coordinate_form(const PlaneEllipsoid& x, const TransversePair& pair, PairSlot slot) {
  const LagrangianPlane& target = slot == PairSlot::First ? pair.first() : pair.second();
  if (!x.plane().same_plane(target)) {
    throw PlaneMismatch("ellipsoid does not live on the requested plane of the pair");
  }
  const Matrix t = chart_transfer(pair, slot);
  return SpdMatrix(symmetrized(t.transpose() * x.form().mat() * t));
}

namespace {

// Re-express an l_X/l_P coordinate form in the chart of the target plane.
SpdMatrix chart_form(const Matrix& coord_form, const TransversePair& pair, PairSlot slot) {
  const Matrix t = chart_transfer(pair, slot);
  const Matrix tinv = t.partialPivLu().inverse();
  return SpdMatrix(symmetrized(tinv.transpose() * coord_form * tinv));
}

}  // namespace

PlaneEllipsoid lagrangian_projection(const AmbientEllipsoid& omega, const TransversePair& pair,
                                     PairSlot onto) {
  if (omega.dof() != pair.dof()) throw BadShape("lagrangian_projection: dimension mismatch");
  const Matrix& s = pair.frame().mat();
  const SpdMatrix pulled(symmetrized(s.transpose() * omega.form().mat() * s));
  const BlockSplit split = BlockSplit::of(pulled.sym());
  const SymMatrix proj =
      schur_complement(split, onto == PairSlot::First ? Eliminate::PP : Eliminate::XX);
  const LagrangianPlane& plane = onto == PairSlot::First ? pair.first() : pair.second();
  return {plane, chart_form(proj.mat(), pair, onto)};
}

double capacity(const AmbientEllipsoid& omega) {
  const std::vector<double> lambdas = symplectic_eigenvalues(omega.form());
  return M_PI / lambdas.front();
}

double support_function(const AmbientEllipsoid& e, const Vector& u) {
  if (u.size() != 2 * e.dof()) throw BadShape("support_function: direction size mismatch");
  if (u.norm() == 0.0) throw ConstraintViolated("support_function: zero direction");
  return std::sqrt(u.dot(e.form().mat().llt().solve(u)));
}

double support_function(const PlaneEllipsoid& e, const Vector& u) {
  if (u.size() != e.dof()) throw BadShape("support_function: direction size mismatch");
  if (u.norm() == 0.0) throw ConstraintViolated("support_function: zero direction");
  return std::sqrt(u.dot(e.form().mat().llt().solve(u)));
}

AmbientEllipsoid john_of_dual_product(const PlaneEllipsoid& x, const TransversePair& pair) {
  const int n = pair.dof();
  const SpdMatrix a = coordinate_form(x, pair, PairSlot::First);
  Matrix m = Matrix::Zero(2 * n, 2 * n);
  m.topLeftCorner(n, n) = a.mat();
  m.bottomRightCorner(n, n) = spd_inverse(a);
  const Matrix sinv = pair.frame().inverse().mat();
  return AmbientEllipsoid(SpdMatrix(symmetrized(sinv.transpose() * m * sinv)));
}

double unit_ball_volume(int n) {
  return std::exp(0.5 * n * std::log(M_PI) - std::lgamma(0.5 * n + 1.0));
}

double volume(const PlaneEllipsoid& x) {
  return unit_ball_volume(x.dof()) * std::exp(-0.5 * log_det(x.form()));
}

double mahler_volume(const PlaneEllipsoid& x) {
  const double kappa = unit_ball_volume(x.dof());
  return kappa * kappa;
}

}  // namespace sympolar
