#pragma once

#include "sympolar/lagrangian.hpp"

namespace sympolar {

// Centered ellipsoid {z in R^{2n} : Mz.z <= 1}.
class AmbientEllipsoid {
 public:
  explicit AmbientEllipsoid(SpdMatrix m);

  static AmbientEllipsoid ball(int n, double radius);

  int dof() const { return form_.dim() / 2; }
  const SpdMatrix& form() const { return form_; }

 private:
  SpdMatrix form_;
};

// Centered ellipsoid inside a Lagrangian plane; the n x n form acts on the
// coordinates of the plane's stored orthonormal basis.
class PlaneEllipsoid {
 public:
  PlaneEllipsoid(LagrangianPlane plane, SpdMatrix form);

  int dof() const { return form_.dim(); }
  const LagrangianPlane& plane() const { return plane_; }
  const SpdMatrix& form() const { return form_; }

 private:
  LagrangianPlane plane_;
  SpdMatrix form_;
};

// Chart-level polar dual: {Ax.x <= 1} -> {A^{-1}p.p <= 1}.
SpdMatrix polar_dual(const SpdMatrix& form);

// Plane-level polar dual for the coordinate planes: an ellipsoid on l_X
// dualizes onto l_P and vice versa. General planes go through
// lagrangian_polar_dual in the duality module.
PlaneEllipsoid polar_dual(const PlaneEllipsoid& x);

// X -> LX within the plane's chart; form becomes L^{-T} A L^{-1}.
PlaneEllipsoid linear_image(const Matrix& l, const PlaneEllipsoid& x);

enum class CoordinateAxis { X, P };

// Schur-complement shadow onto a coordinate plane.
PlaneEllipsoid orthogonal_projection(const AmbientEllipsoid& omega, CoordinateAxis onto);

enum class PairSlot { First, Second };

// Oblique projection onto one plane of the pair along the other:
// Pi_l = S Pi_X S^{-1} with S the pair's frame.
PlaneEllipsoid lagrangian_projection(const AmbientEllipsoid& omega, const TransversePair& pair,
                                     PairSlot onto);

// c(Omega) = pi / lambda_max of the symplectic spectrum of M.
double capacity(const AmbientEllipsoid& omega);

// h(u) = sqrt(u . M^{-1} u).
double support_function(const AmbientEllipsoid& e, const Vector& u);
double support_function(const PlaneEllipsoid& e, const Vector& u);

// John ellipsoid of X_l x X_{l'}^o: in pair coordinates diag(A, A^{-1}),
// conjugated back through the frame. Always a symplectic unit ball.
AmbientEllipsoid john_of_dual_product(const PlaneEllipsoid& x, const TransversePair& pair);

// Vol(X x X^o) = kappa_n^2 for every centered ellipsoid.
double mahler_volume(const PlaneEllipsoid& x);

double unit_ball_volume(int n);          // kappa_n
double volume(const PlaneEllipsoid& x);  // kappa_n / sqrt(det A), via log-det

// Chart transfer bits shared with the duality module: T maps l_X (or l_P)
// coordinates under the pair's frame into the target plane's chart.
Matrix chart_transfer(const TransversePair& pair, PairSlot slot);
SpdMatrix coordinate_form(const PlaneEllipsoid& x, const TransversePair& pair, PairSlot slot);

}  // namespace sympolar
