#pragma once

#include "sympolar/symplectic.hpp"

namespace sympolar {

// An n-dimensional subspace of R^{2n} on which omega vanishes identically.
// The stored basis is orthonormal; verdicts never depend on the basis the
// plane was built from.
class LagrangianPlane {
 public:
  static LagrangianPlane from_basis(const Matrix& b);

  // Plane {(x, p) : Ax + Bp = 0}, parametrized by x = B^T u, p = -A^T u.
  // Requires A^T B = B^T A and A^T A + B^T B = I.
  static LagrangianPlane from_ab(const Matrix& a, const Matrix& b);

  static LagrangianPlane coordinate_x(int n);  // R^n x 0
  static LagrangianPlane coordinate_p(int n);  // 0 x R^n

  int dof() const { return static_cast<int>(basis_.cols()); }
  const Matrix& basis() const { return basis_; }  // 2n x n, orthonormal

  // sin of the largest principal angle to the other plane.
  double gap_to(const LagrangianPlane& other) const;
  bool same_plane(const LagrangianPlane& other, double tolerance = tol::kPlaneGap) const;

 private:
  explicit LagrangianPlane(Matrix orthonormal_basis) : basis_(std::move(orthonormal_basis)) {}
  Matrix basis_;
};

struct TransverseCheck {
  bool ok;
  double margin;  // |det [B1 | B2]| with orthonormal bases
};

TransverseCheck is_transverse(const LagrangianPlane& l1, const LagrangianPlane& l2);

// Deterministic symplectic frame with S(l_X) = l1, S(l_P) = l2: take the
// stored bases E, F, correct F by the omega-Gram matrix so the columns
// satisfy S^T J S = J, i.e. F' = -F G^{-1} with G_ij = omega(e_i, f_j).
SymplecticMatrix frame_symplectic(const LagrangianPlane& l1, const LagrangianPlane& l2);

// A transverse pair of Lagrangian planes together with its frame.
class TransversePair {
 public:
  TransversePair(LagrangianPlane first, LagrangianPlane second);

  static TransversePair coordinate(int n);

  int dof() const { return first_.dof(); }
  const LagrangianPlane& first() const { return first_; }
  const LagrangianPlane& second() const { return second_; }
  const SymplecticMatrix& frame() const { return frame_; }
  double margin() const { return margin_; }

 private:
  LagrangianPlane first_;
  LagrangianPlane second_;
  SymplecticMatrix frame_;
  double margin_;
};

}  // namespace sympolar
