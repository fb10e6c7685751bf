#pragma once

#include "sympolar/ellipsoid.hpp"

namespace sympolar {

enum class DualStatus { NotDual, Dual, ExactDual };

const char* to_string(DualStatus s);

struct DualPairVerdict {
  DualStatus status;
  double margin;              // smallest eigenvalue of B^{-1} - A
  double exactness_residual;  // |AB - I|_max
};

// Chart-level dual-pair test for forms A (on the X side) and B (on the P
// side): dual pair iff A <= B^{-1}, exact iff AB = I. Thresholds are
// applied after scaling A by n/trace(A) so verdicts are conformally
// invariant; the reported margin is unscaled.
DualPairVerdict dual_pair_verdict(const SpdMatrix& a, const SpdMatrix& b,
                                  double tolerance = tol::kVerdict);

// Lagrangian polar dual of X on pair.first, landing on pair.second: pull
// back through the frame, invert the coordinate form, push forward.
PlaneEllipsoid lagrangian_polar_dual(const PlaneEllipsoid& x, const TransversePair& pair);

DualPairVerdict dual_pair_verdict(const PlaneEllipsoid& x, const PlaneEllipsoid& y,
                                  const TransversePair& pair, double tolerance = tol::kVerdict);

struct Thm1Result {
  DualStatus status;
  double inclusion_margin;   // min eig of (dual of first projection) - (second projection)
  double equality_residual;  // relative gap between those two forms
  double capacity;           // capacity of Omega, certifying the hypothesis
};

// Projections of a body with capacity >= pi onto a transverse pair form a
// Lagrangian dual pair; reports the inclusion margin and how far the pair
// is from being exact.
Thm1Result thm1_check(const AmbientEllipsoid& omega, const TransversePair& pair,
                      double tolerance = tol::kVerdict);

// The unique symplectic ball whose projections are X and its Lagrangian
// dual; coincides with the John ellipsoid of the dual product.
AmbientEllipsoid reconstruct_ball(const PlaneEllipsoid& x, const TransversePair& pair);

// c_max(X x P) = 4 sup{lambda > 0 : lambda X^o in P}; for ellipsoid forms
// this is 4 / sqrt(lambda_max(A^{1/2} B A^{1/2})).
double product_capacity(const SpdMatrix& x_form, const SpdMatrix& p_form);

}  // namespace sympolar
