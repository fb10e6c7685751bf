#pragma once

// Default tolerances. All relative thresholds are scaled by the largest
// absolute eigenvalue (or max-norm) of the operand so that verdicts are
// invariant under conformal scaling of the bodies involved.

namespace sympolar::tol {

// Symmetry slack accepted at construction, relative to max(1, |M|_max).
inline constexpr double kConstruction = 1e-12;

// Algebraic identity residuals (roots, reconstructions, frames).
inline constexpr double kAlgebraic = 1e-9;

// PSD verdicts: margin >= -kPsdVerdict counts as positive semidefinite.
inline constexpr double kPsdVerdict = 1e-10;

// Strict positive definiteness: min eigenvalue must exceed this times the
// largest eigenvalue.
inline constexpr double kSpdMinEig = 1e-10;

// |S^T J S - J|_max accepted for symplectic matrices.
inline constexpr double kSymplecticResidual = 1e-9;

// Williamson reconstruction residual, relative to |M|_max.
inline constexpr double kWilliamsonReconstruction = 1e-8;

// Condition-number cap before williamson refuses the input.
inline constexpr double kConditionCap = 1e12;

// Lagrangian plane checks.
inline constexpr double kPlaneIsotropy = 1e-10;
inline constexpr double kPlaneRank = 1e-10;
inline constexpr double kTransverseDet = 1e-10;
inline constexpr double kPlaneGap = 1e-8;  // sin of largest principal angle
inline constexpr double kPlaneConstraint = 1e-9;  // A^T B = B^T A etc.

// Polar-duality verdict thresholds (applied to trace-normalized forms).
inline constexpr double kVerdict = 1e-9;

// Band outside which the two quantum admissibility routes must agree.
inline constexpr double kRouteAgreement = 1e-7;

// Monte-Carlo polar membership acceptance slack.
inline constexpr double kMcAccept = 1e-3;

}  // namespace sympolar::tol
