#pragma once

#include <cstdint>

#include "sympolar/ellipsoid.hpp"
#include "sympolar/quantum.hpp"

// Brute-force validators, kept independent of the analytic code paths they
// test. All sampling is counter-based: point i depends only on (seed, i).

namespace sympolar::oracle {

struct SampleCloud {
  int n = 0;
  Matrix points;  // count x n, one sample per row
  std::uint64_t seed = 0;
  std::size_t count = 0;
};

// Uniform directions on the unit sphere of R^n.
SampleCloud direction_cloud(int n, std::uint64_t seed, std::size_t count);

// Boundary of {x : Ax.x <= 1} via direction normalization x(u) = u / sqrt(u.Au).
SampleCloud ellipsoid_boundary_cloud(const SpdMatrix& form, std::uint64_t seed,
                                     std::size_t count);

struct MembershipVerdict {
  bool accepted;
  double max_inner;
};

// p is accepted into the sampled polar dual iff max_i p.x_i <= 1 + 1e-3.
// Acceptance is approximate (samples may miss the maximizer); rejection is
// exact.
MembershipVerdict mc_polar_membership(const SampleCloud& boundary, const Vector& candidate);

// Batched form used by the big agreement harnesses; one row per candidate.
Vector mc_polar_max_inner(const SampleCloud& boundary, const Matrix& candidates);

// Sampled support function of the projected shadow: project every boundary
// sample through Pi = S Pi_X S^{-1}, then maximize u . c over the samples,
// per direction u (unit vectors in the target plane's chart).
std::vector<double> mc_projection_support(const AmbientEllipsoid& omega,
                                          const TransversePair& pair, PairSlot onto,
                                          const SampleCloud& directions,
                                          const SampleCloud& boundary);

// Trapezoid evaluation of the Wigner integral of a 1-dof Gaussian state.
// Requires half_width >= 6 / sqrt(A).
double wigner_quadrature(const GaussianState& psi, const PhaseVector& z, double half_width,
                         int points);

// Deterministic SPD matrix with eigenvalues log-uniform in [1/cap, cap].
SpdMatrix random_spd(std::uint64_t seed, int n, double condition_cap);

}  // namespace sympolar::oracle
