#pragma once

#include <cstdint>
#include <vector>

#include "sympolar/matops.hpp"

// Standard symplectic space conventions, fixed once for the whole library:
// z = (x, p), J = [[0, I], [-I, 0]], omega(z, w) = (Jz) . w.

namespace sympolar {

struct PhaseVector {
  Vector x;
  Vector p;

  PhaseVector(Vector x_in, Vector p_in);
  static PhaseVector zero(int n);
  static PhaseVector from_stacked(const Vector& z);

  int dof() const { return static_cast<int>(x.size()); }
  Vector stacked() const;
};

Matrix standard_j(int n);

// omega(z, w) = p . x' - x . p'.
double symp_product(const PhaseVector& z, const PhaseVector& w);

struct SymplecticCheck {
  bool ok;
  double residual;  // |S^T J S - J|_max
};

SymplecticCheck is_symplectic(const Matrix& s, double tolerance = tol::kSymplecticResidual);

class SymplecticMatrix {
 public:
  explicit SymplecticMatrix(Matrix s, double tolerance = tol::kSymplecticResidual);

  int dof() const { return static_cast<int>(s_.rows()) / 2; }
  const Matrix& mat() const { return s_; }
  double residual() const { return residual_; }

  // S^{-1} = -J S^T J, exact for symplectic S.
  SymplecticMatrix inverse() const;

 private:
  Matrix s_;
  double residual_;
};

// Symplectic spectrum of an SPD 2n x 2n matrix: the moduli of the
// eigenvalues +/- i lambda_j of M^{1/2} J M^{1/2}, descending.
std::vector<double> symplectic_eigenvalues(const SpdMatrix& m);

struct WilliamsonForm {
  SymplecticMatrix s;
  std::vector<double> lambdas;  // descending
};

// M = S^T diag(Lambda, Lambda) S with S symplectic.
WilliamsonForm williamson(const SpdMatrix& m);

// Deterministic pseudo-random element of Sp(n): alternating products of
// diag(L, L^{-T}), [[I,0],[C,I]] and J with entries uniform(-spread, spread).
SymplecticMatrix random_symplectic(std::uint64_t seed, int n, double spread);

// One Gram-Schmidt pass in the omega-inner product: returns the nearest
// frame with S^T J S = J up to roundoff. Columns j and n+j form the pairs.
Matrix symplectic_gram_schmidt(const Matrix& s);

}  // namespace sympolar
