#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "sympolar/detrng.hpp"
#include "sympolar/lagrangian.hpp"

using namespace sympolar;

namespace {

Matrix col2(double a, double b) {
  Matrix m(2, 1);
  m << a, b;
  return m;
}

// does the column span of s (2n x n) equal the plane, up to 1e-8 angles
bool spans_plane(const Matrix& cols, const LagrangianPlane& plane) {
  return LagrangianPlane::from_basis(cols).same_plane(plane);
}

}  // namespace

TEST_CASE("plane_from_basis accepts coordinate planes and lines") {
  const LagrangianPlane lx = LagrangianPlane::from_basis(col2(1, 0));
  CHECK(lx.same_plane(LagrangianPlane::coordinate_x(1)));

  // every line in R^2 is Lagrangian
  const LagrangianPlane diag = LagrangianPlane::from_basis(col2(1, 1));
  CHECK(diag.basis().col(0).norm() == doctest::Approx(1.0));

  // n = 2: [e1 + f1, e2] is isotropic
  Matrix b = Matrix::Zero(4, 2);
  b(0, 0) = 1;  // x1
  b(2, 0) = 1;  // p1
  b(1, 1) = 1;  // x2
  CHECK_NOTHROW(LagrangianPlane::from_basis(b));
}

TEST_CASE("plane_from_basis rejects bad input") {
  // x1/p1 plane is not isotropic: omega(e1, f1) != 0
  Matrix b = Matrix::Zero(4, 2);
  b(0, 0) = 1;
  b(2, 1) = 1;
  CHECK_THROWS_AS(LagrangianPlane::from_basis(b), NotIsotropic);

  Matrix rank1(2, 1);
  rank1 << 0, 0;
  CHECK_THROWS_AS(LagrangianPlane::from_basis(rank1), RankDeficient);

  Matrix dep = Matrix::Zero(4, 2);
  dep(0, 0) = 1;
  dep(0, 1) = 1;
  CHECK_THROWS_AS(LagrangianPlane::from_basis(dep), RankDeficient);

  CHECK_THROWS_AS(LagrangianPlane::from_basis(Matrix::Identity(4, 3)), BadShape);
}

TEST_CASE("plane_from_ab worked examples") {
  const Matrix i1 = Matrix::Identity(1, 1);
  const Matrix z1 = Matrix::Zero(1, 1);

  CHECK(LagrangianPlane::from_ab(i1, z1).same_plane(LagrangianPlane::coordinate_p(1)));
  CHECK(LagrangianPlane::from_ab(z1, i1).same_plane(LagrangianPlane::coordinate_x(1)));

  // A = B = I/sqrt(2) gives the antidiagonal {p = -x}
  const double r = 1.0 / std::sqrt(2.0);
  const LagrangianPlane anti = LagrangianPlane::from_ab(r * i1, r * i1);
  CHECK(anti.same_plane(LagrangianPlane::from_basis(col2(1, -1))));

  CHECK_THROWS_AS(LagrangianPlane::from_ab(i1, i1), ConstraintViolated);
  CHECK_THROWS_AS(LagrangianPlane::from_ab(i1, Matrix::Zero(2, 2)), BadShape);
}

TEST_CASE("plane_from_ab re-extraction keeps the plane") {
  // rebuild (A, B) from the system the stored basis solves, up to left O(n)
  rng::Stream st(9);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + trial % 3;
    Matrix g(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) g(r, c) = st.normal();
    // unitary A + iB via QR of a complex-free surrogate: use the polar
    // trick (A, B) = (cos, sin) of a random symmetric generator
    const Matrix h = 0.5 * (g + g.transpose());
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
    const Matrix a = eig.eigenvectors() *
                     eig.eigenvalues().array().cos().matrix().asDiagonal() *
                     eig.eigenvectors().transpose();
    const Matrix b = eig.eigenvectors() *
                     eig.eigenvalues().array().sin().matrix().asDiagonal() *
                     eig.eigenvectors().transpose();
    const LagrangianPlane plane = LagrangianPlane::from_ab(a, b);

    // the stored basis [x; p] satisfies Ax + Bp = 0
    const Matrix residual =
        a * plane.basis().topRows(n) + b * plane.basis().bottomRows(n);
    CHECK(residual.cwiseAbs().maxCoeff() < 1e-9);

    // re-extract via x = B^T u, p = -A^T u and compare planes
    Matrix again(2 * n, n);
    again.topRows(n) = b.transpose();
    again.bottomRows(n) = -a.transpose();
    CHECK(plane.same_plane(LagrangianPlane::from_basis(again)));
  }
}

TEST_CASE("is_transverse verdicts") {
  const LagrangianPlane lx = LagrangianPlane::coordinate_x(1);
  const LagrangianPlane lp = LagrangianPlane::coordinate_p(1);
  CHECK(is_transverse(lx, lp).ok);
  CHECK_FALSE(is_transverse(lx, lx).ok);

  const LagrangianPlane d1 = LagrangianPlane::from_basis(col2(1, 1));
  const LagrangianPlane d2 = LagrangianPlane::from_basis(col2(1, -1));
  const TransverseCheck check = is_transverse(d1, d2);
  CHECK(check.ok);
  CHECK(check.margin == doctest::Approx(1.0));  // orthonormal bases, det -1

  CHECK_THROWS_AS(is_transverse(lx, LagrangianPlane::coordinate_x(2)), BadShape);
}

TEST_CASE("frame_symplectic on the coordinate pair is the identity") {
  const SymplecticMatrix s =
      frame_symplectic(LagrangianPlane::coordinate_x(2), LagrangianPlane::coordinate_p(2));
  CHECK((s.mat() - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("frame_symplectic swaps the coordinate planes through +-J") {
  const SymplecticMatrix s =
      frame_symplectic(LagrangianPlane::coordinate_p(1), LagrangianPlane::coordinate_x(1));
  CHECK(s.residual() <= 1e-9);
  CHECK(spans_plane(s.mat().leftCols(1), LagrangianPlane::coordinate_p(1)));
  CHECK(spans_plane(s.mat().rightCols(1), LagrangianPlane::coordinate_x(1)));
  // J itself is a valid frame for this pair
  const Matrix j = standard_j(1);
  CHECK(is_symplectic(j).ok);
  CHECK(spans_plane(j.leftCols(1), LagrangianPlane::coordinate_p(1)));
}

TEST_CASE("frame_symplectic reproduces the hand-computed Gram correction") {
  // raw bases (1,1) and (1,-1): omega-Gram = 2, so the corrected second
  // column is -(1,-1)/2 and S = [[1, -1/2], [1, 1/2]] with det 1
  const Matrix e = col2(1, 1);
  const Matrix f = col2(1, -1);
  const Matrix j = standard_j(1);
  const Matrix gram = -e.transpose() * j * f;
  CHECK(gram(0, 0) == doctest::Approx(2.0));
  Matrix s(2, 2);
  s.leftCols(1) = e;
  s.rightCols(1) = -f * gram.inverse();
  CHECK(s(0, 1) == doctest::Approx(-0.5));
  CHECK(s(1, 1) == doctest::Approx(0.5));
  CHECK(s.determinant() == doctest::Approx(1.0));
  CHECK(is_symplectic(s).residual < 1e-12);

  // the library output for the same (orthonormalized) planes spans the
  // same planes and is symplectic
  const SymplecticMatrix lib = frame_symplectic(LagrangianPlane::from_basis(e),
                                                LagrangianPlane::from_basis(f));
  CHECK(lib.residual() <= 1e-9);
  CHECK(spans_plane(lib.mat().leftCols(1), LagrangianPlane::from_basis(e)));
  CHECK(spans_plane(lib.mat().rightCols(1), LagrangianPlane::from_basis(f)));
}

TEST_CASE("frame_symplectic round trip over random transverse pairs") {
  int done = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const int n = 1 + static_cast<int>(seed % 3);
    const SymplecticMatrix s = random_symplectic(seed * 5 + 2, n, 0.8);
    const LagrangianPlane l1 = LagrangianPlane::from_basis(s.mat().leftCols(n));
    const LagrangianPlane l2 = LagrangianPlane::from_basis(s.mat().rightCols(n));

    const SymplecticMatrix frame = frame_symplectic(l1, l2);
    CHECK(frame.residual() <= 1e-9);
    CHECK(spans_plane(frame.mat().leftCols(n), l1));
    CHECK(spans_plane(frame.mat().rightCols(n), l2));
    ++done;
  }
  CHECK(done == 200);
}

TEST_CASE("TransversePair validates and caches the frame") {
  const TransversePair pair = TransversePair::coordinate(2);
  CHECK(pair.dof() == 2);
  CHECK((pair.frame().mat() - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);

  CHECK_THROWS_AS(TransversePair(LagrangianPlane::coordinate_x(1),
                                 LagrangianPlane::coordinate_x(1)),
                  NotTransverse);
}
