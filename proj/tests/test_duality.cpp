#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "sympolar/detrng.hpp"
#include "sympolar/duality.hpp"
#include "sympolar/oracle.hpp"

using namespace sympolar;

namespace {

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Matrix scalar(double v) {
  Matrix m(1, 1);
  m << v;
  return m;
}

// random symplectic ball: M = S^T S for S in Sp(n), so all symplectic
// eigenvalues are exactly one
SpdMatrix symplectic_ball_form(std::uint64_t seed, int n, double spread = 0.6) {
  const SymplecticMatrix s = random_symplectic(seed, n, spread);
  return SpdMatrix(symmetrized(s.mat().transpose() * s.mat()));
}

// skips nearly-tangent pairs: their frames are too ill-conditioned for the
// 1e-9 contracts to be meaningful at double precision
TransversePair random_pair(std::uint64_t seed, int n, double spread = 0.6) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    const SymplecticMatrix s = random_symplectic(rng::derive(seed, attempt), n, spread);
    const LagrangianPlane l1 = LagrangianPlane::from_basis(s.mat().leftCols(n));
    const LagrangianPlane l2 = LagrangianPlane::from_basis(s.mat().rightCols(n));
    if (is_transverse(l1, l2).margin >= 1e-2) return {l1, l2};
  }
}

// ambient points of the plane ellipsoid boundary, for the omega-sampling
// oracle of the Lagrangian dual
Matrix ambient_boundary(const PlaneEllipsoid& x, std::uint64_t seed, std::size_t count) {
  const oracle::SampleCloud chart = oracle::ellipsoid_boundary_cloud(x.form(), seed, count);
  return chart.points * x.plane().basis().transpose();  // count x 2n
}

// sup over sampled z in X of omega(z, z') for every sampled boundary z' of
// the claimed dual must sit at 1
void check_lagrangian_dual_by_sampling(const PlaneEllipsoid& x, const PlaneEllipsoid& dual,
                                       std::uint64_t seed) {
  const Matrix zx = ambient_boundary(x, seed, 10000);
  const Matrix zd = ambient_boundary(dual, seed + 1, 32);
  const Matrix j = standard_j(x.dof());
  // omega(z, z') = (Jz) . z'
  const Matrix omega = (zx * j.transpose()) * zd.transpose();  // samples x duals
  for (Eigen::Index c = 0; c < omega.cols(); ++c) {
    const double sup = omega.col(c).maxCoeff();
    CHECK(sup <= 1.0 + 1e-3);
    CHECK(sup >= 1.0 - 2e-2);
  }
}

}  // namespace

TEST_CASE("lagrangian_polar_dual on the coordinate pair inverts the form") {
  const TransversePair pair = TransversePair::coordinate(2);
  const SpdMatrix a = oracle::random_spd(1, 2, 5.0);
  const PlaneEllipsoid x{pair.first(), a};
  const PlaneEllipsoid dual = lagrangian_polar_dual(x, pair);
  CHECK(dual.plane().same_plane(LagrangianPlane::coordinate_p(2)));
  CHECK((dual.form().mat() - spd_inverse(a)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("lagrangian_polar_dual through the swapped coordinate pair") {
  const TransversePair pair{LagrangianPlane::coordinate_p(1), LagrangianPlane::coordinate_x(1)};
  const PlaneEllipsoid x{pair.first(), SpdMatrix(scalar(4.0))};
  const PlaneEllipsoid dual = lagrangian_polar_dual(x, pair);
  CHECK(dual.plane().same_plane(LagrangianPlane::coordinate_x(1)));
  CHECK(dual.form().mat()(0, 0) == doctest::Approx(0.25));
  check_lagrangian_dual_by_sampling(x, dual, 5);
}

TEST_CASE("lagrangian_polar_dual on diagonal planes, sampling oracle") {
  Matrix b1(2, 1), b2(2, 1);
  b1 << 1, 1;
  b2 << 1, -1;
  const TransversePair pair{LagrangianPlane::from_basis(b1), LagrangianPlane::from_basis(b2)};
  const PlaneEllipsoid x{pair.first(), SpdMatrix(scalar(2.0))};
  const PlaneEllipsoid dual = lagrangian_polar_dual(x, pair);
  CHECK(dual.plane().same_plane(pair.second()));
  check_lagrangian_dual_by_sampling(x, dual, 11);
}

TEST_CASE("lagrangian_polar_dual over random pairs, sampling oracle") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const int n = 1 + static_cast<int>(seed % 2);
    const TransversePair pair = random_pair(seed + 100, n);
    const PlaneEllipsoid x{pair.first(), oracle::random_spd(seed, n, 4.0)};
    const PlaneEllipsoid dual = lagrangian_polar_dual(x, pair);
    check_lagrangian_dual_by_sampling(x, dual, seed * 3 + 1);
  }
}

TEST_CASE("frame independence of the Lagrangian dual") {
  // same pair of planes handed over through differently-scrambled bases
  // must give the same dual body
  rng::Stream st(77);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 3;
    const SymplecticMatrix s = random_symplectic(static_cast<std::uint64_t>(trial) + 900, n, 0.6);
    const Matrix e = s.mat().leftCols(n);
    const Matrix f = s.mat().rightCols(n);
    Matrix r1(n, n), r2(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        r1(a, b) = st.uniform(-1, 1);
        r2(a, b) = st.uniform(-1, 1);
      }
    r1 += 3.0 * Matrix::Identity(n, n);
    r2 -= 3.0 * Matrix::Identity(n, n);

    const TransversePair pair1{LagrangianPlane::from_basis(e), LagrangianPlane::from_basis(f)};
    const TransversePair pair2{LagrangianPlane::from_basis(e * r1),
                               LagrangianPlane::from_basis(f * r2)};

    const SpdMatrix form1(oracle::random_spd(static_cast<std::uint64_t>(trial), n, 4.0));
    const PlaneEllipsoid x1{pair1.first(), form1};
    // same point set expressed in the second chart: c1 = (B1^T B2) c2
    const Matrix t = pair1.first().basis().transpose() * pair2.first().basis();
    const PlaneEllipsoid x2{pair2.first(),
                            SpdMatrix(symmetrized(t.transpose() * form1.mat() * t))};

    const PlaneEllipsoid d1 = lagrangian_polar_dual(x1, pair1);
    const PlaneEllipsoid d2 = lagrangian_polar_dual(x2, pair2);

    // compare as point sets through ambient support functions
    const oracle::SampleCloud dirs = oracle::direction_cloud(2 * n, 50 + trial, 50);
    for (Eigen::Index d = 0; d < dirs.points.rows(); ++d) {
      const Vector u = dirs.points.row(d).transpose();
      const double h1 = support_function(d1, d1.plane().basis().transpose() * u);
      const double h2 = support_function(d2, d2.plane().basis().transpose() * u);
      CHECK(h1 == doctest::Approx(h2).epsilon(1e-8));
    }
  }
}

TEST_CASE("dual_pair_verdict worked examples") {
  SUBCASE("AB = I is exact") {
    const DualPairVerdict v =
        dual_pair_verdict(SpdMatrix(mat2(1, 0, 0, 4)), SpdMatrix(mat2(1, 0, 0, 0.25)));
    CHECK(v.status == DualStatus::ExactDual);
    CHECK(v.exactness_residual < 1e-12);
  }
  SUBCASE("A = I/2, B = I is dual with margin 1/2") {
    const DualPairVerdict v =
        dual_pair_verdict(SpdMatrix(0.5 * Matrix::Identity(2, 2)), SpdMatrix(Matrix::Identity(2, 2)));
    CHECK(v.status == DualStatus::Dual);
    CHECK(v.margin == doctest::Approx(0.5));
  }
  SUBCASE("A = 2I, B = I is not dual, margin -1") {
    const DualPairVerdict v =
        dual_pair_verdict(SpdMatrix(2.0 * Matrix::Identity(2, 2)), SpdMatrix(Matrix::Identity(2, 2)));
    CHECK(v.status == DualStatus::NotDual);
    CHECK(v.margin == doctest::Approx(-1.0));
  }
}

TEST_CASE("verdicts are invariant under conformal scaling") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const int n = 1 + static_cast<int>(seed % 3);
    const SpdMatrix a = oracle::random_spd(seed, n, 5.0);
    const SpdMatrix b = oracle::random_spd(seed + 500, n, 5.0);
    const DualPairVerdict v1 = dual_pair_verdict(a, b);
    // scaling X by t scales A by 1/t^2 and the dual constraint B by t^2
    const double t2 = 1e-4;
    const DualPairVerdict v2 =
        dual_pair_verdict(SpdMatrix(a.mat() / t2), SpdMatrix(b.mat() * t2));
    CHECK(v1.status == v2.status);
  }
}

TEST_CASE("enlarging both members keeps a dual pair dual") {
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const int n = 1 + static_cast<int>(seed % 3);
    const SpdMatrix a = oracle::random_spd(seed, n, 4.0);
    const SpdMatrix b = oracle::random_spd(seed + 300, n, 4.0);
    const DualPairVerdict v = dual_pair_verdict(a, b);
    if (v.status == DualStatus::NotDual) continue;
    ++hits;
    // shrinking the forms by eps * I enlarges both bodies
    const double eps = 0.25 * std::min(a.min_eig(), b.min_eig());
    const SpdMatrix a2(a.mat() - eps * Matrix::Identity(n, n));
    const SpdMatrix b2(b.mat() - eps * Matrix::Identity(n, n));
    CHECK(dual_pair_verdict(a2, b2).status != DualStatus::NotDual);
  }
  CHECK(hits > 20);  // the harness actually exercised the lemma
}

TEST_CASE("thm1_check on the unit ball is exact") {
  const Thm1Result r =
      thm1_check(AmbientEllipsoid::ball(2, 1.0), TransversePair::coordinate(2));
  CHECK(r.status == DualStatus::ExactDual);
  CHECK(r.inclusion_margin >= -1e-12);
  CHECK(r.equality_residual < 1e-12);
  CHECK(r.capacity == doctest::Approx(M_PI));
}

TEST_CASE("thm1_check worked strict example") {
  // M = [[2,1],[1,1]] is symplectic SPD at n = 1; the projections are
  // [-1,1] and [-sqrt 2, sqrt 2], inclusion margin 1/2
  const AmbientEllipsoid omega{SpdMatrix(mat2(2, 1, 1, 1))};
  const Thm1Result r = thm1_check(omega, TransversePair::coordinate(1));
  CHECK(r.status == DualStatus::Dual);
  CHECK(r.inclusion_margin == doctest::Approx(0.5));
  CHECK(r.equality_residual > 1e-3);
  CHECK(r.capacity == doctest::Approx(M_PI));
}

TEST_CASE("thm1_check rejects bodies without a symplectic unit ball") {
  CHECK_THROWS_AS(thm1_check(AmbientEllipsoid::ball(1, 0.5), TransversePair::coordinate(1)),
                  HypothesisNotMet);
}

TEST_CASE("thm1 inclusion margin over random balls and pairs") {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const int n = 1 + static_cast<int>(seed % 3);
    const AmbientEllipsoid omega{symplectic_ball_form(seed * 2 + 1, n, 0.45)};
    const TransversePair pair = random_pair(seed * 2 + 2, n, 0.45);
    const Thm1Result r = thm1_check(omega, pair);
    CHECK(r.inclusion_margin >= -1e-9);
  }
}

TEST_CASE("coordinate identities of the projection theorem") {
  // for SPD symplectic M: M/M_PP = M_PP^{-1} and M/M_XX = M_XX^{-1}
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int n = 1 + static_cast<int>(seed % 3);
    const SpdMatrix m = symplectic_ball_form(seed + 41, n);
    const BlockSplit split = BlockSplit::of(m.sym());
    const double scale = m.mat().cwiseAbs().maxCoeff();
    const Matrix lhs1 = schur_complement(split, Eliminate::PP).mat();
    const Matrix lhs2 = schur_complement(split, Eliminate::XX).mat();
    CHECK((lhs1 - spd_inverse(SpdMatrix(split.pp))).cwiseAbs().maxCoeff() <= 1e-9 * scale);
    CHECK((lhs2 - spd_inverse(SpdMatrix(split.xx))).cwiseAbs().maxCoeff() <= 1e-9 * scale);
  }
}

TEST_CASE("equality detection in thm1") {
  SUBCASE("block-diagonal symplectic balls give equality") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const int n = 1 + static_cast<int>(seed % 3);
      const SpdMatrix a = oracle::random_spd(seed, n, 5.0);
      Matrix m = Matrix::Zero(2 * n, 2 * n);
      m.topLeftCorner(n, n) = a.mat();
      m.bottomRightCorner(n, n) = spd_inverse(a);
      const Thm1Result r =
          thm1_check(AmbientEllipsoid{SpdMatrix(m)}, TransversePair::coordinate(n));
      CHECK(r.equality_residual <= 1e-9);
    }
  }
  SUBCASE("an off-diagonal block forces strictness") {
    int witnessed = 0;
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
      const int n = 1 + static_cast<int>(seed % 3);
      const SpdMatrix m = symplectic_ball_form(seed + 900, n);
      const BlockSplit split = BlockSplit::of(m.sym());
      if (split.xp.cwiseAbs().maxCoeff() < 0.1) continue;
      ++witnessed;
      const Thm1Result r = thm1_check(AmbientEllipsoid{m}, TransversePair::coordinate(n));
      CHECK(r.equality_residual >= 1e-3);
    }
    CHECK(witnessed > 10);
  }
}

TEST_CASE("reconstruct_ball worked examples") {
  SUBCASE("n = 1, X = [-2, 2]") {
    const TransversePair pair = TransversePair::coordinate(1);
    const AmbientEllipsoid ball =
        reconstruct_ball({pair.first(), SpdMatrix(scalar(0.25))}, pair);
    CHECK(ball.form().mat()(0, 0) == doctest::Approx(0.25));
    CHECK(ball.form().mat()(1, 1) == doctest::Approx(4.0));
    CHECK(capacity(ball) == doctest::Approx(M_PI).epsilon(1e-9));
  }
  SUBCASE("A = I gives the unit ball") {
    const TransversePair pair = TransversePair::coordinate(3);
    const AmbientEllipsoid ball =
        reconstruct_ball({pair.first(), SpdMatrix(Matrix::Identity(3, 3))}, pair);
    CHECK((ball.form().mat() - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("reconstruct_ball round trip") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int n = 1 + static_cast<int>(seed % 3);
    const TransversePair pair = random_pair(seed + 71, n);
    const SpdMatrix a = oracle::random_spd(seed, n, 5.0);
    const PlaneEllipsoid x{pair.first(), a};
    const AmbientEllipsoid ball = reconstruct_ball(x, pair);

    const PlaneEllipsoid back = lagrangian_projection(ball, pair, PairSlot::First);
    const double scale = a.mat().cwiseAbs().maxCoeff();
    CHECK((back.form().mat() - a.mat()).cwiseAbs().maxCoeff() <= 1e-9 * scale);

    const PlaneEllipsoid dual = lagrangian_polar_dual(x, pair);
    const PlaneEllipsoid back2 = lagrangian_projection(ball, pair, PairSlot::Second);
    const double dscale = dual.form().mat().cwiseAbs().maxCoeff();
    CHECK((back2.form().mat() - dual.form().mat()).cwiseAbs().maxCoeff() <= 1e-9 * dscale);

    CHECK(capacity(ball) == doctest::Approx(M_PI).epsilon(1e-9));
  }
}

TEST_CASE("product_capacity worked examples") {
  SUBCASE("exact dual pairs sit at 4") {
    const SpdMatrix a = oracle::random_spd(3, 3, 6.0);
    CHECK(product_capacity(a, SpdMatrix(spd_inverse(a))) == doctest::Approx(4.0).epsilon(1e-9));
  }
  SUBCASE("X = ball(2), P = ball(1): sup lambda = 2") {
    const SpdMatrix a(0.25 * Matrix::Identity(2, 2));
    const SpdMatrix b(Matrix::Identity(2, 2));
    CHECK(product_capacity(a, b) == doctest::Approx(8.0));
  }
  SUBCASE("A = 4I, B = I is below 4") {
    const SpdMatrix a(4.0 * Matrix::Identity(2, 2));
    const SpdMatrix b(Matrix::Identity(2, 2));
    CHECK(product_capacity(a, b) == doctest::Approx(2.0));
  }
}

TEST_CASE("product capacity at least 4 iff dual pair") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const int n = 1 + static_cast<int>(seed % 3);
    const SpdMatrix a = oracle::random_spd(seed, n, 4.0);
    const SpdMatrix b = oracle::random_spd(seed + 12345, n, 4.0);
    const double value = product_capacity(a, b);
    if (std::abs(value - 4.0) <= 1e-9) continue;  // boundary band excluded
    const bool dual = dual_pair_verdict(a, b).status != DualStatus::NotDual;
    CHECK(dual == (value > 4.0));
  }
}
