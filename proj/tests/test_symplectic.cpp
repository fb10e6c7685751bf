#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "sympolar/detrng.hpp"
#include "sympolar/oracle.hpp"
#include "sympolar/symplectic.hpp"

using namespace sympolar;

namespace {

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

PhaseVector pv1(double x, double p) {
  Vector vx(1), vp(1);
  vx << x;
  vp << p;
  return {vx, vp};
}

// brute-force n = 1 oracle: the symplectic eigenvalue of an SPD 2x2 form
double n1_symplectic_eigenvalue(const Matrix& m) { return std::sqrt(m.determinant()); }

}  // namespace

TEST_CASE("standard_j definition and identities") {
  const Matrix j = standard_j(1);
  CHECK(j(0, 1) == 1.0);
  CHECK(j(1, 0) == -1.0);
  CHECK(j(0, 0) == 0.0);

  for (int n = 1; n <= 3; ++n) {
    const Matrix jn = standard_j(n);
    CHECK((jn * jn + Matrix::Identity(2 * n, 2 * n)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((jn.transpose() + jn).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("symp_product convention and antisymmetry") {
  CHECK(symp_product(pv1(1, 0), pv1(0, 1)) == doctest::Approx(-1.0));
  CHECK(symp_product(pv1(0.3, -2.0), pv1(0.3, -2.0)) == 0.0);

  rng::Stream st(41);
  for (int trial = 0; trial < 50; ++trial) {
    const PhaseVector z = pv1(st.uniform(-2, 2), st.uniform(-2, 2));
    const PhaseVector w = pv1(st.uniform(-2, 2), st.uniform(-2, 2));
    CHECK(symp_product(z, w) == doctest::Approx(-symp_product(w, z)).epsilon(1e-14));
    // matches (Jz) . w
    const Matrix j = standard_j(1);
    CHECK(symp_product(z, w) == doctest::Approx((j * z.stacked()).dot(w.stacked())));
  }

  Vector x2(2), p2(2);
  x2 << 1, 0;
  p2 << 0, 1;
  CHECK_THROWS_AS(symp_product(pv1(1, 0), PhaseVector(x2, p2)), BadShape);
}

TEST_CASE("is_symplectic verdicts") {
  CHECK(is_symplectic(Matrix::Identity(4, 4)).ok);
  CHECK(is_symplectic(Matrix::Identity(4, 4)).residual == 0.0);
  CHECK(is_symplectic(mat2(2, 0, 0, 0.5)).ok);

  const SymplecticCheck bad = is_symplectic(mat2(2, 0, 0, 2));
  CHECK_FALSE(bad.ok);
  CHECK(bad.residual == doctest::Approx(3.0));

  CHECK_THROWS_AS(is_symplectic(Matrix::Identity(3, 3)), BadShape);
}

TEST_CASE("symplectic_eigenvalues worked examples") {
  SUBCASE("identity") {
    const std::vector<double> l = symplectic_eigenvalues(SpdMatrix(Matrix::Identity(6, 6)));
    for (const double v : l) CHECK(v == doctest::Approx(1.0));
  }
  SUBCASE("diag(4,1) has eigenvalue 2") {
    const std::vector<double> l = symplectic_eigenvalues(SpdMatrix(mat2(4, 0, 0, 1)));
    REQUIRE(l.size() == 1);
    CHECK(l[0] == doctest::Approx(2.0));
  }
  SUBCASE("diag(A, A^{-1}) has unit spectrum") {
    const SpdMatrix a = oracle::random_spd(7, 3, 10.0);
    Matrix m = Matrix::Zero(6, 6);
    m.topLeftCorner(3, 3) = a.mat();
    m.bottomRightCorner(3, 3) = spd_inverse(a);
    const std::vector<double> l = symplectic_eigenvalues(SpdMatrix(m));
    for (const double v : l) CHECK(v == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("n = 1 symplectic eigenvalue equals sqrt(det)") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const SpdMatrix m = oracle::random_spd(seed, 2, 20.0);
    const std::vector<double> l = symplectic_eigenvalues(m);
    CHECK(l[0] == doctest::Approx(n1_symplectic_eigenvalue(m.mat())).epsilon(1e-10));
  }
}

TEST_CASE("symplectic invariance of the spectrum") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const int n = 1 + static_cast<int>(seed % 3);
    const SpdMatrix m = oracle::random_spd(seed * 3 + 5, 2 * n, 6.0);
    const SymplecticMatrix s = random_symplectic(seed, n, 0.6);
    const SpdMatrix conj(symmetrized(s.mat().transpose() * m.mat() * s.mat()));
    const std::vector<double> l1 = symplectic_eigenvalues(m);
    const std::vector<double> l2 = symplectic_eigenvalues(conj);
    for (std::size_t i = 0; i < l1.size(); ++i) {
      CHECK(l2[i] == doctest::Approx(l1[i]).epsilon(1e-8));
    }
  }
}

TEST_CASE("williamson worked examples") {
  SUBCASE("M = diag(2,2)") {
    const WilliamsonForm w = williamson(SpdMatrix(mat2(2, 0, 0, 2)));
    REQUIRE(w.lambdas.size() == 1);
    CHECK(w.lambdas[0] == doctest::Approx(2.0));
    // the factor is orthogonal-symplectic here
    const Matrix gram = w.s.mat().transpose() * w.s.mat();
    CHECK((gram - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-9);
  }
  SUBCASE("M = diag(4,1) factors through diag(sqrt 2, 1/sqrt 2)") {
    const WilliamsonForm w = williamson(SpdMatrix(mat2(4, 0, 0, 1)));
    CHECK(w.lambdas[0] == doctest::Approx(2.0));
    const Matrix d = mat2(2, 0, 0, 2);
    const Matrix rebuilt = w.s.mat().transpose() * d * w.s.mat();
    CHECK((rebuilt - mat2(4, 0, 0, 1)).cwiseAbs().maxCoeff() < 1e-9);
  }
  SUBCASE("identity") {
    const WilliamsonForm w = williamson(SpdMatrix(Matrix::Identity(4, 4)));
    CHECK(w.lambdas[0] == doctest::Approx(1.0));
    CHECK(w.lambdas[1] == doctest::Approx(1.0));
  }
}

TEST_CASE("williamson reconstructs random SPD matrices") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const int n = 1 + static_cast<int>(seed % 3);
    const SpdMatrix m = oracle::random_spd(seed * 11 + 3, 2 * n, 30.0);
    const WilliamsonForm w = williamson(m);

    CHECK(w.s.residual() <= 1e-9);
    CHECK(std::is_sorted(w.lambdas.rbegin(), w.lambdas.rend()));

    Vector diag(2 * n);
    for (int i = 0; i < n; ++i) diag(i) = diag(n + i) = w.lambdas[static_cast<std::size_t>(i)];
    const Matrix rebuilt = w.s.mat().transpose() * diag.asDiagonal() * w.s.mat();
    const double scale = m.mat().cwiseAbs().maxCoeff();
    CHECK((rebuilt - m.mat()).cwiseAbs().maxCoeff() <= 1e-8 * scale);

    const std::vector<double> spectrum = symplectic_eigenvalues(m);
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
      CHECK(w.lambdas[i] == doctest::Approx(spectrum[i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("williamson survives degenerate spectra") {
  // two equal symplectic eigenvalues at n = 2
  Matrix m = Matrix::Zero(4, 4);
  m.diagonal() << 3.0, 3.0, 3.0, 3.0;
  const WilliamsonForm w = williamson(SpdMatrix(m));
  CHECK(w.lambdas[0] == doctest::Approx(3.0));
  CHECK(w.lambdas[1] == doctest::Approx(3.0));
  Vector diag(4);
  diag << 3, 3, 3, 3;
  const Matrix rebuilt = w.s.mat().transpose() * diag.asDiagonal() * w.s.mat();
  CHECK((rebuilt - m).cwiseAbs().maxCoeff() <= 1e-8 * 3.0);
}

TEST_CASE("pathological conditioning is rejected before it reaches williamson") {
  // the SPD gate (min eig relative to max) already refuses condition
  // numbers beyond 1e10; williamson's own 1e12 cap is a second fence
  Matrix m = Matrix::Identity(2, 2);
  m(0, 0) = 1e14;
  m(1, 1) = 1e-14;
  CHECK_THROWS_AS(SpdMatrix{m}, NotPositiveDefinite);
}

TEST_CASE("random_symplectic determinism and group structure") {
  const SymplecticMatrix s1 = random_symplectic(0, 1, 1.0);
  CHECK(s1.residual() <= 1e-9);

  const SymplecticMatrix s2 = random_symplectic(0, 1, 1.0);
  CHECK((s1.mat() - s2.mat()).cwiseAbs().maxCoeff() == 0.0);

  const SymplecticMatrix t = random_symplectic(1, 1, 1.0);
  CHECK((s1.mat() - t.mat()).cwiseAbs().maxCoeff() > 1e-6);

  // group closure
  const Matrix prod = s1.mat() * t.mat();
  CHECK(is_symplectic(prod).ok);

  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const int n = 1 + static_cast<int>(seed % 4);
    const SymplecticMatrix s = random_symplectic(seed, n, 1.5);
    CHECK(s.residual() <= 1e-9);
    const SymplecticMatrix inv = s.inverse();
    CHECK((s.mat() * inv.mat() - Matrix::Identity(2 * n, 2 * n)).cwiseAbs().maxCoeff() < 1e-9);
  }

  CHECK_THROWS_AS(random_symplectic(0, 1, 0.0), ConstraintViolated);
}
