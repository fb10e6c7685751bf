#include "sympolar/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "sympolar/detrng.hpp"

namespace sympolar {

PhaseVector::PhaseVector(Vector x_in, Vector p_in) : x(std::move(x_in)), p(std::move(p_in)) {
  if (x.size() != p.size() || x.size() == 0) throw BadShape("PhaseVector: x and p sizes differ");
  if (!x.allFinite() || !p.allFinite()) throw BadShape("PhaseVector: non-finite entries");
}

PhaseVector PhaseVector::zero(int n) { return {Vector::Zero(n), Vector::Zero(n)}; }

PhaseVector PhaseVector::from_stacked(const Vector& z) {
  if (z.size() % 2 != 0 || z.size() == 0) throw BadShape("PhaseVector: stacked size must be even");
  const int n = static_cast<int>(z.size()) / 2;
  return {z.head(n), z.tail(n)};
}

Vector PhaseVector::stacked() const {
  Vector z(2 * dof());
  z << x, p;
  return z;
}

Matrix standard_j(int n) {
  if (n < 1) throw BadShape("standard_j: n must be >= 1");
  Matrix j = Matrix::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = Matrix::Identity(n, n);
  j.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
  return j;
}

double symp_product(const PhaseVector& z, const PhaseVector& w) {
  if (z.dof() != w.dof()) throw BadShape("symp_product: dimension mismatch");
  return z.p.dot(w.x) - z.x.dot(w.p);
}

SymplecticCheck is_symplectic(const Matrix& s, double tolerance) {
  if (s.rows() != s.cols() || s.rows() % 2 != 0 || s.rows() == 0) {
    throw BadShape("is_symplectic: matrix must be square with even dimension");
  }
  const Matrix j = standard_j(static_cast<int>(s.rows()) / 2);
  const double residual = (s.transpose() * j * s - j).cwiseAbs().maxCoeff();
  return {residual <= tolerance, residual};
}

SymplecticMatrix::SymplecticMatrix(Matrix s, double tolerance) : s_(std::move(s)) {
  const SymplecticCheck check = is_symplectic(s_, tolerance);
  residual_ = check.residual;
  if (!check.ok) {
    std::ostringstream os;
    os << "SymplecticMatrix: |S^T J S - J|_max = " << residual_ << " exceeds " << tolerance;
    throw ConstraintViolated(os.str());
  }
}

SymplecticMatrix SymplecticMatrix::inverse() const {
  const Matrix j = standard_j(dof());
  return SymplecticMatrix(-j * s_.transpose() * j);
}

namespace {

// lambda_j (descending) from the skew matrix K = R J R with R an SPD root:
// the eigenvalues of K^T K are the squared moduli, each doubled.
std::vector<double> skew_moduli_desc(const Matrix& k) {
  const SymMatrix gram(symmetrized(k.transpose() * k));
  const EigenDecomposition eig = sym_eig(gram);
  const int d = static_cast<int>(eig.values.size());
  std::vector<double> mods(d);
  for (int i = 0; i < d; ++i) mods[i] = std::sqrt(std::max(0.0, eig.values(d - 1 - i)));
  std::vector<double> out(d / 2);
  for (int j = 0; j < d / 2; ++j) out[j] = 0.5 * (mods[2 * j] + mods[2 * j + 1]);
  return out;
}

}  // namespace

std::vector<double> symplectic_eigenvalues(const SpdMatrix& m) {
  if (m.dim() % 2 != 0) throw BadShape("symplectic_eigenvalues: dimension must be even");
  const int n = m.dim() / 2;
  const SpdRoots roots = spd_roots(m);
  const Matrix k = roots.sqrt.mat() * standard_j(n) * roots.sqrt.mat();
  return skew_moduli_desc(k);
}

Matrix symplectic_gram_schmidt(const Matrix& s) {
  const int n = static_cast<int>(s.rows()) / 2;
  const Matrix j = standard_j(n);
  Matrix r = s;
  // Bilinear form b(u, v) = u^T J v; a symplectic frame has b(e_i, f_i) = 1.
  auto b = [&](const Vector& u, const Vector& v) { return u.dot(j * v); };
  for (int i = 0; i < n; ++i) {
    Vector e = r.col(i);
    Vector f = r.col(n + i);
    for (int k = 0; k < i; ++k) {
      const Vector ek = r.col(k);
      const Vector fk = r.col(n + k);
      e -= b(e, fk) * ek - b(e, ek) * fk;
      f -= b(f, fk) * ek - b(f, ek) * fk;
    }
    const double scale = b(e, f);
    if (std::abs(scale) < 1e-14) throw NumericalFailure("symplectic_gram_schmidt: degenerate pair");
    f /= scale;
    r.col(i) = e;
    r.col(n + i) = f;
  }
  return r;
}

WilliamsonForm williamson(const SpdMatrix& m) {
  if (m.dim() % 2 != 0) throw BadShape("williamson: dimension must be even");
  const int n = m.dim() / 2;

  {
    const EigenDecomposition eig = sym_eig(m.sym());
    const double hi = eig.values(eig.values.size() - 1);
    const double lo = eig.values(0);
    if (hi / lo > tol::kConditionCap) {
      throw NumericalFailure("williamson: condition number exceeds 1e12");
    }
  }

  const SpdRoots roots = spd_roots(m);
  const Matrix j = standard_j(n);
  // K is antisymmetric with eigenvalues +/- i / lambda_j.
  Matrix k = roots.inv_sqrt.mat() * j * roots.inv_sqrt.mat();
  k = 0.5 * (k - k.transpose());

  const SymMatrix gram(symmetrized(k.transpose() * k));
  const EigenDecomposition eig = sym_eig(gram);  // 1/lambda^2, ascending

  // Invariant planes of K, grouped by eigenvalue cluster. Ascending
  // 1/lambda^2 yields the lambdas in descending order.
  Matrix q(2 * n, 2 * n);
  std::vector<double> lambdas;
  lambdas.reserve(n);
  int filled = 0;  // completed pairs
  int i = 0;
  const double scale = std::max(eig.values.cwiseAbs().maxCoeff(), 1e-300);
  while (i < 2 * n) {
    int jwhere = i + 1;
    while (jwhere < 2 * n && eig.values(jwhere) - eig.values(jwhere - 1) <= 1e-9 * scale) ++jwhere;
    const int size = jwhere - i;
    if (size % 2 != 0) throw NumericalFailure("williamson: odd eigenvalue cluster");

    const double mu = std::sqrt(eig.values.segment(i, size).mean());
    const Matrix basis = eig.vectors.middleCols(i, size);
    Matrix chosen(2 * n, size);
    int used = 0;
    while (used < size) {
      // pick the basis column with the largest component outside the
      // pairs already chosen in this cluster
      Vector u;
      double best = -1.0;
      for (int c = 0; c < size; ++c) {
        Vector cand = basis.col(c);
        if (used > 0) {
          const auto done = chosen.leftCols(used);
          cand -= done * (done.transpose() * cand);
        }
        const double norm = cand.norm();
        if (norm > best) {
          best = norm;
          u = cand;
        }
      }
      if (best < 1e-8) throw NumericalFailure("williamson: cluster basis collapsed");
      u.normalize();
      Vector v = -(k * u) / mu;
      if (used > 0) {
        const auto done = chosen.leftCols(used);
        v -= done * (done.transpose() * v);
      }
      v -= u * u.dot(v);
      v.normalize();
      const int pair = filled + used / 2;
      q.col(pair) = u;
      q.col(n + pair) = v;
      chosen.col(used++) = u;
      chosen.col(used++) = v;
      lambdas.push_back(1.0 / mu);
    }
    filled += size / 2;
    i = jwhere;
  }

  Vector d_half(2 * n);
  for (int a = 0; a < n; ++a) {
    d_half(a) = std::sqrt(lambdas[static_cast<std::size_t>(a)]);
    d_half(n + a) = d_half(a);
  }
  Matrix r = roots.inv_sqrt.mat() * q * d_half.asDiagonal();
  r = symplectic_gram_schmidt(r);

  SymplecticMatrix r_sym(r);
  return {r_sym.inverse(), std::move(lambdas)};
}

namespace {

Matrix random_square(rng::Stream& st, int n, double spread) {
  Matrix m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = st.uniform(-spread, spread);
  return m;
}

}  // namespace

SymplecticMatrix random_symplectic(std::uint64_t seed, int n, double spread) {
  if (n < 1) throw BadShape("random_symplectic: n must be >= 1");
  if (!(spread > 0.0)) throw ConstraintViolated("random_symplectic: spread must be > 0");

  rng::Stream st(seed, 0x53504eull);  // "SPN"
  const Matrix j = standard_j(n);
  Matrix s = Matrix::Identity(2 * n, 2 * n);
  for (int round = 0; round < 2; ++round) {
    Matrix l = random_square(st, n, spread);
    // retry until comfortably invertible; deterministic since draws advance
    for (int attempt = 0; attempt < 64; ++attempt) {
      const Eigen::JacobiSVD<Matrix> svd(l);
      if (svd.singularValues()(n - 1) >= 0.25 * spread) break;
      l = random_square(st, n, spread);
    }
    Matrix gl = Matrix::Zero(2 * n, 2 * n);
    gl.topLeftCorner(n, n) = l;
    gl.bottomRightCorner(n, n) = l.transpose().inverse();

    const Matrix c = symmetrized(random_square(st, n, spread));
    Matrix shear = Matrix::Identity(2 * n, 2 * n);
    shear.bottomLeftCorner(n, n) = c;

    s = s * gl * shear * j;
  }
  if (is_symplectic(s, 1e-12).residual > 1e-12) s = symplectic_gram_schmidt(s);
  return SymplecticMatrix(s);
}

}  // namespace sympolar
