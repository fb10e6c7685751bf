#include "sympolar/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace sympolar {

CovarianceMatrix::CovarianceMatrix(SpdMatrix sigma)
    : sigma_(std::move(sigma)), blocks_(BlockSplit::of(sigma_.sym())) {}

GaussianState::GaussianState(SpdMatrix a_in, SymMatrix b_in)
    : a(std::move(a_in)), b(std::move(b_in)) {
  if (a.dim() != b.dim()) throw BadShape("GaussianState: A and B sizes differ");
}

CertificationReport certify(const CovarianceMatrix& sigma) {
  const int n = sigma.dof();
  const BlockSplit& blk = sigma.blocks();

  std::vector<double> rs(n);
  for (int j = 0; j < n; ++j) {
    rs[static_cast<std::size_t>(j)] =
        blk.xx(j, j) * blk.pp(j, j) - blk.xp(j, j) * blk.xp(j, j) - 0.25;
  }

  // Sigma + (i/2)J as the real symmetric embedding [[S, -J/2], [J/2, S]];
  // eigenvalues come out doubled.
  const Matrix j = standard_j(n);
  Matrix emb = Matrix::Zero(4 * n, 4 * n);
  emb.topLeftCorner(2 * n, 2 * n) = sigma.sigma().mat();
  emb.bottomRightCorner(2 * n, 2 * n) = sigma.sigma().mat();
  emb.topRightCorner(2 * n, 2 * n) = -0.5 * j;
  emb.bottomLeftCorner(2 * n, 2 * n) = 0.5 * j;
  const double min_herm = psd_margin(SymMatrix(std::move(emb)));

  const std::vector<double> lambdas = symplectic_eigenvalues(sigma.sigma());
  const double min_symp = lambdas.back();

  const double r1 = min_herm;
  const double r2 = min_symp - 0.5;
  if ((r1 > tol::kRouteAgreement && r2 < -tol::kRouteAgreement) ||
      (r1 < -tol::kRouteAgreement && r2 > tol::kRouteAgreement)) {
    std::ostringstream os;
    os << "certify: Hermitian route (" << r1 << ") and symplectic route (" << r2
       << ") disagree";
    throw InternalInconsistency(os.str());
  }

  const bool admissible = min_herm >= -tol::kVerdict;
  return {std::move(rs), min_herm, min_symp, admissible};
}

AmbientEllipsoid uncertainty_ellipsoid(const CovarianceMatrix& sigma) {
  return AmbientEllipsoid(SpdMatrix(0.5 * spd_inverse(sigma.sigma())));
}

double gaussian_wigner_eval(const CovarianceMatrix& sigma, const PhaseVector& zbar,
                            const PhaseVector& z) {
  const int n = sigma.dof();
  if (zbar.dof() != n || z.dof() != n) throw BadShape("gaussian_wigner_eval: size mismatch");
  const Vector d = z.stacked() - zbar.stacked();
  const double quad = d.dot(sigma.sigma().mat().llt().solve(d));
  return std::exp(-0.5 * quad - 0.5 * log_det(sigma.sigma()) - n * std::log(2.0 * M_PI));
}

AmbientEllipsoid gaussian_state_wigner_form(const GaussianState& psi) {
  const int n = psi.dof();
  const Matrix ainv = spd_inverse(psi.a);
  const Matrix& b = psi.b.mat();
  Matrix g(2 * n, 2 * n);
  g.topLeftCorner(n, n) = psi.a.mat() + b * ainv * b;
  g.topRightCorner(n, n) = b * ainv;
  g.bottomLeftCorner(n, n) = ainv * b;
  g.bottomRightCorner(n, n) = ainv;
  return AmbientEllipsoid(SpdMatrix(symmetrized(g)));
}

const char* to_string(UncertaintyVerdict v) {
  switch (v) {
    case UncertaintyVerdict::Inadmissible:
      return "Inadmissible";
    case UncertaintyVerdict::Admissible:
      return "Admissible";
    case UncertaintyVerdict::GaussianForced:
      return "GaussianForced";
  }
  return "?";
}

namespace {

UncertaintyVerdict classify_unit_upper(const std::vector<double>& values) {
  bool all_one = true;
  for (const double v : values) {
    if (v > 1.0 + tol::kVerdict) return UncertaintyVerdict::Inadmissible;
    if (std::abs(v - 1.0) > tol::kVerdict) all_one = false;
  }
  return all_one ? UncertaintyVerdict::GaussianForced : UncertaintyVerdict::Admissible;
}

}  // namespace

HardyReport hardy_verdict(const SpdMatrix& a, const SpdMatrix& b) {
  if (a.dim() != b.dim()) throw BadShape("hardy_verdict: dimension mismatch");
  const Matrix half = spd_roots(a).sqrt.mat();
  const EigenDecomposition eig = sym_eig(SymMatrix(symmetrized(half * b.mat() * half)));
  std::vector<double> values(static_cast<std::size_t>(a.dim()));
  for (int i = 0; i < a.dim(); ++i) values[static_cast<std::size_t>(i)] = eig.values(a.dim() - 1 - i);
  return {classify_unit_upper(values), std::move(values)};
}

JointDiagonalization joint_diagonalize(const SpdMatrix& a, const SpdMatrix& b) {
  if (a.dim() != b.dim()) throw BadShape("joint_diagonalize: dimension mismatch");
  const int n = a.dim();
  const SpdRoots roots = spd_roots(a);
  const EigenDecomposition eig =
      sym_eig(SymMatrix(symmetrized(roots.sqrt.mat() * b.mat() * roots.sqrt.mat())));

  // descending, to match the lambda ordering used everywhere else; ties
  // keep their original column order so the identity stays the identity
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](int lhs, int rhs) { return eig.values(lhs) > eig.values(rhs); });

  Matrix u(n, n);
  std::vector<double> lambdas(static_cast<std::size_t>(n));
  Vector quarter(n);
  for (int i = 0; i < n; ++i) {
    const int src = order[static_cast<std::size_t>(i)];
    const double value = eig.values(src);
    lambdas[static_cast<std::size_t>(i)] = value;
    u.col(i) = eig.vectors.col(src);
    quarter(i) = std::pow(value, 0.25);
  }
  Matrix l = roots.inv_sqrt.mat() * u * quarter.asDiagonal();
  return {std::move(l), std::move(lambdas)};
}

UncertaintyVerdict wigner_subgaussian_check(const SpdMatrix& m) {
  return classify_unit_upper(symplectic_eigenvalues(m));
}

}  // namespace sympolar
