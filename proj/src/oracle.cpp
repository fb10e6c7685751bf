#include "sympolar/oracle.hpp"

#include <cmath>
#include <limits>
#include <complex>

#include "sympolar/detrng.hpp"

namespace sympolar::oracle {

SampleCloud direction_cloud(int n, std::uint64_t seed, std::size_t count) {
  if (n < 1 || count == 0) throw BadShape("direction_cloud: need n >= 1 and count > 0");
  SampleCloud cloud;
  cloud.n = n;
  cloud.seed = seed;
  cloud.count = count;
  cloud.points.resize(static_cast<Eigen::Index>(count), n);
  for (std::size_t i = 0; i < count; ++i) {
    rng::Stream st(seed, i);
    Vector u(n);
    double norm = 0.0;
    do {
      for (int c = 0; c < n; ++c) u(c) = st.normal();
      norm = u.norm();
    } while (norm < 1e-8);
    cloud.points.row(static_cast<Eigen::Index>(i)) = u.transpose() / norm;
  }
  return cloud;
}

SampleCloud ellipsoid_boundary_cloud(const SpdMatrix& form, std::uint64_t seed,
                                     std::size_t count) {
  SampleCloud cloud = direction_cloud(form.dim(), seed, count);
  for (Eigen::Index i = 0; i < cloud.points.rows(); ++i) {
    const Vector u = cloud.points.row(i).transpose();
    cloud.points.row(i) = u.transpose() / std::sqrt(u.dot(form.mat() * u));
  }
  return cloud;
}

MembershipVerdict mc_polar_membership(const SampleCloud& boundary, const Vector& candidate) {
  if (boundary.count == 0) throw ConstraintViolated("mc_polar_membership: empty cloud");
  if (candidate.size() != boundary.n) throw BadShape("mc_polar_membership: size mismatch");
  const double max_inner = (boundary.points * candidate).maxCoeff();
  return {max_inner <= 1.0 + tol::kMcAccept, max_inner};
}

Vector mc_polar_max_inner(const SampleCloud& boundary, const Matrix& candidates) {
  if (boundary.count == 0) throw ConstraintViolated("mc_polar_max_inner: empty cloud");
  if (candidates.cols() != boundary.n) throw BadShape("mc_polar_max_inner: size mismatch");

  // fold the maximum over cache-sized row blocks instead of materializing
  // the full samples-by-candidates product
  const Eigen::Index rows = boundary.points.rows();
  const Eigen::Index chunk = 512;
  Vector maxima =
      Vector::Constant(candidates.rows(), -std::numeric_limits<double>::infinity());
  Matrix buf;
  for (Eigen::Index start = 0; start < rows; start += chunk) {
    const Eigen::Index len = std::min(chunk, rows - start);
    buf.noalias() = boundary.points.middleRows(start, len) * candidates.transpose();
    maxima = maxima.cwiseMax(buf.colwise().maxCoeff().transpose());
  }
  return maxima;
}

std::vector<double> mc_projection_support(const AmbientEllipsoid& omega,
                                          const TransversePair& pair, PairSlot onto,
                                          const SampleCloud& directions,
                                          const SampleCloud& boundary) {
  const int n = omega.dof();
  if (boundary.n != 2 * n) throw BadShape("mc_projection_support: boundary cloud dimension");
  if (directions.n != n) throw BadShape("mc_projection_support: direction cloud dimension");

  // chart coordinates of Pi(z): c = T (S^{-1} z).head(n) on the first
  // plane, tail(n) on the second
  const Matrix sinv = pair.frame().inverse().mat();
  const Matrix t = chart_transfer(pair, onto);
  const Matrix pulled = boundary.points * sinv.transpose();  // count x 2n
  const Matrix coords = onto == PairSlot::First ? pulled.leftCols(n) : pulled.rightCols(n);
  const Matrix chart = coords * t.transpose();  // count x n

  std::vector<double> estimates(directions.count);
  for (std::size_t d = 0; d < directions.count; ++d) {
    const Vector u = directions.points.row(static_cast<Eigen::Index>(d)).transpose();
    estimates[d] = (chart * u).maxCoeff();
  }
  return estimates;
}

double wigner_quadrature(const GaussianState& psi, const PhaseVector& z, double half_width,
                         int points) {
  if (psi.dof() != 1 || z.dof() != 1) throw BadShape("wigner_quadrature: n = 1 only");
  if (points < 8) throw BadShape("wigner_quadrature: too few grid points");
  const double a = psi.a.mat()(0, 0);
  const double b = psi.b.mat()(0, 0);
  if (half_width < 6.0 / std::sqrt(a)) {
    throw GridWarning("wigner_quadrature: grid half-width below 6/sqrt(A)");
  }

  const double x = z.x(0);
  const double p = z.p(0);
  const double norm = std::pow(M_PI, -0.25) * std::pow(a, 0.25);
  const auto value_at = [&](double y) {
    const std::complex<double> expo =
        std::complex<double>(0.0, -p * y) -
        0.5 * std::complex<double>(a, b) * (x + 0.5 * y) * (x + 0.5 * y) -
        0.5 * std::complex<double>(a, -b) * (x - 0.5 * y) * (x - 0.5 * y);
    return (norm * norm * std::exp(expo)).real();
  };

  const double h = 2.0 * half_width / (points - 1);
  double sum = 0.5 * (value_at(-half_width) + value_at(half_width));
  for (int i = 1; i < points - 1; ++i) sum += value_at(-half_width + i * h);
  return sum * h / (2.0 * M_PI);
}

SpdMatrix random_spd(std::uint64_t seed, int n, double condition_cap) {
  if (n < 1) throw BadShape("random_spd: n must be >= 1");
  if (!(condition_cap >= 1.0)) throw ConstraintViolated("random_spd: cap must be >= 1");

  rng::Stream st(seed, 0x535044ull);  // "SPD"
  const double span = std::log(condition_cap);
  Vector eigs(n);
  for (int i = 0; i < n; ++i) eigs(i) = std::exp(st.uniform(-span, span));

  Matrix g(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) g(r, c) = st.normal();
  const Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < n; ++c) {
    if (r(c, c) < 0) q.col(c) = -q.col(c);
  }
  return SpdMatrix(symmetrized(q * eigs.asDiagonal() * q.transpose()));
}

}  // namespace sympolar::oracle
