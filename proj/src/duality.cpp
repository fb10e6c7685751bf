#include "sympolar/duality.hpp"

#include <cmath>
#include <sstream>

namespace sympolar {

const char* to_string(DualStatus s) {
  switch (s) {
    case DualStatus::NotDual:
      return "NotDual";
    case DualStatus::Dual:
      return "Dual";
    case DualStatus::ExactDual:
      return "ExactDual";
  }
  return "?";
}

DualPairVerdict dual_pair_verdict(const SpdMatrix& a, const SpdMatrix& b, double tolerance) {
  if (a.dim() != b.dim()) throw BadShape("dual_pair_verdict: dimension mismatch");
  const int n = a.dim();
  const Matrix binv = spd_inverse(b);
  const double margin = psd_margin(SymMatrix(symmetrized(binv - a.mat())));
  const double residual = (a.mat() * b.mat() - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();

  // Conformal normalization: thresholds act on forms scaled to trace n.
  const double scale = n / a.mat().trace();
  DualStatus status = DualStatus::NotDual;
  if (residual <= tolerance) {
    status = DualStatus::ExactDual;
  } else if (scale * margin >= -tolerance) {
    status = DualStatus::Dual;
  }
  return {status, margin, residual};
}

PlaneEllipsoid lagrangian_polar_dual(const PlaneEllipsoid& x, const TransversePair& pair) {
  const SpdMatrix a = coordinate_form(x, pair, PairSlot::First);
  const Matrix dual = spd_inverse(a);
  const Matrix t = chart_transfer(pair, PairSlot::Second);
  const Matrix tinv = t.partialPivLu().inverse();
  return {pair.second(), SpdMatrix(symmetrized(tinv.transpose() * dual * tinv))};
}

DualPairVerdict dual_pair_verdict(const PlaneEllipsoid& x, const PlaneEllipsoid& y,
                                  const TransversePair& pair, double tolerance) {
  const SpdMatrix a = coordinate_form(x, pair, PairSlot::First);
  const SpdMatrix b = coordinate_form(y, pair, PairSlot::Second);
  return dual_pair_verdict(a, b, tolerance);
}

Thm1Result thm1_check(const AmbientEllipsoid& omega, const TransversePair& pair,
                      double tolerance) {
  const double cap = capacity(omega);
  if (cap < M_PI - tolerance) {
    std::ostringstream os;
    os << "thm1_check: capacity " << cap << " is below pi; no symplectic unit ball fits";
    throw HypothesisNotMet(os.str());
  }

  // both projections in pair coordinates: pull back once, Schur twice
  const Matrix& s = pair.frame().mat();
  const SpdMatrix pulled(symmetrized(s.transpose() * omega.form().mat() * s));
  const BlockSplit split = BlockSplit::of(pulled.sym());
  const SpdMatrix a{schur_complement(split, Eliminate::PP)};
  const SpdMatrix b{schur_complement(split, Eliminate::XX)};
  const DualPairVerdict verdict = dual_pair_verdict(a, b, tolerance);

  // Inclusion (Pi_l Omega)^o into Pi_l' Omega reads A^{-1} >= B on forms.
  const Matrix dual = spd_inverse(a);
  const double margin = psd_margin(SymMatrix(symmetrized(dual - b.mat())));
  const double gap = (dual - b.mat()).cwiseAbs().maxCoeff();
  const double scale = std::max(dual.cwiseAbs().maxCoeff(), b.mat().cwiseAbs().maxCoeff());
  return {verdict.status, margin, gap / scale, cap};
}

AmbientEllipsoid reconstruct_ball(const PlaneEllipsoid& x, const TransversePair& pair) {
  return john_of_dual_product(x, pair);
}

double product_capacity(const SpdMatrix& x_form, const SpdMatrix& p_form) {
  if (x_form.dim() != p_form.dim()) throw BadShape("product_capacity: dimension mismatch");
  const Matrix half = spd_roots(x_form).sqrt.mat();
  const SymMatrix w(symmetrized(half * p_form.mat() * half));
  const EigenDecomposition eig = sym_eig(w);
  const double top = eig.values(eig.values.size() - 1);
  return 4.0 / std::sqrt(top);
}

}  // namespace sympolar
