#include "qpoly/qpm/minors.hpp"

#include <stdexcept>

namespace qpoly::qpm {

QPolymatroid restrict_with_basis(const QPolymatroid& m, const Mat& basis) {
  if (basis.cols() != m.ell()) throw std::invalid_argument("restriction basis has the wrong number of columns");
  if (algebra::rank(basis) != basis.rows()) throw std::invalid_argument("restriction basis rows are dependent");
  return QPolymatroid(
      m.field(), basis.rows(), [m, basis](const Subspace& v) { return m.rank(algebra::image(v, basis)); },
      "restriction of (" + m.provenance() + ") to a " + std::to_string(basis.rows()) + "-space");
}

QPolymatroid restrict_to(const QPolymatroid& m, const Subspace& x) {
  if (x.ambient() != m.ell()) throw std::invalid_argument("subspace ambient does not match the ground space");
  return restrict_with_basis(m, x.basis());
}

QPolymatroid delete_space(const QPolymatroid& m, const Subspace& x, const GramMatrix& q) {
  if (x.ambient() != m.ell()) throw std::invalid_argument("subspace ambient does not match the ground space");
  auto out = restrict_with_basis(m, algebra::orthogonal(x, q).basis());
  return QPolymatroid(
      out.field(), out.ell(), [out](const Subspace& v) { return out.rank(v); },
      "deletion of " + x.to_string() + " from (" + m.provenance() + ")");
}

QPolymatroid delete_space(const QPolymatroid& m, const Subspace& x) {
  return delete_space(m, x, GramMatrix::identity(m.field(), m.ell()));
}

QPolymatroid contract_with_complement(const QPolymatroid& m, const Subspace& x, const Mat& complement) {
  if (x.ambient() != m.ell()) throw std::invalid_argument("subspace ambient does not match the ground space");
  if (complement.cols() != m.ell() || complement.rows() != m.ell() - x.dim() ||
      algebra::rank(x.basis().vstack(complement)) != m.ell())
    throw std::invalid_argument("contraction needs a complement of X");
  QRat rx = m.rank(x);
  return QPolymatroid(
      m.field(), complement.rows(),
      [m, x, complement, rx](const Subspace& v) { return QRat(m.rank(algebra::sum(algebra::image(v, complement), x)) - rx); },
      "contraction of " + x.to_string() + " from (" + m.provenance() + ")");
}

QPolymatroid contract(const QPolymatroid& m, const Subspace& x) {
  return contract_with_complement(m, x, algebra::pivot_complement(x));
}

SplitFormDuality split_form_duality(const QPolymatroid& m, const Subspace& x, const Mat& y_basis) {
  const int ell = m.ell();
  const int dx = x.dim();
  if (y_basis.rows() != ell - dx || y_basis.cols() != ell) throw std::invalid_argument("Y basis has the wrong shape");
  Mat p = x.basis().vstack(y_basis);
  auto pinv = algebra::inverse(p);
  if (!pinv) throw std::invalid_argument("Y is not a complement of X");
  GramMatrix form(*pinv * pinv->transpose());
  auto del = restrict_with_basis(m, y_basis);
  auto lhs = dual(del);
  auto rhs = contract(dual(m, form), x);
  // Rows of Z in P-coordinates; the Y-part expresses Z modulo X in the basis of Y.
  Mat z = algebra::pivot_complement(x);
  Mat w = (z * *pinv).block(0, ell - dx, dx, ell - dx);
  return SplitFormDuality{std::move(form), std::move(lhs), std::move(rhs), std::move(w)};
}

}  // namespace qpoly::qpm
