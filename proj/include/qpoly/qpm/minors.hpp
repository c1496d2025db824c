#pragma once

#include "qpoly/qpm/qpolymatroid.hpp"

namespace qpoly::qpm {

/// Restriction to rowsp(basis), coordinatised by the rows of `basis`:
/// rho'(V) = rho(rowsp(B_V * basis)).
QPolymatroid restrict_with_basis(const QPolymatroid& m, const Mat& basis);
/// Restriction to X using its RREF basis.
QPolymatroid restrict_to(const QPolymatroid& m, const Subspace& x);
/// Restriction to X^perp under the form `q`.
QPolymatroid delete_space(const QPolymatroid& m, const Subspace& x, const GramMatrix& q);
QPolymatroid delete_space(const QPolymatroid& m, const Subspace& x);

/// E/X coordinatised by the rows of `complement` (a complement of X):
/// rho'(V) = rho(rowsp(B_V * complement) + X) - rho(X).
QPolymatroid contract_with_complement(const QPolymatroid& m, const Subspace& x, const Mat& complement);
/// As above with the pivot complement of X.
QPolymatroid contract(const QPolymatroid& m, const Subspace& x);

/// Dual-minor relation for the split form. With P = [B_X; B_Y] for a
/// complement Y of X, the form with Gram matrix P^{-1} P^{-T} restricts to the
/// identity on both summands and makes X^perp = Y.
struct SplitFormDuality {
  GramMatrix form;
  /// Dual (identity form) of the restriction to Y in the coordinates of y_basis.
  QPolymatroid dual_of_deletion;
  /// Contraction of X from the dual under `form`, in pivot-complement coordinates.
  QPolymatroid contraction_of_dual;
  /// Maps contraction coordinates to deletion coordinates:
  /// rho_{dual_of_deletion}(V W) = rho_{contraction_of_dual}(V).
  Mat witness;
};
SplitFormDuality split_form_duality(const QPolymatroid& m, const Subspace& x, const Mat& y_basis);

}  // namespace qpoly::qpm
