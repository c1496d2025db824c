#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qpoly/algebra/matrix.hpp"

namespace qpoly::algebra {

/// Subspace of F_q^ambient, stored as its unique RREF basis (no zero rows).
/// Equality and hashing are structural on that basis.
class Subspace {
 public:
  Subspace() = default;

  static Subspace zero(FieldPtr field, int ambient);
  static Subspace full(FieldPtr field, int ambient);
  /// Row space of `rows`.
  static Subspace span(const Mat& rows);
  static Subspace from_rows(FieldPtr field, int ambient, const std::vector<std::vector<Elem>>& rows);
  /// Takes `basis` as already canonical; only cheap shape checks are done.
  static Subspace from_rref(Mat basis, std::vector<int> pivots);

  const FieldPtr& field() const { return basis_.field(); }
  int ambient() const { return ambient_; }
  int dim() const { return basis_.rows(); }
  const Mat& basis() const { return basis_; }
  const std::vector<int>& pivots() const { return pivots_; }
  bool is_zero() const { return dim() == 0; }
  bool is_full() const { return dim() == ambient_; }

  bool contains(std::span<const Elem> v) const;
  /// W <= this.
  bool contains(const Subspace& w) const;

  bool operator==(const Subspace& o) const { return ambient_ == o.ambient_ && basis_.data() == o.basis_.data(); }
  bool operator!=(const Subspace& o) const { return !(*this == o); }
  std::size_t hash() const;

  /// Rows joined by ','; digits are concatenated when q <= 10, otherwise
  /// space-separated element indices. The zero space prints as "0".
  std::string to_string() const;

 private:
  int ambient_ = 0;
  Mat basis_;
  std::vector<int> pivots_;
};

struct SubspaceHash {
  std::size_t operator()(const Subspace& s) const { return s.hash(); }
};

struct ElemVecHash {
  std::size_t operator()(const std::vector<Elem>& v) const;
};

void require_same_ambient(const Subspace& a, const Subspace& b);

Subspace sum(const Subspace& v, const Subspace& w);
Subspace intersect(const Subspace& v, const Subspace& w);
/// Row space of basis(V) * A, for A of shape ambient x k.
Subspace image(const Subspace& v, const Mat& a);

/// Symmetric nonsingular matrix defining the form <v|w> = v Q w^T.
class GramMatrix {
 public:
  /// Throws std::invalid_argument if Q is not square, symmetric and invertible.
  explicit GramMatrix(Mat q);
  static GramMatrix identity(FieldPtr field, int n);
  const Mat& matrix() const { return q_; }
  int size() const { return q_.rows(); }
  bool is_identity() const;

 private:
  Mat q_;
};

/// Standard dot-product orthogonal.
Subspace orthogonal(const Subspace& v);
Subspace orthogonal(const Subspace& v, const GramMatrix& q);

/// E/X coordinatised by the pivot-based complement: Y is spanned by the unit
/// vectors at the non-pivot columns of X.
struct QuotientData {
  Subspace x;
  Mat complement;  ///< (l - dim X) x l, rows form a basis of Y
  Mat projection;  ///< l x (l - dim X); coordinates of v + X are v * projection
  Mat section;     ///< (l - dim X) x l; equals `complement`, xi(u) = u * section
};

QuotientData quotient_data(const Subspace& x);

/// Rows spanning a complement of X chosen from unit vectors (non-pivot columns).
Mat pivot_complement(const Subspace& x);

}  // namespace qpoly::algebra
