#include "qpoly/algebra/subspace.hpp"

#include <sstream>
#include <stdexcept>

namespace qpoly::algebra {

Subspace Subspace::zero(FieldPtr field, int ambient) { return from_rref(Mat(std::move(field), 0, ambient), {}); }

Subspace Subspace::full(FieldPtr field, int ambient) {
  std::vector<int> piv(ambient);
  for (int i = 0; i < ambient; ++i) piv[i] = i;
  return from_rref(Mat::identity(std::move(field), ambient), std::move(piv));
}

Subspace Subspace::span(const Mat& rows) {
  Rref r = rref(rows);
  return from_rref(std::move(r.reduced), std::move(r.pivots));
}

Subspace Subspace::from_rows(FieldPtr field, int ambient, const std::vector<std::vector<Elem>>& rows) {
  if (rows.empty()) return zero(std::move(field), ambient);
  return span(Mat::from_rows(std::move(field), rows, ambient));
}

Subspace Subspace::from_rref(Mat basis, std::vector<int> pivots) {
  if (static_cast<int>(pivots.size()) != basis.rows()) throw std::invalid_argument("pivot count does not match basis");
  Subspace s;
  s.ambient_ = basis.cols();
  s.basis_ = std::move(basis);
  s.pivots_ = std::move(pivots);
  return s;
}

bool Subspace::contains(std::span<const Elem> v) const {
  if (static_cast<int>(v.size()) != ambient_) throw std::invalid_argument("vector length does not match ambient");
  const Field& f = *field();
  std::vector<Elem> w(v.begin(), v.end());
  for (int i = 0; i < dim(); ++i) {
    const Elem c = w[pivots_[i]];
    if (!c) continue;
    const Elem nc = f.neg(c);
    auto row = basis_.row(i);
    for (int j = pivots_[i]; j < ambient_; ++j)
      if (row[j]) w[j] = f.add(w[j], f.mul(nc, row[j]));
  }
  for (Elem x : w)
    if (x) return false;
  return true;
}

bool Subspace::contains(const Subspace& w) const {
  require_same_ambient(*this, w);
  if (w.dim() > dim()) return false;
  for (int i = 0; i < w.dim(); ++i)
    if (!contains(w.basis().row(i))) return false;
  return true;
}

std::size_t ElemVecHash::operator()(const std::vector<Elem>& v) const {
  std::size_t h = 0xcbf29ce484222325ULL ^ v.size();
  for (Elem x : v) {
    h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

std::size_t Subspace::hash() const { return ElemVecHash{}(basis_.data()) ^ (static_cast<std::size_t>(ambient_) << 48); }

std::string Subspace::to_string() const {
  if (dim() == 0) return "0";
  const bool digits = field()->q() <= 10;
  std::ostringstream os;
  for (int i = 0; i < dim(); ++i) {
    if (i) os << ',';
    for (int j = 0; j < ambient_; ++j) {
      if (!digits && j) os << ' ';
      os << basis_(i, j);
    }
  }
  return os.str();
}

void require_same_ambient(const Subspace& a, const Subspace& b) {
  if (a.ambient() != b.ambient()) throw std::invalid_argument("subspaces live in different ambient spaces");
}

Subspace sum(const Subspace& v, const Subspace& w) {
  require_same_ambient(v, w);
  if (v.is_zero()) return w;
  if (w.is_zero()) return v;
  return Subspace::span(v.basis().vstack(w.basis()));
}

Subspace intersect(const Subspace& v, const Subspace& w) {
  require_same_ambient(v, w);
  if (v.is_zero() || w.is_full()) return v;
  if (w.is_zero() || v.is_full()) return w;
  // V ∩ W = (V^⊥ + W^⊥)^⊥ for the (nondegenerate) dot product.
  return orthogonal(sum(orthogonal(v), orthogonal(w)));
}

Subspace image(const Subspace& v, const Mat& a) {
  if (a.rows() != v.ambient()) throw std::invalid_argument("image: matrix rows must equal ambient dimension");
  if (v.is_zero()) return Subspace::zero(v.field(), a.cols());
  return Subspace::span(v.basis() * a);
}

GramMatrix::GramMatrix(Mat q) : q_(std::move(q)) {
  if (q_.rows() != q_.cols()) throw std::invalid_argument("Gram matrix must be square");
  if (!(q_.transpose() == q_)) throw std::invalid_argument("Gram matrix must be symmetric");
  if (!is_invertible(q_)) throw std::invalid_argument("Gram matrix must be nonsingular");
}

GramMatrix GramMatrix::identity(FieldPtr field, int n) { return GramMatrix(Mat::identity(std::move(field), n)); }

bool GramMatrix::is_identity() const { return q_ == Mat::identity(q_.field(), q_.rows()); }

Subspace orthogonal(const Subspace& v) {
  if (v.is_zero()) return Subspace::full(v.field(), v.ambient());
  Mat k = kernel_rows(v.basis());
  if (k.rows() == 0) return Subspace::zero(v.field(), v.ambient());
  return Subspace::span(k);
}

Subspace orthogonal(const Subspace& v, const GramMatrix& q) {
  if (q.size() != v.ambient()) throw std::invalid_argument("Gram matrix size does not match ambient");
  if (v.is_zero()) return Subspace::full(v.field(), v.ambient());
  Mat k = kernel_rows(v.basis() * q.matrix());
  if (k.rows() == 0) return Subspace::zero(v.field(), v.ambient());
  return Subspace::span(k);
}

Mat pivot_complement(const Subspace& x) {
  const int l = x.ambient();
  std::vector<bool> piv(l, false);
  for (int p : x.pivots()) piv[p] = true;
  Mat y(x.field(), l - x.dim(), l);
  int r = 0;
  for (int j = 0; j < l; ++j)
    if (!piv[j]) y(r++, j) = 1;
  return y;
}

QuotientData quotient_data(const Subspace& x) {
  const int l = x.ambient();
  const Field& f = *x.field();
  QuotientData qd;
  qd.x = x;
  qd.complement = pivot_complement(x);
  qd.section = qd.complement;
  std::vector<int> coord(l, -1);
  int t = 0;
  std::vector<bool> piv(l, false);
  for (int p : x.pivots()) piv[p] = true;
  for (int j = 0; j < l; ++j)
    if (!piv[j]) coord[j] = t++;
  qd.projection = Mat(x.field(), l, l - x.dim());
  for (int j = 0; j < l; ++j)
    if (coord[j] >= 0) qd.projection(j, coord[j]) = 1;
  // e_{p_i} is congruent to e_{p_i} - x_i, which is supported on non-pivot columns.
  for (int i = 0; i < x.dim(); ++i) {
    const int p = x.pivots()[i];
    for (int j = 0; j < l; ++j)
      if (coord[j] >= 0 && x.basis()(i, j)) qd.projection(p, coord[j]) = f.neg(x.basis()(i, j));
  }
  return qd;
}

}  // namespace qpoly::algebra
