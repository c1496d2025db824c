#pragma once

#include <istream>
#include <ostream>
#include <vector>

#include "qpoly/algebra/subspace.hpp"

namespace qpoly::rmcode {

using algebra::Elem;
using algebra::FieldPtr;
using algebra::Mat;
using algebra::Subspace;

/// F_q-linear subspace of F_q^{n x m}. The basis is the RREF of the k x (n*m)
/// row-major flattening, so equal codes compare equal. The zero code is
/// representable (shortenings produce it) but rejected by code_from_matrices.
class RankMetricCode {
 public:
  RankMetricCode() = default;
  /// Span of the rows of `flat` (each row a flattened n x m matrix).
  RankMetricCode(int n, int m, const Mat& flat);

  static RankMetricCode zero(FieldPtr field, int n, int m);
  static RankMetricCode full(FieldPtr field, int n, int m);

  const FieldPtr& field() const { return flat_.field(); }
  int n() const { return n_; }
  int m() const { return m_; }
  int dim() const { return flat_.rows(); }
  bool is_zero() const { return dim() == 0; }
  /// k x (n*m) canonical basis.
  const Mat& flat() const { return flat_; }
  Mat matrix(int i) const { return Mat::unflatten(field(), flat_.row(i), n_, m_); }
  std::vector<Mat> matrices() const;
  bool contains(const Mat& x) const;

  bool operator==(const RankMetricCode& o) const { return n_ == o.n_ && m_ == o.m_ && flat_ == o.flat_; }

 private:
  int n_ = 0;
  int m_ = 0;
  Mat flat_;
};

/// Canonical span of the given n x m matrices; throws std::invalid_argument if
/// the list is empty, shapes disagree, or the span is zero.
RankMetricCode code_from_matrices(const std::vector<Mat>& mats);

/// Minimum rank over nonzero codewords. GF(2) codes run a Gray-code walk over
/// packed rows. Throws BudgetExceeded when q^k > 2^24.
int rank_distance(const RankMetricCode& c);
bool is_mrd(const RankMetricCode& c);
/// Singleton bound max{m,n}(min{m,n} - d + 1).
int singleton_bound(int n, int m, int d);

/// Trace dual {N : tr(M N^T) = 0 for all M in C}.
RankMetricCode code_dual(const RankMetricCode& c);

/// C(V,c) = {M in C : colsp(M) <= V}, V <= F_q^n.
RankMetricCode shorten_col(const RankMetricCode& c, const Subspace& v);
/// C(W,r) = {M in C : rowsp(M) <= W}, W <= F_q^m.
RankMetricCode shorten_row(const RankMetricCode& c, const Subspace& w);
int shorten_col_dim(const RankMetricCode& c, const Subspace& v);
int shorten_row_dim(const RankMetricCode& c, const Subspace& w);

/// rank of the k x (dim V * m) matrix with rows vec(B_V M_i): equals
/// dim C - dim C(V^perp, c). The column q-PM value is this divided by m.
int column_rank_numerator(const RankMetricCode& c, const Mat& v_basis);

/// Pi(C,A,u): drop the first u rows of A*M for every codeword.
RankMetricCode puncture(const RankMetricCode& c, const Mat& a, int u);
/// Sigma(C,A,u): keep codewords of A*C whose first u rows vanish, then drop those rows.
RankMetricCode shorten_sigma(const RankMetricCode& c, const Mat& a, int u);

RankMetricCode code_transpose(const RankMetricCode& c);
/// {X M Y : M in C}.
RankMetricCode apply_equivalence(const RankMetricCode& c, const Mat& x, const Mat& y);
/// {X M^T Y : M in C}; requires n = m.
RankMetricCode apply_transposition_equivalence(const RankMetricCode& c, const Mat& x, const Mat& y);
/// {M D : M in C} for an m x m matrix D.
RankMetricCode right_multiply(const RankMetricCode& c, const Mat& d);
bool is_right_invariant(const RankMetricCode& c, const Mat& d);

/// Code file: "q n m k" then k matrices in the matrix text format, separated
/// by blank lines. Writing uses the canonical basis.
RankMetricCode read_code(std::istream& in);
void write_code(std::ostream& out, const RankMetricCode& c);

}  // namespace qpoly::rmcode
