#include "qpoly/rmcode/code.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qpoly/algebra/budget.hpp"
#include "qpoly/algebra/errors.hpp"
#include "qpoly/algebra/textio.hpp"

namespace qpoly::rmcode {

using algebra::Field;
using algebra::rank;
using algebra::rref;

RankMetricCode::RankMetricCode(int n, int m, const Mat& flat) : n_(n), m_(m) {
  if (flat.cols() != n * m) throw std::invalid_argument("flattened basis has wrong width");
  flat_ = rref(flat).reduced;
}

RankMetricCode RankMetricCode::zero(FieldPtr field, int n, int m) { return RankMetricCode(n, m, Mat(std::move(field), 0, n * m)); }

RankMetricCode RankMetricCode::full(FieldPtr field, int n, int m) {
  return RankMetricCode(n, m, Mat::identity(std::move(field), n * m));
}

std::vector<Mat> RankMetricCode::matrices() const {
  std::vector<Mat> out;
  for (int i = 0; i < dim(); ++i) out.push_back(matrix(i));
  return out;
}

bool RankMetricCode::contains(const Mat& x) const {
  if (x.rows() != n_ || x.cols() != m_) return false;
  return rank(flat_.vstack(x.flatten())) == dim();
}

RankMetricCode code_from_matrices(const std::vector<Mat>& mats) {
  if (mats.empty()) throw std::invalid_argument("no generator matrices");
  const int n = mats.front().rows();
  const int m = mats.front().cols();
  Mat flat(mats.front().field(), 0, n * m);
  for (const Mat& x : mats) {
    if (x.rows() != n || x.cols() != m) throw std::invalid_argument("generator matrices differ in shape");
    if (!x.field()->same_as(*mats.front().field())) throw std::invalid_argument("generator matrices differ in field");
    flat = flat.vstack(x.flatten());
  }
  RankMetricCode c(n, m, flat);
  if (c.is_zero()) throw std::invalid_argument("generators span the zero code");
  return c;
}

int singleton_bound(int n, int m, int d) { return std::max(m, n) * (std::min(m, n) - d + 1); }

namespace {

// Codeword i packed as n words of m bits (GF(2), m <= 64).
std::vector<std::uint64_t> pack_gf2(const RankMetricCode& c) {
  std::vector<std::uint64_t> out(static_cast<std::size_t>(c.dim()) * c.n(), 0);
  for (int i = 0; i < c.dim(); ++i)
    for (int r = 0; r < c.n(); ++r)
      for (int j = 0; j < c.m(); ++j)
        if (c.flat()(i, r * c.m() + j)) out[static_cast<std::size_t>(i) * c.n() + r] |= std::uint64_t{1} << j;
  return out;
}

int rank_distance_gf2(const RankMetricCode& c) {
  const int k = c.dim();
  const int n = c.n();
  const auto packed = pack_gf2(c);
  const std::uint64_t total = std::uint64_t{1} << k;
  std::atomic<int> best{std::min(n, c.m())};
  algebra::parallel_for(static_cast<std::size_t>(total - 1), [&](std::size_t b, std::size_t e) {
    // Walk Gray codes g(t) for t in [b+1, e+1).
    std::vector<std::uint64_t> cur(n, 0);
    std::uint64_t g = (b + 1) ^ ((b + 1) >> 1);
    for (int i = 0; i < k; ++i)
      if ((g >> i) & 1U)
        for (int r = 0; r < n; ++r) cur[r] ^= packed[static_cast<std::size_t>(i) * n + r];
    int local = best.load();
    for (std::uint64_t t = b + 1;; ++t) {
      local = std::min(local, algebra::rank_gf2_words(cur));
      if (local == 1 || t + 1 >= e + 1) break;
      const int bit = std::countr_zero(t + 1);
      for (int r = 0; r < n; ++r) cur[r] ^= packed[static_cast<std::size_t>(bit) * n + r];
    }
    int prev = best.load();
    while (local < prev && !best.compare_exchange_weak(prev, local)) {
    }
  });
  return best.load();
}

}  // namespace

int rank_distance(const RankMetricCode& c) {
  if (c.is_zero()) throw std::invalid_argument("rank distance of the zero code is undefined");
  const Field& f = *c.field();
  double bits = c.dim() * std::log2(static_cast<double>(f.q()));
  if (bits > 24 + 1e-9) throw BudgetExceeded("codeword enumeration exceeds 2^24 (q^k)");
  if (f.q() == 2 && c.m() <= 64) return rank_distance_gf2(c);
  const int k = c.dim();
  const Elem q = f.q();
  std::vector<Elem> coef(k, 0);
  int best = std::min(c.n(), c.m());
  const auto mats = c.matrices();
  while (true) {
    int t = k - 1;
    while (t >= 0 && ++coef[t] == q) coef[t--] = 0;
    if (t < 0) break;
    // One representative per projective point: leading coefficient 1.
    int lead = 0;
    while (coef[lead] == 0) ++lead;
    if (coef[lead] != 1) continue;
    Mat w(c.field(), c.n(), c.m());
    for (int i = lead; i < k; ++i)
      if (coef[i]) w = w + mats[i].scaled(coef[i]);
    best = std::min(best, rank(w));
    if (best == 1) break;
  }
  return best;
}

bool is_mrd(const RankMetricCode& c) { return c.dim() == singleton_bound(c.n(), c.m(), rank_distance(c)); }

RankMetricCode code_dual(const RankMetricCode& c) {
  if (c.is_zero()) return RankMetricCode::full(c.field(), c.n(), c.m());
  return RankMetricCode(c.n(), c.m(), algebra::kernel_rows(c.flat()));
}

namespace {

// Rows vec(L * M_i) for each basis matrix M_i (L is t x n).
Mat left_images(const RankMetricCode& c, const Mat& l) {
  const int t = l.rows();
  Mat out(c.field(), c.dim(), t * c.m());
  for (int i = 0; i < c.dim(); ++i) {
    Mat prod = l * c.matrix(i);
    for (int r = 0; r < t; ++r)
      for (int j = 0; j < c.m(); ++j) out(i, r * c.m() + j) = prod(r, j);
  }
  return out;
}

// Rows vec(M_i * R) for each basis matrix M_i (R is m x t).
Mat right_images(const RankMetricCode& c, const Mat& rm) {
  const int t = rm.cols();
  Mat out(c.field(), c.dim(), c.n() * t);
  for (int i = 0; i < c.dim(); ++i) {
    Mat prod = c.matrix(i) * rm;
    for (int r = 0; r < c.n(); ++r)
      for (int j = 0; j < t; ++j) out(i, r * t + j) = prod(r, j);
  }
  return out;
}

// Subcode {sum lambda_i M_i : lambda * images = 0}.
RankMetricCode kernel_subcode(const RankMetricCode& c, const Mat& images) {
  Mat lambdas = algebra::kernel_rows(images.transpose());
  if (lambdas.rows() == 0) return RankMetricCode::zero(c.field(), c.n(), c.m());
  return RankMetricCode(c.n(), c.m(), lambdas * c.flat());
}

}  // namespace

RankMetricCode shorten_col(const RankMetricCode& c, const Subspace& v) {
  if (v.ambient() != c.n()) throw std::invalid_argument("column shortening needs V <= F_q^n");
  Subspace h = algebra::orthogonal(v);
  if (h.is_zero() || c.is_zero()) return c;
  return kernel_subcode(c, left_images(c, h.basis()));
}

RankMetricCode shorten_row(const RankMetricCode& c, const Subspace& w) {
  if (w.ambient() != c.m()) throw std::invalid_argument("row shortening needs W <= F_q^m");
  Subspace h = algebra::orthogonal(w);
  if (h.is_zero() || c.is_zero()) return c;
  return kernel_subcode(c, right_images(c, h.basis().transpose()));
}

int shorten_col_dim(const RankMetricCode& c, const Subspace& v) {
  if (v.ambient() != c.n()) throw std::invalid_argument("column shortening needs V <= F_q^n");
  Subspace h = algebra::orthogonal(v);
  if (h.is_zero() || c.is_zero()) return c.dim();
  return c.dim() - rank(left_images(c, h.basis()));
}

int shorten_row_dim(const RankMetricCode& c, const Subspace& w) {
  if (w.ambient() != c.m()) throw std::invalid_argument("row shortening needs W <= F_q^m");
  Subspace h = algebra::orthogonal(w);
  if (h.is_zero() || c.is_zero()) return c.dim();
  return c.dim() - rank(right_images(c, h.basis().transpose()));
}

int column_rank_numerator(const RankMetricCode& c, const Mat& v_basis) {
  if (v_basis.rows() == 0 || c.is_zero()) return 0;
  return rank(left_images(c, v_basis));
}

RankMetricCode puncture(const RankMetricCode& c, const Mat& a, int u) {
  if (a.rows() != c.n() || !algebra::is_invertible(a)) throw std::invalid_argument("puncture needs an invertible n x n matrix");
  if (u < 0 || u >= c.n()) throw std::invalid_argument("puncture needs 0 <= u < n");
  const int rows = c.n() - u;
  Mat flat(c.field(), c.dim(), rows * c.m());
  for (int i = 0; i < c.dim(); ++i) {
    Mat prod = a * c.matrix(i);
    for (int r = 0; r < rows; ++r)
      for (int j = 0; j < c.m(); ++j) flat(i, r * c.m() + j) = prod(u + r, j);
  }
  return RankMetricCode(rows, c.m(), flat);
}

RankMetricCode shorten_sigma(const RankMetricCode& c, const Mat& a, int u) {
  if (a.rows() != c.n() || !algebra::is_invertible(a)) throw std::invalid_argument("shortening needs an invertible n x n matrix");
  if (u < 0 || u >= c.n()) throw std::invalid_argument("shortening needs 0 <= u < n");
  const int rows = c.n() - u;
  if (c.is_zero()) return RankMetricCode::zero(c.field(), rows, c.m());
  Mat top = a.block(0, u, 0, c.n());
  Mat lambdas = u ? algebra::kernel_rows(left_images(c, top).transpose()) : Mat::identity(c.field(), c.dim());
  if (lambdas.rows() == 0) return RankMetricCode::zero(c.field(), rows, c.m());
  Mat sub = lambdas * c.flat();
  Mat bottom = a.block(u, rows, 0, c.n());
  Mat flat(c.field(), sub.rows(), rows * c.m());
  for (int i = 0; i < sub.rows(); ++i) {
    Mat prod = bottom * Mat::unflatten(c.field(), sub.row(i), c.n(), c.m());
    for (int r = 0; r < rows; ++r)
      for (int j = 0; j < c.m(); ++j) flat(i, r * c.m() + j) = prod(r, j);
  }
  return RankMetricCode(rows, c.m(), flat);
}

RankMetricCode code_transpose(const RankMetricCode& c) {
  Mat flat(c.field(), c.dim(), c.n() * c.m());
  for (int i = 0; i < c.dim(); ++i) {
    Mat t = c.matrix(i).transpose();
    for (int r = 0; r < c.m(); ++r)
      for (int j = 0; j < c.n(); ++j) flat(i, r * c.n() + j) = t(r, j);
  }
  return RankMetricCode(c.m(), c.n(), flat);
}

RankMetricCode apply_equivalence(const RankMetricCode& c, const Mat& x, const Mat& y) {
  if (x.rows() != c.n() || y.rows() != c.m() || !algebra::is_invertible(x) || !algebra::is_invertible(y))
    throw std::invalid_argument("equivalence needs X in GL_n and Y in GL_m");
  Mat flat(c.field(), c.dim(), c.n() * c.m());
  for (int i = 0; i < c.dim(); ++i) {
    Mat prod = x * c.matrix(i) * y;
    for (int r = 0; r < c.n(); ++r)
      for (int j = 0; j < c.m(); ++j) flat(i, r * c.m() + j) = prod(r, j);
  }
  return RankMetricCode(c.n(), c.m(), flat);
}

RankMetricCode apply_transposition_equivalence(const RankMetricCode& c, const Mat& x, const Mat& y) {
  if (c.n() != c.m()) throw std::invalid_argument("transposition equivalence needs square matrices");
  return apply_equivalence(code_transpose(c), x, y);
}

RankMetricCode right_multiply(const RankMetricCode& c, const Mat& d) {
  if (d.rows() != c.m()) throw std::invalid_argument("right multiplier has wrong size");
  Mat flat(c.field(), c.dim(), c.n() * d.cols());
  for (int i = 0; i < c.dim(); ++i) {
    Mat prod = c.matrix(i) * d;
    for (int r = 0; r < c.n(); ++r)
      for (int j = 0; j < d.cols(); ++j) flat(i, r * d.cols() + j) = prod(r, j);
  }
  return RankMetricCode(c.n(), d.cols(), flat);
}

bool is_right_invariant(const RankMetricCode& c, const Mat& d) {
  RankMetricCode img = right_multiply(c, d);
  for (int i = 0; i < img.dim(); ++i)
    if (!c.contains(img.matrix(i))) return false;
  return true;
}

RankMetricCode read_code(std::istream& in) {
  algebra::LineReader lr(in);
  std::string line;
  if (!lr.next_nonblank(line)) throw ParseError("empty code file", 1);
  std::stringstream ss(line);
  std::string q_text;
  int n = -1;
  int m = -1;
  int k = -1;
  if (!(ss >> q_text >> n >> m >> k) || n < 1 || m < 1 || k < 0)
    throw ParseError("code header must be 'q n m k'", lr.line_no());
  std::string extra;
  if (ss >> extra) throw ParseError("trailing token in code header", lr.line_no());
  const int header_line = lr.line_no();
  FieldPtr field = algebra::parse_field(q_text);
  std::vector<Mat> mats;
  for (int i = 0; i < k; ++i) {
    Mat x = algebra::read_matrix(lr);
    if (x.rows() != n || x.cols() != m)
      throw ParseError("matrix " + std::to_string(i + 1) + " is not " + std::to_string(n) + "x" + std::to_string(m), lr.line_no());
    if (x.field()->q() != field->q()) throw ParseError("matrix field disagrees with code header", lr.line_no());
    mats.push_back(std::move(x));
  }
  if (lr.next_nonblank(line)) throw ParseError("unexpected content after " + std::to_string(k) + " matrices", lr.line_no());
  if (mats.empty()) throw ParseError("code file lists no matrices", header_line);
  try {
    return code_from_matrices(mats);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), header_line);
  }
}

void write_code(std::ostream& out, const RankMetricCode& c) {
  out << c.field()->q() << ' ' << c.n() << ' ' << c.m() << ' ' << c.dim() << '\n';
  for (int i = 0; i < c.dim(); ++i) {
    out << '\n';
    algebra::write_matrix(out, c.matrix(i));
  }
}

}  // namespace qpoly::rmcode
