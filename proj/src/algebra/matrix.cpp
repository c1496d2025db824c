#include "qpoly/algebra/matrix.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace qpoly::algebra {

Mat::Mat(FieldPtr field, int rows, int cols)
    : field_(std::move(field)), rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, 0) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimension");
}

Mat::Mat(FieldPtr field, int rows, int cols, std::vector<Elem> data)
    : field_(std::move(field)), rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != static_cast<std::size_t>(rows) * cols) throw std::invalid_argument("matrix data size mismatch");
  for (Elem x : data_)
    if (x >= field_->q()) throw std::out_of_range("matrix entry outside field");
}

Mat Mat::identity(FieldPtr field, int n) {
  Mat m(std::move(field), n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Mat Mat::from_rows(FieldPtr field, const std::vector<std::vector<Elem>>& rows, int cols) {
  int c = cols >= 0 ? cols : (rows.empty() ? 0 : static_cast<int>(rows.front().size()));
  std::vector<Elem> data;
  data.reserve(rows.size() * c);
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != c) throw std::invalid_argument("ragged matrix rows");
    data.insert(data.end(), r.begin(), r.end());
  }
  return Mat(std::move(field), static_cast<int>(rows.size()), c, std::move(data));
}

Mat Mat::transpose() const {
  Mat t(field_, cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Mat Mat::operator*(const Mat& rhs) const {
  if (cols_ != rhs.rows_) throw std::invalid_argument("matrix product shape mismatch");
  Mat out(field_, rows_, rhs.cols_);
  const Field& f = *field_;
  if (f.q() == 2) {
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        if (!(*this)(i, k)) continue;
        for (int j = 0; j < rhs.cols_; ++j) out(i, j) ^= rhs(k, j);
      }
    return out;
  }
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      Elem a = (*this)(i, k);
      if (!a) continue;
      for (int j = 0; j < rhs.cols_; ++j) out(i, j) = f.add(out(i, j), f.mul(a, rhs(k, j)));
    }
  return out;
}

Mat Mat::operator+(const Mat& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw std::invalid_argument("matrix sum shape mismatch");
  Mat out(field_, rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = field_->add(data_[i], rhs.data_[i]);
  return out;
}

Mat Mat::operator-(const Mat& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw std::invalid_argument("matrix difference shape mismatch");
  Mat out(field_, rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = field_->sub(data_[i], rhs.data_[i]);
  return out;
}

Mat Mat::scaled(Elem c) const {
  Mat out(field_, rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = field_->mul(c, data_[i]);
  return out;
}

Mat Mat::block(int r0, int nr, int c0, int nc) const {
  if (r0 < 0 || c0 < 0 || r0 + nr > rows_ || c0 + nc > cols_) throw std::out_of_range("matrix block out of range");
  Mat out(field_, nr, nc);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j) out(i, j) = (*this)(r0 + i, c0 + j);
  return out;
}

Mat Mat::vstack(const Mat& below) const {
  if (rows_ == 0 && cols_ == 0) return below;
  if (below.cols_ != cols_) throw std::invalid_argument("vstack column mismatch");
  Mat out(field_, rows_ + below.rows_, cols_);
  std::copy(data_.begin(), data_.end(), out.data_.begin());
  std::copy(below.data_.begin(), below.data_.end(), out.data_.begin() + static_cast<std::ptrdiff_t>(data_.size()));
  return out;
}

Mat Mat::hstack(const Mat& right) const {
  if (right.rows_ != rows_) throw std::invalid_argument("hstack row mismatch");
  Mat out(field_, rows_, cols_ + right.cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j);
    for (int j = 0; j < right.cols_; ++j) out(i, cols_ + j) = right(i, j);
  }
  return out;
}

Mat Mat::select_rows(std::span<const int> idx) const {
  Mat out(field_, static_cast<int>(idx.size()), cols_);
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (int j = 0; j < cols_; ++j) out(static_cast<int>(i), j) = (*this)(idx[i], j);
  return out;
}

Mat Mat::select_cols(std::span<const int> idx) const {
  Mat out(field_, rows_, static_cast<int>(idx.size()));
  for (int i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) out(i, static_cast<int>(j)) = (*this)(i, idx[j]);
  return out;
}

Mat Mat::flatten() const { return Mat(field_, 1, rows_ * cols_, data_); }

Mat Mat::unflatten(const FieldPtr& field, std::span<const Elem> v, int rows, int cols) {
  if (v.size() != static_cast<std::size_t>(rows) * cols) throw std::invalid_argument("unflatten size mismatch");
  return Mat(field, rows, cols, std::vector<Elem>(v.begin(), v.end()));
}

bool Mat::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](Elem x) { return x == 0; });
}

bool Mat::operator==(const Mat& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_ || data_ != o.data_) return false;
  if (!field_ || !o.field_) return field_ == o.field_;
  return field_->same_as(*o.field_);
}

namespace {

Rref rref_gf2(const Mat& m) {
  const int rows = m.rows();
  const int cols = m.cols();
  const int words = (cols + 63) / 64;
  std::vector<std::uint64_t> bits(static_cast<std::size_t>(rows) * words, 0);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (m(i, j)) bits[static_cast<std::size_t>(i) * words + j / 64] |= std::uint64_t{1} << (j % 64);
  auto row_ptr = [&](int r) { return bits.data() + static_cast<std::size_t>(r) * words; };

  Rref out;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    const int w = c / 64;
    const std::uint64_t mask = std::uint64_t{1} << (c % 64);
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (row_ptr(i)[w] & mask) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r)
      for (int k = 0; k < words; ++k) std::swap(row_ptr(piv)[k], row_ptr(r)[k]);
    for (int i = 0; i < rows; ++i)
      if (i != r && (row_ptr(i)[w] & mask))
        for (int k = 0; k < words; ++k) row_ptr(i)[k] ^= row_ptr(r)[k];
    out.pivots.push_back(c);
    ++r;
  }
  out.rank = r;
  out.reduced = Mat(m.field(), r, cols);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < cols; ++j) out.reduced(i, j) = (row_ptr(i)[j / 64] >> (j % 64)) & 1U;
  return out;
}

}  // namespace

Rref rref(const Mat& m) {
  if (!m.field()) return {};
  if (m.field()->q() == 2) return rref_gf2(m);
  const Field& f = *m.field();
  Mat a = m;
  const int rows = a.rows();
  const int cols = a.cols();
  Rref out;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (a(i, c)) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r)
      for (int j = 0; j < cols; ++j) std::swap(a(piv, j), a(r, j));
    const Elem inv = f.inv(a(r, c));
    for (int j = c; j < cols; ++j) a(r, j) = f.mul(a(r, j), inv);
    for (int i = 0; i < rows; ++i) {
      if (i == r) continue;
      const Elem factor = a(i, c);
      if (!factor) continue;
      const Elem nf = f.neg(factor);
      for (int j = c; j < cols; ++j) a(i, j) = f.add(a(i, j), f.mul(nf, a(r, j)));
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.rank = r;
  out.reduced = a.block(0, r, 0, cols);
  return out;
}

int rank(const Mat& m) { return rref(m).rank; }

int rank_gf2_words(std::vector<std::uint64_t> rows) {
  int r = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::uint64_t v = rows[i];
    if (!v) continue;
    const std::uint64_t low = v & (~v + 1);
    ++r;
    for (std::size_t j = i + 1; j < rows.size(); ++j)
      if (rows[j] & low) rows[j] ^= v;
  }
  return r;
}

Mat kernel_rows(const Mat& m) {
  const FieldPtr& fp = m.field();
  const Field& f = *fp;
  const int n = m.cols();
  Rref rr = rref(m);
  std::vector<bool> is_pivot(n, false);
  for (int c : rr.pivots) is_pivot[c] = true;
  std::vector<int> free_cols;
  for (int c = 0; c < n; ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  Mat k(fp, static_cast<int>(free_cols.size()), n);
  for (std::size_t t = 0; t < free_cols.size(); ++t) {
    const int fc = free_cols[t];
    k(static_cast<int>(t), fc) = 1;
    for (int i = 0; i < rr.rank; ++i) k(static_cast<int>(t), rr.pivots[i]) = f.neg(rr.reduced(i, fc));
  }
  return rref(k).reduced;
}

std::optional<Mat> inverse(const Mat& m) {
  if (m.rows() != m.cols()) return std::nullopt;
  const int n = m.rows();
  Rref rr = rref(m.hstack(Mat::identity(m.field(), n)));
  if (rr.rank < n || rr.pivots[n - 1] != n - 1) return std::nullopt;
  return rr.reduced.block(0, n, n, n);
}

bool is_invertible(const Mat& m) { return m.rows() == m.cols() && rank(m) == m.rows(); }

Mat companion_matrix(const Field& ext) {
  if (ext.e() < 2) throw std::invalid_argument("companion matrix needs an extension of degree >= 2");
  const int e = ext.e();
  FieldPtr prime = Field::make(ext.p(), 1);
  Mat d(prime, e, e);
  for (int i = 0; i + 1 < e; ++i) d(i, i + 1) = 1;
  // f = x^e - sum f_i x^i, and the stored modulus is x^e + sum c_i x^i, so f_i = -c_i.
  for (int j = 0; j < e; ++j) d(e - 1, j) = prime->neg(static_cast<Elem>(ext.modulus()[j]));
  return d;
}

}  // namespace qpoly::algebra
