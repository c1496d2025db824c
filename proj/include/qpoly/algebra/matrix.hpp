#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qpoly/algebra/field.hpp"

namespace qpoly::algebra {

/// Dense matrix over a finite field, row-major. Vectors are 1-row matrices or
/// plain spans of Elem; subspaces are always row spaces.
class Mat {
 public:
  Mat() = default;
  Mat(FieldPtr field, int rows, int cols);
  Mat(FieldPtr field, int rows, int cols, std::vector<Elem> data);

  static Mat identity(FieldPtr field, int n);
  static Mat from_rows(FieldPtr field, const std::vector<std::vector<Elem>>& rows, int cols = -1);

  const FieldPtr& field() const { return field_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Elem operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  Elem& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  std::span<const Elem> row(int r) const { return {data_.data() + static_cast<std::size_t>(r) * cols_, static_cast<std::size_t>(cols_)}; }
  std::span<Elem> row(int r) { return {data_.data() + static_cast<std::size_t>(r) * cols_, static_cast<std::size_t>(cols_)}; }
  const std::vector<Elem>& data() const { return data_; }

  Mat transpose() const;
  Mat operator*(const Mat& rhs) const;
  Mat operator+(const Mat& rhs) const;
  Mat operator-(const Mat& rhs) const;
  Mat scaled(Elem c) const;

  /// Rows [r0, r0+nr) and columns [c0, c0+nc).
  Mat block(int r0, int nr, int c0, int nc) const;
  Mat vstack(const Mat& below) const;
  Mat hstack(const Mat& right) const;
  Mat select_rows(std::span<const int> idx) const;
  Mat select_cols(std::span<const int> idx) const;

  /// Row-major flattening into a 1 x (rows*cols) matrix, and its inverse.
  Mat flatten() const;
  static Mat unflatten(const FieldPtr& field, std::span<const Elem> v, int rows, int cols);

  bool is_zero() const;
  bool operator==(const Mat& o) const;

 private:
  FieldPtr field_;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Elem> data_;
};

struct Rref {
  Mat reduced;              ///< nonzero rows only
  int rank = 0;
  std::vector<int> pivots;  ///< pivot column of each row, strictly increasing
};

/// Unique reduced row echelon form; zero rows are dropped. GF(2) input runs on
/// bit-packed words.
Rref rref(const Mat& m);
int rank(const Mat& m);
/// Basis (RREF rows) of {v : m * v^T = 0}, i.e. the dot-product orthogonal of rowsp(m).
Mat kernel_rows(const Mat& m);
std::optional<Mat> inverse(const Mat& m);
bool is_invertible(const Mat& m);

/// Companion matrix of the modulus of an extension field, over the prime
/// subfield: ones on the superdiagonal, last row f_0..f_{e-1} where
/// f = x^e - sum f_i x^i. Right multiplication of a coordinate row vector by it
/// is multiplication by the root. Rejects prime fields.
Mat companion_matrix(const Field& ext);

/// Rank of a list of GF(2) row vectors packed into words (each row <= 64 bits).
int rank_gf2_words(std::vector<std::uint64_t> rows);

}  // namespace qpoly::algebra
