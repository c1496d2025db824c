#pragma once

#include <optional>
#include <vector>

#include "qpoly/rmcode/code.hpp"

namespace qpoly::rmcode {

/// k x n generator matrix over F_{q^m}, with F_q the prime subfield.
/// Rows must be F_{q^m}-linearly independent.
class FqmGenerator {
 public:
  explicit FqmGenerator(Mat g);

  const FieldPtr& ext_field() const { return g_.field(); }
  /// The prime subfield F_q.
  FieldPtr base_field() const;
  int k() const { return g_.rows(); }
  int n() const { return g_.cols(); }
  int m() const { return g_.field()->e(); }
  const Mat& matrix() const { return g_; }

 private:
  Mat g_;
};

/// psi: coordinates of x in the basis 1, w, ..., w^{m-1} (w the root of the modulus).
std::vector<Elem> psi(const algebra::Field& ext, Elem x);
Elem psi_inverse(const algebra::Field& ext, std::span<const Elem> coords);
/// Psi: F_{q^m}^n -> F_q^{n x m}, row i = psi(x_i).
Mat big_psi(const algebra::Field& ext, std::span<const Elem> x);
/// Embedding of the prime subfield into the extension (index-preserving).
Mat lift_to_extension(const Mat& base, const FieldPtr& ext);

/// F_q-span of Psi(g_j) * Delta_f^i for all rows j and i in [0, m); dimension k*m.
RankMetricCode expand_generator(const FqmGenerator& g);

/// Gabidulin code over F_{q^m} (q prime, m = extension degree of `ext`) of
/// length n <= m and minimum distance d: G_ij = g_j^{q^i}, i = 0..n-d, with
/// evaluation points g_j = w^j unless given. Returned expanded to F_q^{n x m}.
FqmGenerator gabidulin_generator(const FieldPtr& ext, int n, int d, std::optional<std::vector<Elem>> points = std::nullopt);
RankMetricCode gabidulin(const FieldPtr& ext, int n, int d, std::optional<std::vector<Elem>> points = std::nullopt);

/// Reads a generator file: a matrix in the matrix text format over an extension field.
FqmGenerator read_generator(std::istream& in);
void write_generator(std::ostream& out, const FqmGenerator& g);

}  // namespace qpoly::rmcode
