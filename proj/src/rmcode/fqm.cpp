#include "qpoly/rmcode/fqm.hpp"

#include <stdexcept>

#include "qpoly/algebra/errors.hpp"
#include "qpoly/algebra/textio.hpp"

namespace qpoly::rmcode {

using algebra::Field;

FqmGenerator::FqmGenerator(Mat g) : g_(std::move(g)) {
  if (g_.rows() == 0) throw std::invalid_argument("generator matrix has no rows");
  if (algebra::rank(g_) != g_.rows()) throw std::invalid_argument("generator matrix rows are linearly dependent");
}

FieldPtr FqmGenerator::base_field() const { return Field::make(g_.field()->p()); }

std::vector<Elem> psi(const Field& ext, Elem x) {
  auto c = ext.coeffs(x);
  return std::vector<Elem>(c.begin(), c.end());
}

Elem psi_inverse(const Field& ext, std::span<const Elem> coords) {
  std::vector<int> c(coords.begin(), coords.end());
  return ext.from_coeffs(c);
}

Mat big_psi(const Field& ext, std::span<const Elem> x) {
  const int m = ext.e();
  Mat out(Field::make(ext.p()), static_cast<int>(x.size()), m);
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto c = ext.coeffs(x[i]);
    for (int j = 0; j < m; ++j) out(static_cast<int>(i), j) = static_cast<Elem>(c[j]);
  }
  return out;
}

Mat lift_to_extension(const Mat& base, const FieldPtr& ext) {
  if (base.field()->q() != static_cast<Elem>(ext->p())) throw std::invalid_argument("lift needs a matrix over the prime subfield");
  return Mat(ext, base.rows(), base.cols(), base.data());
}

RankMetricCode expand_generator(const FqmGenerator& g) {
  const Field& ext = *g.ext_field();
  const int n = g.n();
  const int m = g.m();
  FieldPtr base = g.base_field();
  Mat delta = m > 1 ? algebra::companion_matrix(ext) : Mat::identity(base, 1);
  Mat flat(base, g.k() * m, n * m);
  int row = 0;
  for (int j = 0; j < g.k(); ++j) {
    Mat cur = big_psi(ext, g.matrix().row(j));
    for (int i = 0; i < m; ++i) {
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < m; ++c) flat(row, r * m + c) = cur(r, c);
      ++row;
      cur = cur * delta;
    }
  }
  return RankMetricCode(n, m, flat);
}

FqmGenerator gabidulin_generator(const FieldPtr& ext, int n, int d, std::optional<std::vector<Elem>> points) {
  const int m = ext->e();
  if (n > m) throw std::invalid_argument("Gabidulin codes need n <= m");
  if (d < 1 || d > n) throw std::invalid_argument("Gabidulin distance must satisfy 1 <= d <= n");
  std::vector<Elem> g;
  if (points) {
    g = *points;
    if (static_cast<int>(g.size()) != n) throw std::invalid_argument("need exactly n evaluation points");
  } else {
    for (int j = 0; j < n; ++j) g.push_back(ext->pow(ext->root(), j));
  }
  if (algebra::rank(big_psi(*ext, g)) != n) throw std::invalid_argument("evaluation points are not linearly independent over F_q");
  const int k = n - d + 1;
  const std::uint64_t q = static_cast<std::uint64_t>(ext->p());
  Mat gm(ext, k, n);
  for (int j = 0; j < n; ++j) {
    Elem x = g[j];
    for (int i = 0; i < k; ++i) {
      gm(i, j) = x;
      x = ext->pow(x, q);
    }
  }
  return FqmGenerator(gm);
}

RankMetricCode gabidulin(const FieldPtr& ext, int n, int d, std::optional<std::vector<Elem>> points) {
  return expand_generator(gabidulin_generator(ext, n, d, std::move(points)));
}

FqmGenerator read_generator(std::istream& in) {
  algebra::LineReader lr(in);
  Mat g = algebra::read_matrix(lr);
  try {
    return FqmGenerator(std::move(g));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), 1);
  }
}

void write_generator(std::ostream& out, const FqmGenerator& g) { algebra::write_matrix(out, g.matrix()); }

}  // namespace qpoly::rmcode
