#include "qpoly/weights/weights.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qpoly/algebra/errors.hpp"
#include "qpoly/algebra/lattice.hpp"
#include "qpoly/flats/flats.hpp"
#include "qpoly/qpm/qpolymatroid.hpp"

namespace qpoly::weights {

using algebra::Mat;

namespace {

void require_oriented(const RankMetricCode& c) {
  if (c.is_zero()) throw std::invalid_argument("generalized weights need a nonzero code");
  if (c.m() < c.n()) throw std::invalid_argument("generalized weights need m >= n; transpose the code first");
}

// n - max{dim V : s(V) >= i} where s(V) = denom * (rho(E) - rho(V)) is an integer,
// over the lattice indices accepted by `use`.
template <class Use>
std::vector<int> weights_from(const qpm::QPolymatroid& m, int denom, int k, Use use) {
  const auto& lat = m.lattice();
  const qpm::QRat top = m.full_rank();
  std::vector<int> best(k + 1, -1);  // best[s] = max dim V with s(V) = s
  for (std::size_t v = 0; v < lat.size(); ++v) {
    if (!use(v)) continue;
    qpm::QRat s = (top - m.rank_at(v)) * denom;
    if (!qpm::is_integral(s)) throw PropertyViolation("rank values are not multiples of 1/" + std::to_string(denom));
    int si = static_cast<int>(s.get_num().get_si());
    best[si] = std::max(best[si], lat.dim_of(v));
  }
  std::vector<int> out(k);
  int run = -1;
  for (int i = k; i >= 1; --i) {
    run = std::max(run, best[i]);
    out[i - 1] = m.ell() - run;
  }
  return out;
}

std::vector<int> combine(const std::vector<int>& c, const std::vector<int>& r, bool square) {
  if (!square) return c;
  std::vector<int> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = std::min(c[i], r[i]);
  return out;
}

}  // namespace

RankMetricCode orient(const RankMetricCode& c, bool* transposed) {
  bool t = c.m() < c.n();
  if (transposed) *transposed = t;
  return t ? rmcode::code_transpose(c) : c;
}

WeightProfile gen_weights_qpm(const RankMetricCode& c) {
  require_oriented(c);
  WeightProfile w{c.n(), c.m(), c.dim(), {}, {}, {}, {}, {}};
  auto mc = qpm::from_code_col(c);
  w.a_c = weights_from(mc, c.m(), c.dim(), [](std::size_t) { return true; });
  if (c.m() == c.n())
    w.a_r = weights_from(qpm::from_code_row(c), c.n(), c.dim(), [](std::size_t) { return true; });
  w.a = combine(w.a_c, w.a_r, c.m() == c.n());
  return w;
}

WeightProfile gen_weights_flats(const RankMetricCode& c) {
  auto w = gen_weights_qpm(c);
  auto mc = qpm::from_code_col(c);
  auto fc = flats::flats_all(mc);
  w.b_c = weights_from(mc, c.m(), c.dim(), [&](std::size_t v) { return fc.flat_of[v] >= 0; });
  if (!w.a_r.empty()) {
    auto mr = qpm::from_code_row(c);
    auto fr = flats::flats_all(mr);
    w.b_r = weights_from(mr, c.n(), c.dim(), [&](std::size_t v) { return fr.flat_of[v] >= 0; });
  }
  return w;
}

int maxrk(const RankMetricCode& c) {
  const auto& f = *c.field();
  const int k = c.dim();
  double bits = k * std::log2(static_cast<double>(f.q()));
  if (bits > 24) throw BudgetExceeded("maxrk enumerates q^k codewords; q^k exceeds 2^24");
  std::vector<Mat> basis = c.matrices();
  std::vector<algebra::Elem> coef(k, 0);
  const int cap = std::min(c.n(), c.m());
  int best = 0;
  while (true) {
    Mat cur(c.field(), c.n(), c.m());
    for (int j = 0; j < k; ++j)
      if (coef[j]) cur = cur + basis[j].scaled(coef[j]);
    best = std::max(best, algebra::rank(cur));
    if (best == cap) return best;
    int j = 0;
    while (j < k && coef[j] == f.q() - 1) coef[j++] = 0;
    if (j == k) return best;
    ++coef[j];
  }
}

bool is_optimal_anticode(const RankMetricCode& c) { return c.dim() == c.m() * maxrk(c); }

RankMetricCode column_anticode(const algebra::Subspace& v, int m) {
  const int n = v.ambient();
  if (v.is_zero()) return RankMetricCode::zero(v.field(), n, m);
  Mat flat(v.field(), v.dim() * m, n * m);
  for (int a = 0; a < v.dim(); ++a)
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < n; ++i) flat(a * m + j, i * m + j) = v.basis()(a, i);
  return RankMetricCode(n, m, flat);
}

RankMetricCode row_anticode(int n, const algebra::Subspace& w) {
  const int m = w.ambient();
  if (w.is_zero()) return RankMetricCode::zero(w.field(), n, m);
  Mat flat(w.field(), w.dim() * n, n * m);
  for (int b = 0; b < w.dim(); ++b)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) flat(b * n + i, i * m + j) = w.basis()(b, j);
  return RankMetricCode(n, m, flat);
}

std::vector<int> anticode_weights(const RankMetricCode& c) {
  require_oriented(c);
  const int k = c.dim();
  const auto code_space = algebra::Subspace::span(c.flat());
  std::vector<int> best(k + 1, INT32_MAX);  // best[t] = min dim V with dim(C cap A) = t
  auto consider = [&](const RankMetricCode& a, int d) {
    int t = a.is_zero() ? 0 : algebra::intersect(code_space, algebra::Subspace::span(a.flat())).dim();
    best[t] = std::min(best[t], d);
  };
  for (const auto& v : algebra::enumerate_subspaces(c.field(), c.n())) consider(column_anticode(v, c.m()), v.dim());
  if (c.m() == c.n())
    for (const auto& w : algebra::enumerate_subspaces(c.field(), c.m())) consider(row_anticode(c.n(), w), w.dim());
  std::vector<int> out(k);
  int run = INT32_MAX;
  for (int i = k; i >= 1; --i) {
    run = std::min(run, best[i]);
    out[i - 1] = run;
  }
  return out;
}

int anticode_oracle(const RankMetricCode& c, int i) {
  if (i < 1 || i > c.dim()) throw std::invalid_argument("weight index out of range");
  return anticode_weights(c)[i - 1];
}

HyperplaneDistance rank_distance_via_hyperplanes(const RankMetricCode& c) {
  require_oriented(c);
  auto max_dim = [](const qpm::QPolymatroid& m) {
    auto fl = flats::flats_all(m);
    int best = -1;
    for (auto h : flats::hyperplanes(fl)) best = std::max(best, fl.dim(h));
    return best;
  };
  HyperplaneDistance out;
  out.d = c.n() - max_dim(qpm::from_code_col(c));
  if (c.m() == c.n()) out.d_row = c.m() - max_dim(qpm::from_code_row(c));
  return out;
}

nlohmann::json to_json(const WeightProfile& w) {
  nlohmann::json j{{"n", w.n}, {"m", w.m}, {"k", w.k}, {"a_c", w.a_c}, {"a_r", w.a_r}, {"a", w.a}};
  if (!w.b_c.empty()) j["b_c"] = w.b_c;
  if (!w.b_r.empty()) j["b_r"] = w.b_r;
  return j;
}

std::string to_csv(const WeightProfile& w) {
  std::ostringstream out;
  out << "i,a_c,a_r,a,b_c,b_r\n";
  for (int i = 0; i < w.k; ++i) {
    auto cell = [&](const std::vector<int>& v) { return v.empty() ? std::string() : std::to_string(v[i]); };
    out << i + 1 << ',' << w.a_c[i] << ',' << cell(w.a_r) << ',' << w.a[i] << ',' << cell(w.b_c) << ',' << cell(w.b_r);
    out << '\n';
  }
  return out.str();
}

}  // namespace qpoly::weights
