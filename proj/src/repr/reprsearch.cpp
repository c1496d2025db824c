#include "qpoly/repr/reprsearch.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <random>
#include <sstream>
#include <stdexcept>

#include "qpoly/algebra/budget.hpp"
#include "qpoly/algebra/errors.hpp"
#include "qpoly/algebra/lattice.hpp"
#include "qpoly/algebra/textio.hpp"

namespace qpoly::repr {

using algebra::Field;
using algebra::FieldPtr;
using algebra::Subspace;

qpm::EquivalenceResult is_represented_by(const QPolymatroid& m, const rmcode::RankMetricCode& c, std::uint64_t node_budget) {
  if (m.ell() != c.n()) throw std::invalid_argument("q-PM ground dimension differs from the code's n");
  if (m.field()->q() != c.field()->q()) throw std::invalid_argument("q-PM and code live over different fields");
  return qpm::find_equivalence(m, qpm::from_code_col(c), node_budget);
}

std::string to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::found: return "found";
    case SearchStatus::exhausted: return "exhausted";
    case SearchStatus::budget: return "budget";
  }
  return "?";
}

namespace {

struct Outcome {
  bool passed = false, unknown = false;
  std::optional<Mat> iso;
};

int integral_rank(const qpm::QRat& x) {
  if (!qpm::is_integral(x)) throw std::invalid_argument("representation search needs a q-matroid; rank " + qpm::to_string(x) + " found");
  return static_cast<int>(x.get_num().get_si());
}

}  // namespace

SearchReport search_fqm_representation(const QPolymatroid& m, int ext_degree, const SearchBudget& budget) {
  const FieldPtr base = m.field();
  if (!base->is_prime_field()) throw std::invalid_argument("representation search needs a prime base field");
  if (ext_degree < 1) throw std::invalid_argument("extension degree must be positive");
  const int n = m.ell();
  const int k = integral_rank(m.full_rank());
  if (k > 3) throw std::invalid_argument("representation search is limited to rank <= 3");

  const auto& lat = m.lattice();
  const std::size_t lsize = lat.size();
  auto hist_index = [k](int dim, int r) { return static_cast<std::size_t>(dim) * (k + 1) + r; };
  std::vector<std::uint64_t> target(static_cast<std::size_t>(n + 1) * (k + 1), 0);
  for (std::size_t v = 0; v < lsize; ++v) {
    int r = integral_rank(m.rank_at(v));
    if (r < 0 || r > k) throw std::invalid_argument("rank value outside [0, rho(E)]");
    ++target[hist_index(lat.dim_of(v), r)];
  }

  const FieldPtr ext = Field::make(base->p(), ext_degree);
  std::vector<Mat> lifted_t(lsize);
  for (std::size_t v = 0; v < lsize; ++v)
    if (!lat.at(v).is_zero()) lifted_t[v] = rmcode::lift_to_extension(lat.at(v).basis(), ext).transpose();

  SearchReport rep;
  rep.k = k;
  rep.n = n;
  rep.m = ext_degree;
  rep.candidates_total = algebra::gaussian_binomial(n, k, ext->q());

  const auto start = std::chrono::steady_clock::now();
  auto out_of_time = [&] {
    if (budget.time_cap_seconds <= 0) return false;
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() > budget.time_cap_seconds;
  };

  auto examine = [&](const Mat& g, Outcome& out) {
    std::vector<std::uint64_t> h(target.size(), 0);
    std::vector<qpm::QRat> table(lsize);
    for (std::size_t v = 0; v < lsize; ++v) {
      int r = lat.at(v).is_zero() ? 0 : algebra::rank(g * lifted_t[v]);
      table[v] = qpm::QRat(r);
      ++h[hist_index(lat.dim_of(v), r)];
    }
    if (h != target) return;
    out.passed = true;
    auto cand = QPolymatroid::from_table(base, n, std::move(table), "candidate");
    auto eq = qpm::find_equivalence(m, cand, budget.max_orbit_nodes);
    if (eq.verdict == qpm::Verdict::yes) out.iso = eq.witness;
    else if (eq.verdict == qpm::Verdict::unknown) out.unknown = true;
  };

  std::vector<Mat> block;
  const std::size_t block_size = 512;
  bool stop = false, capped = false;
  auto flush = [&] {
    std::vector<Outcome> res(block.size());
    algebra::parallel_for(block.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) examine(block[i], res[i]);
    });
    for (std::size_t i = 0; i < block.size(); ++i) {
      ++rep.candidates_examined;
      rep.histogram_passed += res[i].passed;
      rep.gl_unknown += res[i].unknown;
      if (res[i].iso) {
        rmcode::FqmGenerator gen(block[i]);
        auto mc = qpm::from_code_col(rmcode::expand_generator(gen));
        if (!qpm::check_isomorphism(m, mc, *res[i].iso))
          throw PropertyViolation("representation round trip failed: expanded code does not reproduce the q-matroid");
        rep.witness = std::move(gen);
        rep.iso = res[i].iso;
        rep.status = SearchStatus::found;
        stop = true;
        break;
      }
    }
    block.clear();
    if (!stop && out_of_time()) stop = capped = true;
  };

  algebra::enumerate_subspaces(ext, n, k, [&](const Subspace& s) {
    if (budget.max_candidates && rep.candidates_examined + block.size() >= budget.max_candidates) {
      capped = true;
      return false;
    }
    block.push_back(s.basis());
    if (block.size() == block_size) flush();
    return !stop;
  });
  if (!stop && !block.empty()) flush();

  if (rep.status != SearchStatus::found) {
    if (capped || rep.gl_unknown) rep.status = SearchStatus::budget;
    else if (rep.candidates_examined != rep.candidates_total)
      throw PropertyViolation("enumeration visited " + std::to_string(rep.candidates_examined) + " row spaces, expected " +
                              std::to_string(rep.candidates_total));
  }
  return rep;
}

nlohmann::json to_json(const SearchReport& r, bool emit_witness) {
  nlohmann::json j{{"status", to_string(r.status)},
                   {"k", r.k},
                   {"n", r.n},
                   {"m", r.m},
                   {"candidates_total", r.candidates_total},
                   {"candidates_examined", r.candidates_examined},
                   {"histogram_passed", r.histogram_passed}};
  if (r.gl_unknown) j["gl_unknown"] = r.gl_unknown;
  if (emit_witness && r.witness) {
    std::ostringstream os;
    rmcode::write_generator(os, *r.witness);
    j["witness"] = os.str();
    std::ostringstream is;
    algebra::write_matrix(is, *r.iso);
    j["iso"] = is.str();
  }
  return j;
}

std::vector<Subspace> spread_spaces() {
  auto f = Field::make(2);
  return {Subspace::from_rows(f, 4, {{1, 0, 0, 0}, {0, 1, 0, 0}}), Subspace::from_rows(f, 4, {{0, 0, 1, 0}, {0, 0, 0, 1}}),
          Subspace::from_rows(f, 4, {{1, 0, 0, 1}, {0, 1, 1, 1}}), Subspace::from_rows(f, 4, {{1, 0, 1, 1}, {0, 1, 1, 0}})};
}

QPolymatroid spread_qmatroid() { return qpm::paving(Field::make(2), 4, 2, spread_spaces()); }

namespace {

using Word = std::uint32_t;  // a 4 x m binary matrix, entry (i, j) at bit i*m + j

// Columns of x all lie in the subspace whose member vectors are flagged in `members`.
bool columns_in(Word x, int m, std::uint16_t members) {
  for (int j = 0; j < m; ++j) {
    unsigned col = 0;
    for (int i = 0; i < 4; ++i) col |= ((x >> (i * m + j)) & 1u) << (3 - i);
    if (!(members >> col & 1u)) return false;
  }
  return true;
}

std::uint16_t member_mask(const Subspace& v) {
  std::uint16_t mask = 0;
  for (unsigned u = 0; u < 16; ++u) {
    std::vector<algebra::Elem> vec{u >> 3 & 1, u >> 2 & 1, u >> 1 & 1, u & 1};
    if (v.contains(vec)) mask |= std::uint16_t(1u << u);
  }
  return mask;
}

// dim of the span of `rows` (binary words) intersected with F(V, c).
int shortened_dim(const std::vector<Word>& code, int m, std::uint16_t members) {
  std::uint64_t count = 0;
  for (Word x : code) count += columns_in(x, m, members);
  return std::countr_zero(count);
}

std::vector<Word> span_words(const std::vector<Word>& basis) {
  std::vector<Word> out{0};
  for (Word b : basis) {
    const std::size_t s = out.size();
    for (std::size_t i = 0; i < s; ++i) out.push_back(out[i] ^ b);
  }
  return out;
}

Mat f2(std::vector<std::vector<algebra::Elem>> rows) { return Mat::from_rows(Field::make(2), rows); }

// X (2 x m) stacked over Y (2 x m).
Word stack(const Mat& x, const Mat& y) {
  const int m = x.cols();
  Word w = 0;
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < 2; ++i) {
      w |= Word(x(i, j)) << (i * m + j);
      w |= Word(y(i, j)) << ((i + 2) * m + j);
    }
  return w;
}

int word_rank(const std::vector<Word>& v) { return algebra::rank_gf2_words(std::vector<std::uint64_t>(v.begin(), v.end())); }

}  // namespace

bool SpreadObstructionReport::ok() const {
  bool structural = spread_axioms_ok && table_matches_display && t_is_s_squared && t_is_s_inverse && t_squared_is_i_plus_t &&
                    f4_closed && spread_block_shape && spread_self_orthogonal && witness_outside_spread;
  if (m % 2) structural = structural && odd_m_excluded;
  else structural = structural && forced_code_dim == 2 * m && forced_witness_dim >= m / 2 && forced_spread_dims_ok;
  if (!exhaustive) return structural;
  bool sweep = survivors == 0 && candidates == gaussian_count && fail_other == 0;
  if (m == 1) sweep = sweep && equivalence_no == candidates;
  return structural && sweep;
}

SpreadObstructionReport verify_spread_obstruction(int m) {
  if (m < 1) throw std::invalid_argument("m must be positive");
  if (m > 6) throw BudgetExceeded("spread obstruction is verified for m <= 6 only");
  auto f = Field::make(2);
  SpreadObstructionReport rep;
  rep.m = m;
  const auto spread = spread_spaces();
  const auto rho = spread_qmatroid();
  rep.spread_axioms_ok = qpm::verify_axioms(rho).ok;
  const auto& lat = rho.lattice();
  auto in_spread = [&](const Subspace& v) { return std::find(spread.begin(), spread.end(), v) != spread.end(); };

  // required dim C(W, c) for every W, from rho(W^perp) = (dim C - dim C(W, c)) / m with dim C = 2m
  std::vector<int> need(lat.size());
  rep.table_matches_display = true;
  for (std::size_t w = 0; w < lat.size(); ++w) {
    const Subspace& s = lat.at(w);
    qpm::QRat r = rho.rank(algebra::orthogonal(s));
    need[w] = 2 * m - m * static_cast<int>(r.get_num().get_si());
    int shown = s.dim() == 4 ? 2 * m : (s.dim() == 3 || in_spread(s)) ? m : 0;
    rep.table_matches_display = rep.table_matches_display && need[w] == shown;
  }

  const Mat s_mat = f2({{0, 1}, {1, 1}});
  const Mat t_mat = f2({{1, 1}, {1, 0}});
  const Mat id = Mat::identity(f, 2);
  rep.t_is_s_squared = s_mat * s_mat == t_mat;
  rep.t_is_s_inverse = t_mat * s_mat == id && s_mat * t_mat == id;
  rep.t_squared_is_i_plus_t = t_mat * t_mat == id + t_mat;
  const std::vector<Mat> f4{Mat(f, 2, 2), id, t_mat, t_mat * t_mat};
  rep.f4_closed = true;
  for (const auto& a : f4)
    for (const auto& b : f4) {
      bool sum_in = std::find(f4.begin(), f4.end(), a + b) != f4.end();
      bool prod_in = std::find(f4.begin(), f4.end(), a * b) != f4.end();
      rep.f4_closed = rep.f4_closed && sum_in && prod_in;
    }
  rep.spread_block_shape = spread[2] == Subspace::span(id.hstack(s_mat.transpose())) &&
                           spread[3] == Subspace::span(id.hstack(t_mat.transpose())) &&
                           spread[0] == Subspace::span(id.hstack(Mat(f, 2, 2))) &&
                           spread[1] == Subspace::span(Mat(f, 2, 2).hstack(id));
  rep.spread_self_orthogonal = true;
  for (const auto& v : spread) rep.spread_self_orthogonal = rep.spread_self_orthogonal && in_spread(algebra::orthogonal(v));
  const Subspace witness = Subspace::from_rows(f, 4, {{1, 0, 1, 0}, {0, 1, 0, 1}});
  rep.witness = witness.to_string();
  rep.witness_outside_spread = !in_spread(witness);

  std::vector<std::uint16_t> members(lat.size());
  for (std::size_t w = 0; w < lat.size(); ++w) members[w] = member_mask(lat.at(w));
  const std::uint16_t witness_members = member_mask(witness);
  std::vector<std::uint16_t> spread_members;
  for (const auto& v : spread) spread_members.push_back(member_mask(v));

  if (m % 2) {
    // T has no eigenvector over F_2, so T-invariant spaces are F_4-spaces; small m by enumeration
    rep.odd_m_excluded = true;
    for (unsigned u = 1; u < 4; ++u) {
      Mat v = f2({{u >> 1 & 1u}, {u & 1u}});
      Mat tv = t_mat * v;
      if (tv == v || tv.is_zero()) rep.odd_m_excluded = false;
    }
    if (m <= 3) {
      const Mat tm = t_mat;
      algebra::enumerate_subspaces(f, 2 * m, m, [&](const Subspace& a) {
        bool invariant = true;
        for (int r = 0; r < a.dim() && invariant; ++r) {
          Mat x = Mat::unflatten(f, a.basis().row(r), 2, m);
          invariant = a.contains((tm * x).flatten().row(0));
        }
        if (invariant) rep.odd_m_excluded = false;
        return invariant ? false : true;
      });
    }
  } else {
    // the forced basis shape: [A_i;0], [TA_i;0], [0;TA_i], [0;(I+T)A_i] with A = <A_i, TA_i> MRD
    const int ell = m / 2;
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> bit(0, 1);
    std::vector<Mat> a_basis;
    for (int attempt = 0; attempt < 100000 && a_basis.empty(); ++attempt) {
      std::vector<Mat> gens;
      for (int i = 0; i < ell; ++i) {
        Mat x(f, 2, m);
        for (int r = 0; r < 2; ++r)
          for (int c = 0; c < m; ++c) x(r, c) = static_cast<algebra::Elem>(bit(rng));
        gens.push_back(x);
      }
      std::vector<Mat> full = gens;
      for (const auto& g : gens) full.push_back(t_mat * g);
      std::vector<Word> words;
      for (const auto& x : full) words.push_back(stack(x, Mat(f, 2, m)));
      if (word_rank(words) != m) continue;
      bool mrd = true;
      for (Word w : span_words(words))
        if (w) {
          Mat top(f, 2, m);
          for (int r = 0; r < 2; ++r)
            for (int c = 0; c < m; ++c) top(r, c) = (w >> (r * m + c)) & 1;
          mrd = mrd && algebra::rank(top) == 2;
        }
      if (mrd) a_basis = gens;
    }
    if (!a_basis.empty()) {
      const Mat zero(f, 2, m);
      std::vector<Word> basis;
      for (const auto& a : a_basis) basis.push_back(stack(a, zero));
      for (const auto& a : a_basis) basis.push_back(stack(t_mat * a, zero));
      for (const auto& a : a_basis) basis.push_back(stack(zero, t_mat * a));
      for (const auto& a : a_basis) basis.push_back(stack(zero, (id + t_mat) * a));
      rep.forced_code_dim = word_rank(basis);
      auto code = span_words(basis);
      rep.forced_witness_dim = shortened_dim(code, m, witness_members);
      rep.forced_spread_dims_ok = true;
      for (auto sm : spread_members) rep.forced_spread_dims_ok = rep.forced_spread_dims_ok && shortened_dim(code, m, sm) == m;
      // the diagonal copies [(I+T)A_i; (I+T)A_i] are in C and in F(witness, c)
      for (const auto& a : a_basis) {
        Word d = stack((id + t_mat) * a, (id + t_mat) * a);
        bool in_code = std::find(code.begin(), code.end(), d) != code.end();
        if (!in_code || !columns_in(d, m, witness_members)) rep.forced_witness_dim = -1;
      }
    }
  }

  if (m <= 2) {
    rep.exhaustive = true;
    rep.gaussian_count = algebra::gaussian_binomial(4 * m, 2 * m, 2);
    std::vector<std::size_t> small, spread_idx, dim3, rest;
    std::size_t witness_idx = lat.size();
    for (std::size_t w = 0; w < lat.size(); ++w) {
      const auto& s = lat.at(w);
      if (s.dim() == 1) small.push_back(w);
      else if (s.dim() == 3) dim3.push_back(w);
      else if (s.dim() == 2 && in_spread(s)) spread_idx.push_back(w);
      else if (s.dim() == 2 && s == witness) witness_idx = w;
      else if (s.dim() == 2) rest.push_back(w);
    }
    auto fails = [&](const std::vector<Word>& code, const std::vector<std::size_t>& idx) {
      for (auto w : idx)
        if (shortened_dim(code, m, members[w]) != need[w]) return true;
      return false;
    };
    const auto spread_m = spread_qmatroid();
    algebra::enumerate_subspaces(f, 4 * m, 2 * m, [&](const Subspace& c) {
      ++rep.candidates;
      std::vector<Word> basis;
      for (int r = 0; r < c.dim(); ++r) {
        Word w = 0;
        for (int i = 0; i < 4 * m; ++i) w |= Word(c.basis()(r, i)) << i;
        basis.push_back(w);
      }
      auto code = span_words(basis);
      if (fails(code, small)) ++rep.fail_small;
      else if (fails(code, spread_idx)) ++rep.fail_spread;
      else if (fails(code, dim3)) ++rep.fail_dim3;
      else if (fails(code, {witness_idx})) ++rep.fail_witness;
      else if (fails(code, rest)) ++rep.fail_other;
      else ++rep.survivors;
      if (m == 1) {
        rmcode::RankMetricCode rc(4, 1, c.basis());
        if (is_represented_by(spread_m, rc).verdict == qpm::Verdict::no) ++rep.equivalence_no;
      }
      return true;
    });
  }
  return rep;
}

nlohmann::json to_json(const SpreadObstructionReport& r) {
  nlohmann::json j{{"m", r.m},
                   {"ok", r.ok()},
                   {"spread_axioms_ok", r.spread_axioms_ok},
                   {"table_matches_display", r.table_matches_display},
                   {"exhaustive", r.exhaustive}};
  if (r.exhaustive) {
    j["candidates"] = r.candidates;
    j["gaussian_count"] = r.gaussian_count;
    j["fail_small"] = r.fail_small;
    j["fail_spread"] = r.fail_spread;
    j["fail_dim3"] = r.fail_dim3;
    j["fail_witness"] = r.fail_witness;
    j["fail_other"] = r.fail_other;
    j["survivors"] = r.survivors;
    if (r.m == 1) j["equivalence_no"] = r.equivalence_no;
  }
  j["structural"] = {{"t_is_s_squared", r.t_is_s_squared},
                     {"t_is_s_inverse", r.t_is_s_inverse},
                     {"t_squared_is_i_plus_t", r.t_squared_is_i_plus_t},
                     {"f4_closed", r.f4_closed},
                     {"spread_block_shape", r.spread_block_shape},
                     {"spread_self_orthogonal", r.spread_self_orthogonal},
                     {"witness", r.witness},
                     {"witness_outside_spread", r.witness_outside_spread}};
  if (r.m % 2) j["structural"]["odd_m_excluded"] = r.odd_m_excluded;
  else {
    j["structural"]["forced_code_dim"] = r.forced_code_dim;
    j["structural"]["forced_witness_dim"] = r.forced_witness_dim;
    j["structural"]["forced_spread_dims_ok"] = r.forced_spread_dims_ok;
  }
  return j;
}

}  // namespace qpoly::repr
