#include "qpoly/qpm/qpolymatroid.hpp"

#include <atomic>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "qpoly/algebra/budget.hpp"
#include "qpoly/algebra/errors.hpp"

namespace qpoly::qpm {

using algebra::Field;

struct QPolymatroid::State {
  FieldPtr field;
  int ell = 0;
  Oracle oracle;
  std::string provenance;
  std::once_flag lattice_once;
  std::shared_ptr<const SubspaceLattice> lattice;
  std::once_flag table_once;
  std::atomic<bool> table_ready{false};
  std::vector<QRat> table;
};

QPolymatroid::QPolymatroid(FieldPtr field, int ell, Oracle oracle, std::string provenance) : s_(std::make_shared<State>()) {
  if (ell < 0) throw std::invalid_argument("negative ground dimension");
  s_->field = std::move(field);
  s_->ell = ell;
  s_->oracle = std::move(oracle);
  s_->provenance = std::move(provenance);
}

QPolymatroid QPolymatroid::from_table(FieldPtr field, int ell, std::vector<QRat> table, std::string provenance) {
  auto lat = SubspaceLattice::get(field, ell);
  if (table.size() != lat->size()) throw std::invalid_argument("rank table size does not match the subspace lattice");
  auto shared = std::make_shared<std::vector<QRat>>(std::move(table));
  QPolymatroid m(field, ell, [lat, shared](const Subspace& v) { return (*shared)[lat->index_of(v)]; }, std::move(provenance));
  std::call_once(m.s_->lattice_once, [&] { m.s_->lattice = lat; });
  std::call_once(m.s_->table_once, [&] {
    m.s_->table = *shared;
    m.s_->table_ready = true;
  });
  return m;
}

const FieldPtr& QPolymatroid::field() const { return s_->field; }
int QPolymatroid::ell() const { return s_->ell; }
const std::string& QPolymatroid::provenance() const { return s_->provenance; }

std::shared_ptr<const SubspaceLattice> QPolymatroid::lattice_ptr() const {
  std::call_once(s_->lattice_once, [this] { s_->lattice = SubspaceLattice::get(s_->field, s_->ell); });
  return s_->lattice;
}

const SubspaceLattice& QPolymatroid::lattice() const { return *lattice_ptr(); }

const std::vector<QRat>& QPolymatroid::table() const {
  std::call_once(s_->table_once, [this] {
    const auto& lat = lattice();
    std::vector<QRat> t(lat.size());
    algebra::parallel_for(lat.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) t[i] = s_->oracle(lat.at(i));
    });
    s_->table = std::move(t);
    s_->table_ready = true;
  });
  return s_->table;
}

bool QPolymatroid::has_table() const { return s_->table_ready; }

QRat QPolymatroid::rank(const Subspace& v) const {
  if (v.ambient() != s_->ell) throw std::invalid_argument("subspace ambient does not match the ground space");
  if (s_->table_ready) return s_->table[s_->lattice->index_of(v)];
  return s_->oracle(v);
}

QRat QPolymatroid::full_rank() const { return rank(Subspace::full(s_->field, s_->ell)); }

namespace {

std::string code_shape(const rmcode::RankMetricCode& c) {
  return std::to_string(c.n()) + "x" + std::to_string(c.m()) + " code of dimension " + std::to_string(c.dim());
}

}  // namespace

QPolymatroid from_code_col(const rmcode::RankMetricCode& c) {
  if (c.is_zero()) throw std::invalid_argument("the zero code does not define a q-polymatroid");
  const int n = c.n();
  const int m = c.m();
  const int k = c.dim();
  const std::string prov = "column q-PM of a " + code_shape(c);
  if (c.field()->q() == 2 && n * m <= 64) {
    // rows[i][j] = row j of the i-th basis matrix as an m-bit word
    std::vector<std::vector<std::uint64_t>> rows(k, std::vector<std::uint64_t>(n, 0));
    for (int i = 0; i < k; ++i) {
      auto f = c.flat().row(i);
      for (int r = 0; r < n; ++r)
        for (int j = 0; j < m; ++j)
          if (f[r * m + j]) rows[i][r] |= std::uint64_t{1} << j;
    }
    return QPolymatroid(
        c.field(), n,
        [rows, n, m, k](const Subspace& v) {
          std::vector<std::uint64_t> words(k, 0);
          const Mat& b = v.basis();
          for (int i = 0; i < k; ++i) {
            std::uint64_t w = 0;
            for (int t = 0; t < b.rows(); ++t) {
              std::uint64_t blk = 0;
              for (int r = 0; r < n; ++r)
                if (b(t, r)) blk ^= rows[i][r];
              w |= blk << (t * m);
            }
            words[i] = w;
          }
          return rat(algebra::rank_gf2_words(std::move(words)), m);
        },
        prov);
  }
  return QPolymatroid(
      c.field(), n, [c, m](const Subspace& v) { return rat(rmcode::column_rank_numerator(c, v.basis()), m); }, prov);
}

QPolymatroid from_code_row(const rmcode::RankMetricCode& c) {
  auto m = from_code_col(rmcode::code_transpose(c));
  return QPolymatroid(
      m.field(), m.ell(), [m](const Subspace& v) { return m.rank(v); },
      "row q-PM of a " + code_shape(c));
}

QPolymatroid from_generator(const rmcode::FqmGenerator& g) {
  FieldPtr ext = g.ext_field();
  FieldPtr base = g.base_field();
  Mat gm = g.matrix();
  return QPolymatroid(
      base, g.n(),
      [ext, gm](const Subspace& v) {
        if (v.is_zero()) return rat(0);
        Mat lifted = rmcode::lift_to_extension(v.basis(), ext);
        return rat(algebra::rank(gm * lifted.transpose()));
      },
      "q-matroid of a " + std::to_string(g.k()) + "x" + std::to_string(g.n()) + " generator over GF(" + std::to_string(ext->q()) + ")");
}

QPolymatroid uniform(const FieldPtr& field, int ell, int k) {
  if (k < 0 || k > ell) throw std::invalid_argument("uniform q-matroid needs 0 <= k <= l");
  return QPolymatroid(
      field, ell, [k](const Subspace& v) { return rat(std::min(k, v.dim())); },
      "uniform U_" + std::to_string(k) + " on dimension " + std::to_string(ell));
}

QPolymatroid free_qmatroid(const FieldPtr& field, int ell) { return uniform(field, ell, ell); }

QPolymatroid trivial(const FieldPtr& field, int ell) {
  return QPolymatroid(field, ell, [](const Subspace&) { return rat(0); }, "trivial on dimension " + std::to_string(ell));
}

QPolymatroid paving(const FieldPtr& field, int ell, int k, const std::vector<Subspace>& spaces) {
  if (k < 1 || k > ell) throw std::invalid_argument("paving q-matroid needs 1 <= k <= l");
  for (const auto& s : spaces) {
    if (s.ambient() != ell) throw std::invalid_argument("paving member has the wrong ambient dimension");
    if (s.dim() != k) throw std::invalid_argument("paving member " + s.to_string() + " is not " + std::to_string(k) + "-dimensional");
  }
  for (std::size_t i = 0; i < spaces.size(); ++i)
    for (std::size_t j = i + 1; j < spaces.size(); ++j) {
      if (spaces[i] == spaces[j]) throw std::invalid_argument("paving member listed twice: " + spaces[i].to_string());
      if (algebra::intersect(spaces[i], spaces[j]).dim() > k - 2)
        throw std::invalid_argument("paving members " + spaces[i].to_string() + " and " + spaces[j].to_string() +
                                    " meet in dimension above k-2");
    }
  std::unordered_set<Subspace, algebra::SubspaceHash> members(spaces.begin(), spaces.end());
  return QPolymatroid(
      field, ell,
      [members = std::move(members), k](const Subspace& v) {
        if (members.count(v)) return rat(k - 1);
        return rat(std::min(k, v.dim()));
      },
      "paving q-matroid of rank " + std::to_string(k) + " with " + std::to_string(spaces.size()) + " dependent " +
          std::to_string(k) + "-spaces");
}

namespace {

// Table rescaled to integers over a common denominator.
std::vector<std::int64_t> scaled_table(const QPolymatroid& m, std::int64_t* scale = nullptr) {
  const auto& t = m.table();
  mpz_class l = 1;
  for (const auto& r : t) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), r.get_den().get_mpz_t());
  if (l * (m.ell() + 1) > mpz_class(std::int64_t{1} << 40)) throw std::overflow_error("rank denominators too large");
  std::vector<std::int64_t> out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    mpz_class v = t[i].get_num() * (l / t[i].get_den());
    out[i] = v.get_si();
  }
  if (scale) *scale = l.get_si();
  return out;
}

}  // namespace

AxiomReport verify_axioms(const QPolymatroid& m, std::size_t pair_limit) {
  AxiomReport rep;
  const auto& lat = m.lattice();
  std::int64_t l = 1;
  auto t = scaled_table(m, &l);
  const std::size_t n = lat.size();
  const std::size_t np = lat.num_points();
  rep.r3_all_pairs = n <= pair_limit;
  auto name = [&](std::size_t i) { return lat.at(i).to_string(); };
  auto fail = [&](const char* ax, std::string d) {
    rep.ok = false;
    rep.axiom = ax;
    rep.detail = std::move(d);
    return rep;
  };
  auto val = [&](std::size_t i) { return to_string(m.rank_at(i)); };
  for (std::size_t i = 0; i < n; ++i)
    if (t[i] < 0 || t[i] > lat.dim_of(i) * l)
      return fail("R1", "rho(" + name(i) + ") = " + val(i) + " outside [0, " + std::to_string(lat.dim_of(i)) + "]");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t p = 0; p < np; ++p) {
      std::size_t j = lat.join_point(i, p);
      if (t[j] < t[i]) return fail("R2", "rho(" + name(i) + ") = " + val(i) + " > rho(" + name(j) + ") = " + val(j));
    }
  // R3
  std::atomic<bool> bad{false};
  std::mutex mu;
  std::string detail;
  auto report = [&](std::size_t a, std::size_t b, std::size_t s, std::size_t x) {
    std::lock_guard<std::mutex> lock(mu);
    if (bad.exchange(true)) return;
    detail = "V = " + name(a) + ", W = " + name(b) + ": rho(V+W) + rho(V cap W) = " + to_string(m.rank_at(s) + m.rank_at(x)) +
             " > rho(V) + rho(W) = " + to_string(m.rank_at(a) + m.rank_at(b));
  };
  if (n <= pair_limit) {
    for (std::size_t i = 0; i < n; ++i) lat.orth_index(i);
    algebra::parallel_for(n, [&](std::size_t b, std::size_t e) {
      for (std::size_t a = b; a < e && !bad; ++a)
        for (std::size_t c = a + 1; c < n; ++c) {
          std::size_t s = lat.sum_index(a, c);
          std::size_t x = lat.intersect_index(a, c);
          if (t[s] + t[x] > t[a] + t[c]) {
            report(a, c, s, x);
            break;
          }
        }
    });
  } else {
    rep.r3_all_pairs = false;
    // Diamonds V < V+P, V+R < V+P+R; on a modular lattice these imply R3.
    algebra::parallel_for(n, [&](std::size_t b, std::size_t e) {
      std::vector<std::size_t> covers;
      std::vector<std::size_t> reps;
      for (std::size_t v = b; v < e && !bad; ++v) {
        covers.clear();
        reps.clear();
        for (std::size_t p = 0; p < np; ++p) {
          std::size_t j = lat.join_point(v, p);
          if (j == v) continue;
          bool seen = false;
          for (auto c : covers) seen = seen || c == j;
          if (!seen) {
            covers.push_back(j);
            reps.push_back(p);
          }
        }
        for (std::size_t x = 0; x < covers.size(); ++x)
          for (std::size_t y = x + 1; y < covers.size(); ++y) {
            std::size_t top = lat.join_point(covers[x], reps[y]);
            if (t[top] + t[v] > t[covers[x]] + t[covers[y]]) {
              report(covers[x], covers[y], top, v);
              x = covers.size();
              break;
            }
          }
      }
    });
  }
  if (bad) return fail("R3", detail);
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t s = v;
    for (std::size_t p = 0; p < np; ++p)
      if (t[lat.join_point(v, p)] == t[v]) s = lat.join_point(s, p);
    if (t[s] != t[v])
      return fail("point-closure", "every point of " + name(s) + " leaves rho(" + name(v) + ") = " + val(v) +
                                       " unchanged, but rho of the sum is " + val(s));
  }
  return rep;
}

QPolymatroid dual(const QPolymatroid& m, const GramMatrix& q) {
  if (q.size() != m.ell()) throw std::invalid_argument("Gram matrix size does not match the ground space");
  if (!q.matrix().field()->same_as(*m.field())) throw std::invalid_argument("Gram matrix is over a different field");
  QRat top = m.full_rank();
  if (q.is_identity() && m.has_table()) {
    auto lat = m.lattice_ptr();
    std::vector<QRat> t(lat->size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = lat->dim_of(i) + m.rank_at(lat->orth_index(i)) - top;
    return QPolymatroid::from_table(m.field(), m.ell(), std::move(t), "dual of (" + m.provenance() + ")");
  }
  return QPolymatroid(
      m.field(), m.ell(), [m, q, top](const Subspace& v) { return QRat(v.dim() + m.rank(algebra::orthogonal(v, q)) - top); },
      "dual of (" + m.provenance() + ")");
}

QPolymatroid dual(const QPolymatroid& m) { return dual(m, GramMatrix::identity(m.field(), m.ell())); }

Denominators denominators(const QPolymatroid& m) {
  mpz_class l = 1;
  mpz_class g = 0;
  bool integral = true;
  for (const auto& r : m.table()) {
    if (r == 0) continue;
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), r.get_den().get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), r.get_num().get_mpz_t());
    integral = integral && r.get_den() == 1;
  }
  Denominators d;
  d.is_qmatroid = integral;
  if (g == 0) {
    d.principal = 1;
  } else {
    d.principal = QRat(l, g);
    d.principal.canonicalize();
  }
  return d;
}

bool is_exact(const QPolymatroid& m) {
  const auto& lat = m.lattice();
  for (std::size_t i = lat.dim_begin(1); i < lat.dim_end(1); ++i)
    if (m.rank_at(i) == 1) return true;
  return false;
}

QPolymatroid rescale(const QPolymatroid& m, const QRat& a) {
  if (a <= 0) throw std::invalid_argument("rescaling factor must be positive");
  std::vector<QRat> t(m.table());
  for (auto& r : t) r *= a;
  auto out = QPolymatroid::from_table(m.field(), m.ell(), std::move(t), to_string(a) + " * (" + m.provenance() + ")");
  auto rep = verify_axioms(out);
  if (!rep.ok) throw PropertyViolation("rescaling by " + to_string(a) + " violates " + rep.axiom + ": " + rep.detail);
  return out;
}

QRat exactify_factor(const QPolymatroid& m) {
  const auto& lat = m.lattice();
  QRat best = 0;
  for (std::size_t i = 1; i < lat.size(); ++i) {
    QRat r = m.rank_at(i) / lat.dim_of(i);
    if (r > best) best = r;
  }
  if (best == 0) throw std::invalid_argument("the trivial q-polymatroid cannot be made exact");
  return best;
}

QPolymatroid exactify(const QPolymatroid& m) { return rescale(m, 1 / exactify_factor(m)); }

std::vector<std::map<QRat, std::uint64_t>> histogram(const QPolymatroid& m) {
  const auto& lat = m.lattice();
  std::vector<std::map<QRat, std::uint64_t>> h(m.ell() + 1);
  for (std::size_t i = 0; i < lat.size(); ++i) ++h[lat.dim_of(i)][m.rank_at(i)];
  return h;
}

std::optional<std::size_t> first_difference(const QPolymatroid& a, const QPolymatroid& b) {
  if (a.ell() != b.ell() || !a.field()->same_as(*b.field())) throw std::invalid_argument("q-polymatroids live on different spaces");
  const auto& ta = a.table();
  const auto& tb = b.table();
  for (std::size_t i = 0; i < ta.size(); ++i)
    if (ta[i] != tb[i]) return i;
  return std::nullopt;
}

bool same_ranks(const QPolymatroid& a, const QPolymatroid& b) { return !first_difference(a, b); }

}  // namespace qpoly::qpm
