#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "qpoly/algebra/errors.hpp"
#include "qpoly/algebra/textio.hpp"
#include "qpoly/qpm/equivalence.hpp"
#include "qpoly/qpm/io.hpp"
#include "qpoly/qpm/minors.hpp"
#include "qpoly/qpm/qpolymatroid.hpp"
#include "qpoly/rmcode/fqm.hpp"
#include "test_util.hpp"

using namespace qpoly;
using namespace qpoly::qpm;
namespace tu = qpoly::testing;
using algebra::Field;
using algebra::SubspaceLattice;
using rmcode::RankMetricCode;
using tu::fixture;
using tu::random_invertible;
using tu::random_small_code;
using tu::random_subspace;

namespace {

RankMetricCode load(const std::string& name) {
  std::ifstream in(fixture(name));
  return rmcode::read_code(in);
}

rmcode::FqmGenerator load_generator(const std::string& name) {
  std::ifstream in(fixture(name));
  return rmcode::read_generator(in);
}

// rho_c(V) computed from the codeword list: (dim C - log_q #{M : colsp M <= V^perp}) / m,
// with V^perp found by brute force over F_q^n.
QRat brute_col_rank(const RankMetricCode& c, const Subspace& v) {
  const auto& f = c.field();
  tu::VecSetOracle vs{f, c.n()};
  std::vector<std::vector<Elem>> perp;
  for (std::uint64_t x = 0; x < vs.total(); ++x) {
    auto w = vs.decode(x);
    bool ok = true;
    for (int r = 0; r < v.dim() && ok; ++r) {
      Elem s = 0;
      for (int j = 0; j < c.n(); ++j) s = f->add(s, f->mul(v.basis()(r, j), w[j]));
      ok = s == 0;
    }
    if (ok) perp.push_back(w);
  }
  std::set<std::uint64_t> perp_codes;
  for (auto& w : perp) perp_codes.insert(vs.encode(w));
  std::uint64_t count = 0;
  std::uint64_t total = 1;
  for (int i = 0; i < c.dim(); ++i) total *= f->q();
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    Mat word(f, c.n(), c.m());
    std::uint64_t t = idx;
    for (int i = 0; i < c.dim(); ++i) {
      word = word + c.matrix(i).scaled(static_cast<Elem>(t % f->q()));
      t /= f->q();
    }
    Mat wt = word.transpose();
    bool ok = true;
    for (int j = 0; j < c.m() && ok; ++j) ok = perp_codes.count(vs.encode(std::vector<Elem>(wt.row(j).begin(), wt.row(j).end()))) > 0;
    count += ok;
  }
  int logq = 0;
  while (count > 1) {
    count /= f->q();
    ++logq;
  }
  return rat(c.dim() - logq, c.m());
}

std::vector<Mat> all_invertible(const FieldPtr& f, int ell) {
  std::vector<Mat> out;
  std::uint64_t total = 1;
  for (int i = 0; i < ell * ell; ++i) total *= f->q();
  for (std::uint64_t x = 0; x < total; ++x) {
    Mat a(f, ell, ell);
    std::uint64_t t = x;
    for (int i = 0; i < ell * ell; ++i) {
      a(i / ell, i % ell) = static_cast<Elem>(t % f->q());
      t /= f->q();
    }
    if (algebra::is_invertible(a)) out.push_back(a);
  }
  return out;
}

std::map<QRat, std::uint64_t> layer(const QPolymatroid& m, int d) { return histogram(m)[d]; }

}  // namespace

TEST(CodeQpm, Ex310Histograms) {
  auto m1 = from_code_col(load("ex310_c1.code"));
  auto m2 = from_code_col(load("ex310_c2.code"));
  std::map<QRat, std::uint64_t> h1{{rat(1), 1}, {rat(3, 2), 28}, {rat(2), 126}};
  std::map<QRat, std::uint64_t> h2{{rat(3, 2), 31}, {rat(2), 124}};
  EXPECT_EQ(layer(m1, 2), h1);
  EXPECT_EQ(layer(m2, 2), h2);
  EXPECT_EQ(m1.full_rank(), rat(5, 2));
  EXPECT_EQ(m1.rank(Subspace::zero(m1.field(), 5)), 0);
  // A Gabidulin code over F_32 with n = 2, d = 2, transposed to 5 x 2.
  auto g = rmcode::code_transpose(rmcode::gabidulin(Field::make(2, 5), 2, 2));
  EXPECT_EQ(layer(from_code_col(g), 2), h2);
  EXPECT_THROW(from_code_col(RankMetricCode::zero(Field::make(2), 2, 2)), std::invalid_argument);
}

TEST(CodeQpm, MatchesBruteForceAndDualFormula) {
  std::mt19937_64 rng(8);
  for (auto f : {Field::make(2), Field::make(3)}) {
    for (int t = 0; t < 25; ++t) {
      auto c = random_small_code(f, 3, f->q() == 2 ? 9 : 4, rng);
      if (f->q() == 3 && c.dim() > 5) continue;
      auto m = from_code_col(c);
      auto dual = rmcode::code_dual(c);
      for (const auto& v : algebra::enumerate_subspaces(f, c.n())) {
        ASSERT_EQ(m.rank(v), brute_col_rank(c, v));
        // rho_c(V) = dim V - dim C^perp(V,c) / m
        ASSERT_EQ(m.rank(v), QRat(v.dim()) - rat(dual.is_zero() ? 0 : rmcode::shorten_col_dim(dual, v), c.m()));
      }
      ASSERT_EQ(m.full_rank(), rat(c.dim(), c.m()));
    }
  }
}

TEST(CodeQpm, FastPathMatchesGenericPath) {
  std::mt19937_64 rng(81);
  auto f = Field::make(2);
  for (int t = 0; t < 30; ++t) {
    auto c = random_small_code(f, 5, 20, rng);
    auto m = from_code_col(c);
    for (const auto& v : algebra::enumerate_subspaces(f, c.n()))
      ASSERT_EQ(m.rank(v), rat(rmcode::column_rank_numerator(c, v.basis()), c.m()));
  }
}

TEST(CodeQpm, RowQpmIsColumnQpmOfTranspose) {
  auto c = load("ex310_c1.code");
  auto r = from_code_row(c);
  EXPECT_EQ(r.ell(), 2);
  EXPECT_TRUE(same_ranks(r, from_code_col(rmcode::code_transpose(c))));
  EXPECT_EQ(r.full_rank(), rat(5, 5));
}

TEST(CodeQpm, PiecewiseValues) {
  // rho = dim C / m above n - d, rho = dim V below the dual distance.
  std::mt19937_64 rng(13);
  auto f = Field::make(2);
  for (int t = 0; t < 40; ++t) {
    auto c = random_small_code(f, 4, 16, rng);
    if (c.dim() == c.n() * c.m()) continue;
    int d = rmcode::rank_distance(c);
    int dd = rmcode::rank_distance(rmcode::code_dual(c));
    auto m = from_code_col(c);
    for (const auto& v : algebra::enumerate_subspaces(f, c.n())) {
      if (v.dim() > c.n() - d) ASSERT_EQ(m.rank(v), rat(c.dim(), c.m()));
      if (v.dim() < dd) ASSERT_EQ(m.rank(v), v.dim());
    }
  }
}

TEST(CodeQpm, MonotoneUnderInclusion) {
  std::mt19937_64 rng(14);
  auto f = Field::make(2);
  for (int t = 0; t < 20; ++t) {
    auto big = tu::random_code(f, 3, 3, 6, rng);
    Mat sub = big.flat().block(0, 1 + static_cast<int>(rng() % big.dim()), 0, 9);
    RankMetricCode small(3, 3, sub);
    auto mb = from_code_col(big);
    auto ms = from_code_col(small);
    for (std::size_t i = 0; i < mb.lattice().size(); ++i) ASSERT_LE(ms.rank_at(i), mb.rank_at(i));
  }
}

TEST(CodeQpm, MrdSquareOrWideIsUniform) {
  for (auto [n, m, d] : std::vector<std::tuple<int, int, int>>{{2, 3, 2}, {3, 3, 2}, {3, 4, 3}, {4, 4, 2}, {3, 5, 2}}) {
    auto c = rmcode::gabidulin(Field::make(2, m), n, d);
    ASSERT_TRUE(rmcode::is_mrd(c));
    auto qm = from_code_col(c);
    ASSERT_TRUE(same_ranks(qm, uniform(c.field(), n, n - d + 1))) << n << m << d;
    ASSERT_EQ(denominators(qm).principal, 1);
  }
}

TEST(CodeQpm, MrdTallPiecewise) {
  std::vector<RankMetricCode> codes{load("ex310_c1.code"), rmcode::code_transpose(rmcode::gabidulin(Field::make(2, 5), 3, 2)),
                                    rmcode::code_transpose(rmcode::gabidulin(Field::make(2, 4), 3, 2))};
  for (const auto& c : codes) {
    const int n = c.n(), m = c.m(), d = rmcode::rank_distance(c);
    ASSERT_LE(m, n);
    ASSERT_TRUE(rmcode::is_mrd(c));
    auto qm = from_code_col(c);
    for (std::size_t i = 0; i < qm.lattice().size(); ++i) {
      const int v = qm.lattice().dim_of(i);
      const QRat r = qm.rank_at(i);
      if (v <= m - d + 1) ASSERT_EQ(r, v);
      if (v >= n - d + 1) ASSERT_EQ(r, rat(n * (m - d + 1), m));
      if (v >= m - d + 2 && v <= n - d) ASSERT_GE(r, std::max(QRat(1), rat(v, m)) * (m - d + 1));
    }
  }
}

TEST(GeneratorQpm, AgreesWithExpansion) {
  for (auto name : {"ex75_generator.mat", "f16_generator.mat", "ex67b_generator.mat"}) {
    auto g = load_generator(name);
    auto a = from_generator(g);
    auto b = from_code_col(rmcode::expand_generator(g));
    ASSERT_TRUE(same_ranks(a, b)) << name;
    ASSERT_TRUE(denominators(a).is_qmatroid);
    ASSERT_EQ(a.rank(Subspace::zero(a.field(), a.ell())), 0);
  }
  auto m = from_generator(load_generator("f16_generator.mat"));
  EXPECT_EQ(m.ell(), 4);
  EXPECT_EQ(m.full_rank(), 2);
  std::mt19937_64 rng(3);
  for (auto ext : {Field::make(2, 3), Field::make(3, 2)}) {
    for (int t = 0; t < 10; ++t) {
      Mat gm = tu::random_mat(ext, 2, 3, rng);
      if (algebra::rank(gm) < 2) continue;
      rmcode::FqmGenerator g(gm);
      ASSERT_TRUE(same_ranks(from_generator(g), from_code_col(rmcode::expand_generator(g))));
    }
  }
}

TEST(Constructions, UniformPavingTrivial) {
  auto f = Field::make(2);
  for (int ell = 0; ell <= 4; ++ell)
    for (int k = 0; k <= ell; ++k) EXPECT_TRUE(verify_axioms(uniform(f, ell, k)).ok);
  EXPECT_TRUE(same_ranks(free_qmatroid(f, 3), uniform(f, 3, 3)));
  EXPECT_TRUE(verify_axioms(trivial(f, 4)).ok);
  EXPECT_EQ(denominators(trivial(f, 3)).principal, 1);
  EXPECT_FALSE(is_exact(trivial(f, 3)));

  std::vector<Subspace> spread{algebra::parse_subspace("1000,0100", f, 4), algebra::parse_subspace("0010,0001", f, 4),
                               algebra::parse_subspace("1001,0111", f, 4), algebra::parse_subspace("1011,0110", f, 4)};
  auto sp = paving(f, 4, 2, spread);
  EXPECT_TRUE(verify_axioms(sp).ok);
  EXPECT_TRUE(denominators(sp).is_qmatroid);
  EXPECT_EQ(sp.rank(spread[2]), 1);
  EXPECT_EQ(sp.rank(algebra::parse_subspace("1000,0010", f, 4)), 2);
  EXPECT_THROW(paving(f, 4, 2, {spread[0], algebra::parse_subspace("1000,0010", f, 4)}), std::invalid_argument);
  EXPECT_THROW(paving(f, 4, 2, {algebra::parse_subspace("1000", f, 4)}), std::invalid_argument);
  EXPECT_THROW(uniform(f, 3, 4), std::invalid_argument);
}

TEST(Axioms, CodeQpmsPassExhaustively) {
  std::mt19937_64 rng(21);
  auto f = Field::make(2);
  for (int t = 0; t < 30; ++t) {
    auto c = random_small_code(f, 5, 20, rng);
    auto m = from_code_col(c);
    auto rep = verify_axioms(m);
    ASSERT_TRUE(rep.ok) << rep.axiom << " " << rep.detail;
    ASSERT_TRUE(rep.r3_all_pairs);
  }
}

TEST(Axioms, PerturbationsAreCaught) {
  auto f = Field::make(2);
  auto m = uniform(f, 3, 2);
  auto t = m.table();
  const auto& lat = m.lattice();
  t[lat.dim_begin(1)] = rat(3, 2);
  auto bad = QPolymatroid::from_table(f, 3, t, "perturbed");
  auto rep = verify_axioms(bad);
  EXPECT_FALSE(rep.ok);
  EXPECT_EQ(rep.axiom, "R1");

  // Raising a 2-space above its covers breaks monotonicity.
  t = uniform(f, 3, 1).table();
  t[lat.dim_begin(2)] = 2;
  rep = verify_axioms(QPolymatroid::from_table(f, 3, t, "perturbed"));
  EXPECT_FALSE(rep.ok);
  EXPECT_EQ(rep.axiom, "R2");

  // Lowering one 2-space of U_2 breaks submodularity only.
  t = uniform(f, 3, 2).table();
  t[lat.dim_begin(2)] = 1;
  rep = verify_axioms(QPolymatroid::from_table(f, 3, t, "perturbed"));
  EXPECT_TRUE(rep.ok) << "a single dependent line is still paving";
  t[lat.dim_begin(2) + 1] = 1;
  rep = verify_axioms(QPolymatroid::from_table(f, 3, t, "perturbed"));
  EXPECT_FALSE(rep.ok);
  EXPECT_EQ(rep.axiom, "R3");
  EXPECT_FALSE(rep.detail.empty());
}

TEST(Axioms, DiamondModeAgreesWithAllPairs) {
  std::mt19937_64 rng(22);
  auto f = Field::make(2);
  int failures = 0;
  for (int t = 0; t < 300; ++t) {
    int ell = 2 + static_cast<int>(rng() % 3);
    auto c = tu::random_code(f, ell, 2, 1 + static_cast<int>(rng() % (2 * ell)), rng);
    auto tab = from_code_col(c).table();
    int changes = 1 + static_cast<int>(rng() % 3);
    for (int k = 0; k < changes; ++k) {
      std::size_t i = 1 + rng() % (tab.size() - 1);
      QRat delta = rat(1, 2) * ((rng() & 1) ? 1 : -1);
      if (tab[i] + delta >= 0) tab[i] += delta;
    }
    auto m = QPolymatroid::from_table(f, ell, tab, "perturbed");
    auto full = verify_axioms(m);
    auto local = verify_axioms(m, 0);
    ASSERT_FALSE(local.r3_all_pairs);
    ASSERT_EQ(full.ok, local.ok);
    if (!full.ok) {
      ASSERT_EQ(full.axiom, local.axiom);
      ++failures;
    }
  }
  EXPECT_GT(failures, 50);
}

TEST(Dual, UniformDuals) {
  auto f = Field::make(2);
  for (int ell = 1; ell <= 4; ++ell)
    for (int k = 0; k <= ell; ++k) ASSERT_TRUE(same_ranks(dual(uniform(f, ell, k)), uniform(f, ell, ell - k)));
  auto f3 = Field::make(3);
  EXPECT_TRUE(same_ranks(dual(uniform(f3, 3, 1)), uniform(f3, 3, 2)));
}

TEST(Dual, TraceDualityAndBiduality) {
  std::mt19937_64 rng(31);
  for (auto f : {Field::make(2), Field::make(3)}) {
    for (int t = 0; t < 60; ++t) {
      auto c = random_small_code(f, 4, f->q() == 2 ? 16 : 6, rng);
      if (c.dim() == c.n() * c.m()) continue;
      auto m = from_code_col(c);
      auto md = dual(m);
      ASSERT_TRUE(same_ranks(md, from_code_col(rmcode::code_dual(c))));
      ASSERT_TRUE(same_ranks(dual(md), m));
      // integer denominators agree; a non-integral principal one does not carry over
      auto dm = denominators(m).principal, dd = denominators(md).principal;
      ASSERT_EQ(QRat(dm.get_num()), QRat(dd.get_num()));
      if (is_integral(dm) && is_integral(dd)) ASSERT_EQ(dm, dd);
      ASSERT_TRUE(is_integral(dd) || is_integral(dm));
      ASSERT_TRUE(verify_axioms(md).ok);
    }
  }
}

TEST(Dual, FormIndependenceWitness) {
  std::mt19937_64 rng(32);
  for (auto f : {Field::make(2), Field::make(3)}) {
    for (int t = 0; t < 30; ++t) {
      auto c = random_small_code(f, 4, 12, rng);
      auto m = from_code_col(c);
      Mat s = random_invertible(f, c.n(), rng);
      GramMatrix qh(s * s.transpose());
      GramMatrix qi = GramMatrix::identity(f, c.n());
      Mat a = qh.matrix() * *algebra::inverse(qi.matrix());
      ASSERT_TRUE(check_isomorphism(dual(m, qh), dual(m, qi), a));
      ASSERT_TRUE(same_ranks(dual(dual(m, qh), qh), m));
    }
  }
}

TEST(Dual, EquivalenceTransfers) {
  std::mt19937_64 rng(33);
  auto f = Field::make(2);
  for (int t = 0; t < 30; ++t) {
    auto c = random_small_code(f, 4, 12, rng);
    Mat x = random_invertible(f, c.n(), rng);
    Mat y = random_invertible(f, c.m(), rng);
    auto a = from_code_col(c);
    auto b = from_code_col(rmcode::apply_equivalence(c, x, y));
    Mat w = *algebra::inverse(x);
    ASSERT_TRUE(check_isomorphism(a, b, w));
    ASSERT_TRUE(check_isomorphism(dual(a), dual(b), algebra::inverse(w)->transpose()));
  }
}

TEST(Denominators, ExamplesAndRescaling) {
  auto f = Field::make(2);
  EXPECT_EQ(denominators(uniform(f, 3, 2)).principal, 1);
  auto c1 = from_code_col(load("ex310_c1.code"));
  EXPECT_EQ(denominators(c1).principal, 2);
  EXPECT_FALSE(denominators(c1).is_qmatroid);
  EXPECT_TRUE(is_exact(c1));

  auto c = load("ex312_c.code");
  auto m = from_code_col(c);
  EXPECT_FALSE(is_exact(m));
  EXPECT_EQ(m.full_rank(), rat(4, 3));
  EXPECT_EQ(exactify_factor(m), rat(2, 3));
  // Non-exactness matches C^perp(V,c) != 0 on every 1-space.
  auto dual = rmcode::code_dual(c);
  const auto& lat = m.lattice();
  for (std::size_t i = lat.dim_begin(1); i < lat.dim_end(1); ++i) EXPECT_GT(rmcode::shorten_col_dim(dual, lat.at(i)), 0);
  auto scaled = rescale(m, rat(3, 2));
  EXPECT_TRUE(is_exact(scaled));
  EXPECT_TRUE(same_ranks(scaled, from_code_col(load("ex312_cprime.code"))));
  EXPECT_TRUE(same_ranks(exactify(m), scaled));
  EXPECT_EQ(denominators(m).principal, QRat(3));
  EXPECT_EQ(denominators(m).principal * m.full_rank(), QRat(4));
  EXPECT_THROW(rescale(m, 3), PropertyViolation);
}

TEST(Denominators, ExactnessMatchesDualShortenings) {
  std::mt19937_64 rng(34);
  auto f = Field::make(2);
  int non_exact = 0;
  for (int t = 0; t < 200; ++t) {
    auto c = random_small_code(f, 4, 12, rng);
    if (c.dim() == c.n() * c.m()) continue;
    auto m = from_code_col(c);
    auto d = rmcode::code_dual(c);
    bool all_nonzero = true;
    for (const auto& v : algebra::enumerate_subspaces(f, c.n(), 1)) all_nonzero = all_nonzero && rmcode::shorten_col_dim(d, v) > 0;
    ASSERT_EQ(!is_exact(m), all_nonzero);
    non_exact += !is_exact(m);
  }
  EXPECT_GT(non_exact, 0);
}

TEST(Equivalence, ExamplesAndWitnesses) {
  auto m1 = from_code_col(load("ex310_c1.code"));
  auto m2 = from_code_col(load("ex310_c2.code"));
  auto r = find_equivalence(m1, m2);
  EXPECT_EQ(r.verdict, Verdict::no);
  EXPECT_NE(r.reason.find("histogram"), std::string::npos);
  auto self = find_equivalence(m1, m1);
  ASSERT_EQ(self.verdict, Verdict::yes);
  EXPECT_TRUE(check_isomorphism(m1, m1, *self.witness));
  EXPECT_TRUE(check_isomorphism(m1, m1, Mat::identity(m1.field(), 5)));

  std::mt19937_64 rng(41);
  auto c = load("ex310_c1.code");
  Mat x = random_invertible(c.field(), 5, rng);
  Mat y = random_invertible(c.field(), 2, rng);
  auto m3 = from_code_col(rmcode::apply_equivalence(c, x, y));
  EXPECT_TRUE(check_isomorphism(m1, m3, *algebra::inverse(x)));
  auto r3 = find_equivalence(m1, m3);
  ASSERT_EQ(r3.verdict, Verdict::yes);
  EXPECT_TRUE(check_isomorphism(m1, m3, *r3.witness));

  auto tiny = find_equivalence(m1, m3, 2);
  EXPECT_EQ(tiny.verdict, Verdict::unknown);
}

TEST(Equivalence, AgreesWithGroupEnumeration) {
  std::mt19937_64 rng(42);
  struct Case {
    FieldPtr f;
    int ell, m;
  };
  for (auto cs : {Case{Field::make(2), 3, 2}, Case{Field::make(3), 2, 2}, Case{Field::make(2), 3, 1}}) {
    auto group = all_invertible(cs.f, cs.ell);
    int yes = 0, no = 0;
    for (int t = 0; t < 60; ++t) {
      auto a = from_code_col(tu::random_code(cs.f, cs.ell, cs.m, 1 + static_cast<int>(rng() % (cs.ell * cs.m)), rng));
      auto b = from_code_col(tu::random_code(cs.f, cs.ell, cs.m, 1 + static_cast<int>(rng() % (cs.ell * cs.m)), rng));
      bool brute = false;
      for (const auto& g : group)
        if (check_isomorphism(a, b, g)) {
          brute = true;
          break;
        }
      auto r = find_equivalence(a, b);
      ASSERT_NE(r.verdict, Verdict::unknown);
      ASSERT_EQ(r.verdict == Verdict::yes, brute);
      if (brute) {
        ASSERT_TRUE(check_isomorphism(a, b, *r.witness));
        ++yes;
      } else {
        ++no;
      }
    }
    EXPECT_GT(yes, 0);
    EXPECT_GT(no, 0);
  }
}

TEST(Minors, TrivialCases) {
  auto f = Field::make(2);
  auto m = from_code_col(load("ex310_c1.code"));
  auto zero = Subspace::zero(f, 5);
  auto full = Subspace::full(f, 5);
  EXPECT_TRUE(same_ranks(delete_space(m, zero), m));
  EXPECT_TRUE(same_ranks(contract(m, zero), m));
  auto cf = contract(m, full);
  EXPECT_EQ(cf.ell(), 0);
  EXPECT_EQ(cf.rank(Subspace::zero(f, 0)), 0);
  EXPECT_TRUE(verify_axioms(cf).ok);
  auto r = restrict_to(m, full);
  EXPECT_TRUE(same_ranks(r, m));
}

TEST(Minors, AxiomsHold) {
  std::mt19937_64 rng(51);
  auto f = Field::make(2);
  for (int t = 0; t < 30; ++t) {
    auto c = random_small_code(f, 5, 15, rng);
    auto m = from_code_col(c);
    auto x = random_subspace(f, c.n(), rng);
    ASSERT_TRUE(verify_axioms(contract(m, x)).ok);
    ASSERT_TRUE(verify_axioms(delete_space(m, x)).ok);
    ASSERT_TRUE(verify_axioms(restrict_to(m, x)).ok);
    Mat y = algebra::pivot_complement(x);
    Mat comp = (y.rows() ? y : Mat(f, 0, c.n()));
    ASSERT_TRUE(same_ranks(contract(m, x), contract_with_complement(m, x, comp)));
  }
}

TEST(Minors, PunctureAndShortenCorrespondence) {
  std::mt19937_64 rng(52);
  auto f = Field::make(2);
  int done = 0;
  while (done < 40) {
    auto c = random_small_code(f, 4, 12, rng);
    auto x = random_subspace(f, c.n(), rng);
    const int u = x.dim();
    if (u == 0 || u == c.n()) continue;
    auto m = from_code_col(c);
    Subspace xp = algebra::orthogonal(x);
    Mat d = xp.basis();
    Mat a = algebra::pivot_complement(xp).vstack(d);
    auto pc = rmcode::puncture(c, a, u);
    auto del = delete_space(m, x);
    ASSERT_TRUE(same_ranks(del, pc.is_zero() ? trivial(f, c.n() - u) : from_code_col(pc)));

    auto sc = rmcode::shorten_sigma(c, algebra::inverse(a)->transpose(), u);
    auto con = contract(m, x);
    auto target = sc.is_zero() ? trivial(f, c.n() - u) : from_code_col(sc);
    Mat w = algebra::pivot_complement(x) * d.transpose();
    ASSERT_TRUE(check_isomorphism(con, target, w));
    ++done;
  }
}

TEST(Minors, SplitFormDuality) {
  std::mt19937_64 rng(53);
  auto f = Field::make(2);
  for (int t = 0; t < 30; ++t) {
    auto c = random_small_code(f, 4, 12, rng);
    auto m = from_code_col(c);
    auto x = random_subspace(f, c.n(), rng);
    // Random complement of X.
    Mat y;
    while (true) {
      y = tu::random_mat(f, c.n() - x.dim(), c.n(), rng);
      if (algebra::rank(x.basis().vstack(y)) == c.n()) break;
    }
    auto s = split_form_duality(m, x, y);
    ASSERT_TRUE(check_isomorphism(s.contraction_of_dual, s.dual_of_deletion, s.witness));
    ASSERT_EQ(algebra::orthogonal(x, s.form), Subspace::span(y));
  }
}

TEST(Io, JsonRoundTrip) {
  auto m = from_code_col(load("ex312_c.code"));
  std::stringstream ss(to_json(m).dump());
  auto back = read_qpm_json(ss);
  EXPECT_TRUE(same_ranks(m, back));
  EXPECT_EQ(back.provenance(), m.provenance());
  auto f4 = Field::make(2, 2);
  auto u = uniform(f4, 2, 1);
  std::stringstream s2(to_json(u).dump(1));
  EXPECT_TRUE(same_ranks(read_qpm_json(s2), u));

  std::stringstream bad("{\n\"format\": \"qpm-table\",\n\"q\": 2,\n\"ell\": 2,\n\"ranks\": [}");
  try {
    read_qpm_json(bad);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 5);
  }
  std::stringstream paving_json(R"({"format": "qpm-paving", "q": 2, "ell": 4, "k": 2, "spaces": ["1000,0100", "0010,0001"]})");
  auto p = read_qpm_json(paving_json);
  EXPECT_EQ(p.rank(algebra::parse_subspace("0010,0001", p.field(), 4)), 1);
}
