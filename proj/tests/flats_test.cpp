#include <gtest/gtest.h>

#include <fstream>
#include <set>

#include "qpoly/algebra/errors.hpp"
#include "qpoly/algebra/lattice.hpp"
#include "qpoly/algebra/textio.hpp"
#include "qpoly/flats/flats.hpp"
#include "qpoly/qpm/io.hpp"
#include "test_util.hpp"

using namespace qpoly;
using namespace qpoly::flats;
namespace tu = qpoly::testing;
using algebra::Field;
using qpm::QRat;

namespace {

QPolymatroid spread() {
  std::ifstream in(tu::fixture("spread_qmatroid.json"));
  return qpm::read_qpm_json(in);
}

// Closure straight from the definition, on Subspace values.
Subspace brute_closure(const QPolymatroid& m, const Subspace& v) {
  Subspace c = v;
  QRat r = m.rank(v);
  for (const auto& p : algebra::enumerate_subspaces(m.field(), m.ell(), 1))
    if (m.rank(algebra::sum(v, p)) == r) c = algebra::sum(c, p);
  return c;
}

std::set<std::size_t> flat_set(const FlatLattice& fl) { return {fl.index.begin(), fl.index.end()}; }

std::vector<Subspace> flat_list(const FlatLattice& fl) {
  std::vector<Subspace> out;
  for (std::size_t i = 0; i < fl.size(); ++i) out.push_back(fl.at(i));
  return out;
}

}  // namespace

TEST(Flats, CodeQpmCountsAndFailures) {
  auto m = qpm::from_code_col(tu::load_code("ex310_c1.code"));
  auto fl = flats_all(m);
  EXPECT_EQ(fl.size(), 81u);
  EXPECT_EQ(hyperplanes(fl).size(), 29u);
  EXPECT_TRUE(closure_axioms_check(fl).ok());
  auto rep = qmatroid_axioms_check(fl);
  EXPECT_FALSE(rep.cl4.ok);
  EXPECT_FALSE(rep.f3.ok);
  EXPECT_FALSE(rep.hyperplane_ranks.ok);
  EXPECT_GT(rep.hyperplane_rank_values.size(), 1u);
  EXPECT_FALSE(rep.cl4.witness.empty());
  EXPECT_FALSE(rep.f3.witness.empty());
}

TEST(Flats, Cl4FailureConfirmedByBruteForce) {
  auto m = qpm::from_code_col(tu::load_code("ex310_c1.code"));
  const auto pts = algebra::enumerate_subspaces(m.field(), 5, 1);
  bool found = false;
  for (const auto& v : algebra::enumerate_subspaces(m.field(), 5)) {
    auto cv = brute_closure(m, v);
    for (const auto& x : pts) {
      if (cv.contains(x)) continue;
      auto cx = brute_closure(m, algebra::sum(v, x));
      for (const auto& y : pts) {
        if (cv.contains(y)) continue;
        if (cx.contains(y) && !brute_closure(m, algebra::sum(v, y)).contains(x)) found = true;
      }
      if (found) break;
    }
    if (found) break;
  }
  EXPECT_TRUE(found);
}

TEST(Flats, ClosureMatchesDefinition) {
  std::mt19937_64 rng(5);
  auto f = Field::make(2);
  std::vector<QPolymatroid> ms{qpm::from_code_col(tu::load_code("ex310_c1.code")), qpm::uniform(f, 4, 2), spread()};
  for (int t = 0; t < 6; ++t) ms.push_back(qpm::from_code_col(tu::random_small_code(f, 4, 12, rng)));
  for (const auto& m : ms) {
    for (const auto& v : m.lattice().all()) {
      auto c = closure(m, v);
      ASSERT_EQ(c, brute_closure(m, v));
      ASSERT_EQ(c, closure_fixpoint(m, v));
      ASSERT_EQ(m.rank(c), m.rank(v));
    }
  }
}

TEST(Flats, ClosureAxiomsAndRankRecovery) {
  std::mt19937_64 rng(8);
  for (auto f : {Field::make(2), Field::make(3)}) {
    for (int t = 0; t < 12; ++t) {
      auto m = qpm::from_code_col(tu::random_small_code(f, f->q() == 2 ? 4 : 3, f->q() == 2 ? 12 : 6, rng));
      auto fl = flats_all(m);
      auto rep = closure_axioms_check(fl);
      ASSERT_TRUE(rep.ok()) << rep.cl2.witness << rep.f2.witness << rep.intersection_formula.witness;
      ASSERT_TRUE(qpm::same_ranks(from_flat_ranks(fl), m));
      for (std::size_t i = 0; i < fl.size(); ++i) ASSERT_TRUE(is_flat(m, fl.at(i)));
    }
  }
}

TEST(Flats, Uniform) {
  for (auto f : {Field::make(2), Field::make(3)}) {
    for (int k = 1; k <= 3; ++k) {
      auto m = qpm::uniform(f, 3, k);
      auto fl = flats_all(m);
      std::size_t expected = 1;
      for (int d = 0; d < k; ++d) expected += algebra::gaussian_binomial(3, d, f->q());
      if (k == 3) expected = algebra::subspace_count(3, f->q());
      EXPECT_EQ(fl.size(), expected);
      for (std::size_t i = 0; i < fl.size(); ++i) EXPECT_TRUE(fl.at(i).dim() < k || fl.at(i).is_full());
      for (const auto& v : m.lattice().all()) EXPECT_EQ(closure(m, v), v.dim() < k ? v : Subspace::full(f, 3));
      EXPECT_TRUE(qmatroid_axioms_check(fl).ok());
      EXPECT_TRUE(qpm::same_ranks(qmatroid_from_flats(f, 3, flat_list(fl)), m));
    }
  }
}

TEST(Flats, FreeQMatroidEverySubspaceIsFlat) {
  auto f = Field::make(2);
  auto m = qpm::free_qmatroid(f, 4);
  EXPECT_EQ(flats_all(m).size(), m.lattice().size());
}

TEST(Flats, SpreadQMatroid) {
  auto m = spread();
  auto fl = flats_all(m);
  EXPECT_TRUE(closure_axioms_check(fl).ok());
  auto rep = qmatroid_axioms_check(fl);
  EXPECT_TRUE(rep.ok()) << rep.cl4.witness << rep.f3.witness << rep.semimodular.witness << rep.chains.witness;
  ASSERT_EQ(rep.hyperplane_rank_values.size(), 1u);
  EXPECT_EQ(rep.hyperplane_rank_values[0], 1);
  // the spread lines are rank-1 flats, so they are hyperplanes
  for (auto s : {"1000,0100", "1011,0110"}) {
    auto v = algebra::parse_subspace(s, m.field(), 4);
    auto id = fl.id_of(v);
    auto hs = hyperplanes(fl);
    EXPECT_NE(std::find(hs.begin(), hs.end(), id), hs.end());
  }
  auto heights = chain_heights(fl);
  for (std::size_t i = 0; i < fl.size(); ++i) EXPECT_EQ(QRat(heights[i]), fl.rank(i));
  EXPECT_TRUE(qpm::same_ranks(qmatroid_from_flats(m.field(), 4, flat_list(fl)), m));
}

TEST(Flats, SameFlatsAsAQMatroid) {
  auto m = qpm::from_code_col(tu::load_code("ex67b.code"));
  auto mg = qpm::from_generator(tu::load_generator("ex67b_generator.mat"));
  EXPECT_FALSE(qpm::denominators(m).is_qmatroid);
  EXPECT_TRUE(qpm::denominators(mg).is_qmatroid);
  auto fl = flats_all(m), flg = flats_all(mg);
  EXPECT_EQ(flat_set(fl), flat_set(flg));
  for (const auto& v : m.lattice().all()) EXPECT_EQ(closure(m, v), closure(mg, v));
  EXPECT_TRUE(closure_axioms_check(fl).ok());
  EXPECT_TRUE(qmatroid_axioms_check(fl).cl4.ok);
  EXPECT_TRUE(qmatroid_axioms_check(fl).f3.ok);
  auto rebuilt = qmatroid_from_flats(m.field(), 3, flat_list(fl));
  EXPECT_TRUE(qpm::same_ranks(rebuilt, mg));
  EXPECT_FALSE(qpm::same_ranks(rebuilt, m));
}

TEST(Flats, LatticeOperations) {
  auto m = spread();
  auto fl = flats_all(m);
  for (std::uint32_t f = 0; f < fl.size(); ++f) {
    EXPECT_EQ(meet(fl, fl.top, f), f);
    EXPECT_EQ(join(fl, fl.bottom, f), f);
    for (auto c : covers(fl, f)) EXPECT_TRUE(fl.at(c).contains(fl.at(f)));
  }
  auto hs = hyperplanes(fl);
  ASSERT_GE(hs.size(), 2u);
  EXPECT_EQ(join(fl, hs[0], hs[1]), fl.top);
  EXPECT_EQ(chain_height(fl, fl.top), 2);
  EXPECT_EQ(chain_height(fl, fl.bottom), 0);
}

TEST(Flats, ReconstructionRejectsBadInput) {
  auto f = Field::make(2);
  auto fl = flats_all(qpm::from_code_col(tu::load_code("ex310_c1.code")));
  EXPECT_THROW(qmatroid_from_flats(f, 5, flat_list(fl)), PropertyViolation);
  // two lines whose intersection is missing
  std::vector<Subspace> bad{algebra::parse_subspace("100,010", f, 3), algebra::parse_subspace("100,001", f, 3), Subspace::full(f, 3)};
  EXPECT_THROW(qmatroid_from_flats(f, 3, bad), PropertyViolation);
  EXPECT_THROW(qmatroid_from_flats(f, 3, {Subspace::zero(f, 3)}), PropertyViolation);
  // minimal chain {0, E} is U_1
  auto u1 = qmatroid_from_flats(f, 2, {Subspace::zero(f, 2), Subspace::full(f, 2)});
  EXPECT_TRUE(qpm::same_ranks(u1, qpm::uniform(f, 2, 1)));
}

TEST(Flats, GeneratorQMatroidsPassAllChecks) {
  for (auto name : {"f16_generator.mat", "ex67b_generator.mat"}) {
    auto fl = flats_all(qpm::from_generator(tu::load_generator(name)));
    auto rep = qmatroid_axioms_check(fl);
    EXPECT_TRUE(rep.ok()) << name << rep.cl4.witness << rep.f3.witness << rep.semimodular.witness;
    EXPECT_TRUE(closure_axioms_check(fl).ok());
  }
}

TEST(Flats, JsonRoundTrip) {
  auto fl = flats_all(spread());
  auto j = to_json(fl);
  EXPECT_EQ(j["nodes"].size(), fl.size());
  algebra::FieldPtr f;
  int ell = 0;
  auto back = flats_from_json(nlohmann::json::parse(j.dump()), &f, &ell);
  EXPECT_EQ(ell, 4);
  EXPECT_EQ(back, flat_list(fl));
  EXPECT_THROW(flats_from_json(nlohmann::json::object()), ParseError);
}
