#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <fstream>
#include <numeric>

#include "qpoly/algebra/errors.hpp"
#include "qpoly/matroid/matroid.hpp"
#include "qpoly/qpm/io.hpp"
#include "test_util.hpp"

using namespace qpoly;
using namespace qpoly::matroid;
namespace tu = qpoly::testing;
using algebra::Field;
using algebra::Mat;

namespace {

PavingData load_paving(const std::string& name) {
  std::ifstream in(tu::fixture(name));
  return paving_from_json(nlohmann::json::parse(in));
}

ClassicalMatroid build(const PavingData& d) { return paving_matroid(d.ground, d.k, d.a); }

// Columns of G are the nonzero vectors of F_2^3, taken in the order perm.
Mat f2_plane_matrix(const std::vector<int>& perm) {
  auto f = Field::make(2);
  Mat g(f, 3, 7);
  for (int c = 0; c < 7; ++c)
    for (int r = 0; r < 3; ++r) g(r, c) = static_cast<algebra::Elem>((perm[c] + 1) >> (2 - r) & 1);
  return g;
}

std::vector<Mask> random_paving_family(int n, int k, std::mt19937_64& rng) {
  std::vector<Mask> a;
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (int t = 0; t < 8; ++t) {
    std::shuffle(idx.begin(), idx.end(), rng);
    Mask x = 0;
    for (int i = 0; i < k; ++i) x |= Mask{1} << idx[i];
    bool ok = true;
    for (Mask y : a) ok = ok && y != x && std::popcount(x & y) <= k - 2;
    if (ok) a.push_back(x);
  }
  return a;
}

}  // namespace

TEST(Matroid, NamedFixturesAreValid) {
  for (auto name : {"vamos.json", "fano.json", "non_fano.json", "non_pappus.json"}) {
    auto d = load_paving(name);
    auto m = build(d);
    auto rep = verify_axioms(m);
    EXPECT_TRUE(rep.ok) << name << " " << rep.axiom << " " << rep.detail;
    EXPECT_EQ(m.full_rank(), d.k);
    // circuits: the members of A and the (k+1)-sets containing none of them
    std::vector<Mask> expected = d.a;
    for (Mask x = 0; x < (Mask{1} << m.size()); ++x) {
      if (std::popcount(x) != d.k + 1) continue;
      bool contains = false;
      for (Mask y : d.a) contains = contains || (x & y) == y;
      if (!contains) expected.push_back(x);
    }
    std::sort(expected.begin(), expected.end());
    EXPECT_EQ(circuits(m), expected) << name;
  }
  EXPECT_EQ(load_paving("vamos.json").a.size(), 5u);
  EXPECT_EQ(load_paving("fano.json").a.size(), 7u);
  EXPECT_EQ(load_paving("non_fano.json").a.size(), 6u);
}

TEST(Matroid, PavingPreconditionsAndUniform) {
  EXPECT_EQ(paving_matroid(default_labels(5), 3, {}), uniform_matroid(5, 3));
  EXPECT_THROW(paving_matroid(default_labels(5), 3, {0b00111, 0b01011}), std::invalid_argument);
  EXPECT_THROW(paving_matroid(default_labels(5), 3, {0b0011}), std::invalid_argument);
  EXPECT_THROW(uniform_matroid(21, 2), BudgetExceeded);
  EXPECT_TRUE(verify_axioms(uniform_matroid(12, 5)).ok);
}

TEST(Matroid, AxiomViolationsAreReported) {
  auto r = uniform_matroid(4, 2).ranks();
  r[0b0011] = 3;
  EXPECT_EQ(verify_axioms(ClassicalMatroid(default_labels(4), r)).axiom, "R1");
  r = uniform_matroid(4, 2).ranks();
  r[0b0111] = 1;
  EXPECT_EQ(verify_axioms(ClassicalMatroid(default_labels(4), r)).axiom, "R2");
  r = uniform_matroid(4, 2).ranks();
  r[0b0011] = 1;
  r[0b0101] = 1;
  EXPECT_EQ(verify_axioms(ClassicalMatroid(default_labels(4), r)).axiom, "R3");
}

TEST(Matroid, Representations) {
  auto f3 = Field::make(3);
  Mat g = Mat::from_rows(f3, {{1, 0, 1, 1}, {0, 1, 1, 2}});
  EXPECT_TRUE(check_representation(uniform_matroid(4, 2), g, {0, 1, 2, 3}));
  EXPECT_FALSE(check_representation(uniform_matroid(4, 3), g, {0, 1, 2, 3}));
  EXPECT_TRUE(check_representation(ClassicalMatroid({}, {0}), Mat(f3, 0, 0), {}));

  // Over F_2 a simple rank-3 matroid on 7 elements uses each nonzero vector of
  // F_2^3 once, so trying all orders is exhaustive.
  auto fano = build(load_paving("fano.json"));
  auto non_fano = build(load_paving("non_fano.json"));
  std::vector<int> perm(7);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> id(7);
  std::iota(id.begin(), id.end(), 0);
  int fano_hits = 0, non_fano_hits = 0;
  do {
    Mat g2 = f2_plane_matrix(perm);
    fano_hits += check_representation(fano, g2, id);
    non_fano_hits += check_representation(non_fano, g2, id);
  } while (std::next_permutation(perm.begin(), perm.end()));
  EXPECT_EQ(fano_hits, 168);  // |GL_3(F_2)|
  EXPECT_EQ(non_fano_hits, 0);

  std::mt19937_64 rng(4);
  for (int t = 0; t < 300; ++t) EXPECT_FALSE(check_representation(fano, tu::random_mat(f3, 3, 7, rng), id));
  auto vamos = build(load_paving("vamos.json"));
  std::vector<int> id8(8);
  std::iota(id8.begin(), id8.end(), 0);
  for (auto f : {Field::make(2), f3})
    for (int t = 0; t < 200; ++t) EXPECT_FALSE(check_representation(vamos, tu::random_mat(f, 4, 8, rng), id8));
}

TEST(Matroid, InducedFromQMatroids) {
  std::mt19937_64 rng(2);
  auto f = Field::make(2);
  for (int k = 0; k <= 4; ++k) {
    auto b = tu::random_invertible(f, 4, rng);
    EXPECT_EQ(induced_matroid(qpm::uniform(f, 4, k), b), uniform_matroid(4, k));
  }
  EXPECT_EQ(induced_matroid(qpm::free_qmatroid(f, 3), Mat::identity(f, 3)), uniform_matroid(3, 3));
  std::ifstream in(tu::fixture("spread_qmatroid.json"));
  auto spread = qpm::read_qpm_json(in);
  EXPECT_EQ(induced_matroid(spread, Mat::identity(f, 4)), paving_matroid(default_labels(4), 2, {0b0011, 0b1100}));
  EXPECT_THROW(induced_matroid(qpm::from_code_col(tu::load_code("ex312_c.code")), Mat::identity(f, 4)), std::invalid_argument);
}

TEST(Matroid, LinkBetweenPavingConstructions) {
  auto f2 = Field::make(2);
  auto f3 = Field::make(3);
  std::mt19937_64 rng(6);
  EXPECT_TRUE(link_check(Mat::identity(f2, 4), 2, {0b0011, 0b1100}).ok);
  EXPECT_TRUE(link_check(Mat::identity(f2, 4), 2, {}).ok);
  auto fano = load_paving("fano.json");
  EXPECT_TRUE(link_check(Mat::identity(f3, 7), 3, fano.a).ok);
  EXPECT_TRUE(link_check(tu::random_invertible(f3, 7, rng), 3, fano.a).ok);
  for (auto name : {"vamos.json", "non_fano.json", "non_pappus.json"}) {
    auto d = load_paving(name);
    auto rep = link_check(tu::random_invertible(f2, static_cast<int>(d.ground.size()), rng), d.k, d.a);
    EXPECT_TRUE(rep.ok && rep.spaces_meet_properly) << name << " " << rep.detail;
  }
  for (int t = 0; t < 50; ++t) {
    int n = std::uniform_int_distribution<int>(2, 6)(rng);
    int k = std::uniform_int_distribution<int>(1, n)(rng);
    auto f = t % 2 ? f2 : f3;
    auto a = random_paving_family(n, k, rng);
    auto rep = link_check(tu::random_invertible(f, n, rng), k, a);
    ASSERT_TRUE(rep.ok && rep.spaces_meet_properly) << rep.detail;
  }
}

TEST(Matroid, JsonRoundTrip) {
  auto m = build(load_paving("non_pappus.json"));
  EXPECT_EQ(from_json(nlohmann::json::parse(to_json(m).dump())), m);
  std::istringstream bad("{\n\"format\": \"matroid-paving\",\n\"k\": 3,\n,\n}");
  try {
    read_matroid_json(bad);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4);
  }
  EXPECT_THROW(from_json(nlohmann::json::parse(R"({"format":"matroid-paving","ground":["a","b"],"k":1,"A":[["c"]]})")), ParseError);
}
