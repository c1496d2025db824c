#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qpoly/cli/cli.hpp"
#include "qpoly/matroid/matroid.hpp"
#include "qpoly/qpm/io.hpp"
#include "qpoly/rmcode/fqm.hpp"
#include "test_util.hpp"

using namespace qpoly;
namespace tu = qpoly::testing;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
  nlohmann::json json() const { return nlohmann::json::parse(out); }
};

Run qpoly_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "qpoly");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / "qpoly_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string write_file(const std::string& name, const std::string& text) {
  auto p = scratch(name);
  std::ofstream(p) << text;
  return p.string();
}

std::string write_code_file(const std::string& name, const rmcode::RankMetricCode& c) {
  std::ostringstream os;
  rmcode::write_code(os, c);
  return write_file(name, os.str());
}

}  // namespace

TEST(Cli, CodeInfo) {
  auto r = qpoly_cli({"code-info", tu::fixture("ex310_c1.code")});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = r.json();
  EXPECT_EQ(j["d"], 2);
  EXPECT_EQ(j["mrd"], true);
  EXPECT_EQ(j["k"], 5);
  EXPECT_EQ(j["dual_dim"], 5);
  EXPECT_EQ(qpoly_cli({"code-info", tu::fixture("ex75_generator.mat")}).json()["k"], 18);

  auto zero = write_file("zero.code", "2 2 2 1\nq=2^1 rows=2 cols=2 modulus=none\n0 0\n0 0\n");
  EXPECT_EQ(qpoly_cli({"code-info", zero}).code, cli::parse_error);
  auto bad = write_file("bad.code", "2 2 2 1\nq=2^1 rows=2 cols=2 modulus=none\n0 1\n0 7\n");
  auto rb = qpoly_cli({"code-info", bad});
  EXPECT_EQ(rb.code, cli::parse_error);
  EXPECT_NE(rb.err.find("line 4"), std::string::npos) << rb.err;
  EXPECT_EQ(qpoly_cli({"code-info", "/nonexistent/file.code"}).code, cli::parse_error);
  EXPECT_EQ(qpoly_cli({"no-such-command"}).code, cli::parse_error);
}

TEST(Cli, QpmAnalyses) {
  auto r = qpoly_cli({"qpm", tu::fixture("ex310_c1.code"), "--histogram", "--flats"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = r.json();
  EXPECT_EQ(j["histogram"]["2"], (nlohmann::json{{"1", 1}, {"3/2", 28}, {"2", 126}}));
  EXPECT_EQ(j["flats"]["count"], 81);
  EXPECT_EQ(j["flats"]["hyperplanes"], 29);
  EXPECT_EQ(j["flats"]["cl4"]["ok"], false);
  EXPECT_EQ(j["flats"]["f3"]["ok"], false);
  EXPECT_TRUE(j["flats"]["cl4"].contains("witness"));

  auto mrd = rmcode::code_transpose(rmcode::gabidulin(algebra::Field::make(2, 7), 6, 4));
  auto path = write_code_file("mrd76.code", mrd);
  auto d = qpoly_cli({"qpm", path, "--denominator"}).json();
  EXPECT_EQ(d["full_rank"], "7/2");
  EXPECT_EQ(d["denominator"]["principal"], "2");

  auto spread = qpoly_cli({"qpm", tu::fixture("spread_qmatroid.json"), "--axioms", "--flats"});
  EXPECT_EQ(spread.code, 0);
  EXPECT_EQ(spread.json()["axioms"]["ok"], true);

  auto w = qpoly_cli({"qpm", tu::fixture("spread_qmatroid.json"), "--weights"});
  EXPECT_EQ(w.code, cli::parse_error);

  auto capped = qpoly_cli({"repr-search", tu::fixture("f16_generator.mat"), "--m", "3", "--enum-cap", "8"});
  EXPECT_EQ(capped.code, cli::budget_exceeded);
  EXPECT_NE(capped.err.find("budget exceeded"), std::string::npos);
}

TEST(Cli, PropertyViolationExitCode) {
  auto dump = qpm::to_json(qpm::uniform(algebra::Field::make(2), 2, 1));
  for (auto& e : dump["ranks"])
    if (e["subspace"].size() == 1) {
      e["rank"] = "2";
      break;
    }
  auto path = write_file("broken.json", dump.dump());
  auto r = qpoly_cli({"qpm", path, "--axioms"});
  EXPECT_EQ(r.code, cli::property_violation);
  EXPECT_EQ(r.json()["axioms"]["ok"], false);
}

TEST(Cli, EquivalenceAndDiff) {
  auto r = qpoly_cli({"equiv", tu::fixture("ex310_c1.code"), tu::fixture("ex310_c2.code")});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.json()["verdict"], "no");
  auto same = qpoly_cli({"equiv", tu::fixture("ex312_c.code"), tu::fixture("ex312_c.code")});
  EXPECT_EQ(same.json()["verdict"], "yes");
  EXPECT_TRUE(same.json().contains("witness"));

  auto d = qpoly_cli({"diff", tu::fixture("ex310_c1.code"), tu::fixture("ex310_c2.code")}).json();
  EXPECT_EQ(d["equal"], false);
  EXPECT_GT(d["differences"].get<int>(), 0);
  EXPECT_EQ(qpoly_cli({"diff", tu::fixture("ex310_c1.code"), tu::fixture("spread_qmatroid.json")}).code, cli::parse_error);
}

TEST(Cli, DeleteThenDualizeMatchesDualizeThenContract) {
  std::mt19937_64 rng(21);
  auto f = algebra::Field::make(2);
  for (int t = 0; t < 5; ++t) {
    auto c = tu::random_code(f, 4, 3, 5, rng);
    auto code = write_code_file("minor_src.code", c);
    auto x = tu::random_subspace(f, 4, rng);
    std::string xs = x.is_zero() ? "0" : x.to_string();

    auto del = qpoly_cli({"minor", code, "--delete", xs});
    ASSERT_EQ(del.code, 0) << del.err;
    auto del_path = write_file("deleted.json", del.out);
    auto del_dual = qpoly_cli({"qpm", del_path, "--dual"});
    ASSERT_EQ(del_dual.code, 0) << del_dual.err;
    auto a = write_file("deleted_dual.json", del_dual.json()["dual"].dump());

    auto dual = qpoly_cli({"qpm", code, "--dual"});
    auto dual_path = write_file("dual.json", dual.json()["dual"].dump());
    auto con = qpoly_cli({"minor", dual_path, "--contract", xs});
    ASSERT_EQ(con.code, 0) << con.err;
    auto b = write_file("dual_contracted.json", con.out);

    auto eq = qpoly_cli({"equiv", a, b});
    EXPECT_EQ(eq.json()["verdict"], "yes") << xs;
  }
  auto r = qpoly_cli({"minor", tu::fixture("ex310_c1.code"), "--delete", "1000"});
  EXPECT_EQ(r.code, cli::parse_error);
  EXPECT_EQ(qpoly_cli({"minor", tu::fixture("ex310_c1.code")}).code, cli::parse_error);
}

TEST(Cli, ReprSearchAndSpread) {
  auto r = qpoly_cli({"repr-search", tu::fixture("f16_generator.mat"), "--m", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.json()["status"], "exhausted");
  EXPECT_EQ(r.json()["candidates_examined"], 4745);
  auto found = qpoly_cli({"repr-search", tu::fixture("f16_generator.mat"), "--m", "4", "--emit-witness"});
  EXPECT_EQ(found.json()["status"], "found");
  EXPECT_TRUE(found.json().contains("witness"));
  auto capped = qpoly_cli({"repr-search", tu::fixture("spread_qmatroid.json"), "--m", "3", "--budget", "10"});
  EXPECT_EQ(capped.code, cli::budget_exceeded);
  EXPECT_EQ(capped.json()["status"], "budget");

  auto s = qpoly_cli({"spread-obstruction", "--m", "1", "--format", "text"});
  EXPECT_EQ(s.code, 0);
  EXPECT_NE(s.out.find("candidates: 35"), std::string::npos);
  EXPECT_NE(s.out.find("survivors: 0"), std::string::npos);
}

TEST(Cli, WeightsFormats) {
  auto r = qpoly_cli({"weights", tu::fixture("ex310_c1.code"), "--format", "csv"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("transposed"), std::string::npos);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "i,a_c,a_r,a,b_c,b_r");
  auto j = qpoly_cli({"weights", tu::fixture("ex75_generator.mat"), "--flats"}).json();
  EXPECT_EQ(j["a_c"].size(), 18u);
  EXPECT_EQ(j["b_c"], j["a_c"]);
  EXPECT_EQ(j["transposed"], false);
}

TEST(Cli, DeterministicOutput) {
  std::vector<std::vector<std::string>> runs = {
      {"qpm", tu::fixture("ex310_c1.code"), "--histogram", "--flats", "--denominator", "--dual"},
      {"repr-search", tu::fixture("f16_generator.mat"), "--m", "4", "--emit-witness"},
      {"equiv", tu::fixture("ex312_c.code"), tu::fixture("ex312_c.code")},
      {"properties", "--count", "30", "--seed", "5"},
      {"spread-obstruction", "--m", "2"}};
  for (auto args : runs) {
    auto a = qpoly_cli(args);
    args.push_back("--threads");
    args.push_back("1");
    auto b = qpoly_cli(args);
    EXPECT_EQ(a.out, b.out) << args[0];
    EXPECT_EQ(a.code, b.code);
  }
  auto p = qpoly_cli({"properties", "--count", "100", "--seed", "9"}).json();
  EXPECT_EQ(p["trace_duality_violations"], 0);
  EXPECT_EQ(p["biduality_violations"], 0);
}

TEST(Cli, FixturesRoundTrip) {
  int seen = 0;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(QPOLY_FIXTURES)) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& p : files) {
    std::ifstream in(p);
    std::stringstream text;
    text << in.rdbuf();
    std::istringstream is(text.str());
    if (p.extension() == ".code") {
      auto c = rmcode::read_code(is);
      std::ostringstream os;
      rmcode::write_code(os, c);
      std::istringstream again(os.str());
      auto c2 = rmcode::read_code(again);
      EXPECT_EQ(c2.flat(), c.flat()) << p;
      ++seen;
    } else if (p.extension() == ".mat") {
      auto g = rmcode::read_generator(is);
      std::ostringstream os;
      rmcode::write_generator(os, g);
      std::istringstream again(os.str());
      auto g2 = rmcode::read_generator(again);
      EXPECT_EQ(g2.matrix(), g.matrix()) << p;
      EXPECT_EQ(g2.ext_field()->modulus(), g.ext_field()->modulus()) << p;
      ++seen;
    } else if (p.extension() == ".json") {
      auto j = nlohmann::json::parse(text.str());
      std::string fmt = j.value("format", "");
      if (fmt.rfind("matroid", 0) == 0) {
        auto m = matroid::from_json(j);
        EXPECT_EQ(matroid::from_json(nlohmann::json::parse(matroid::to_json(m).dump())), m) << p;
      } else {
        auto m = qpm::from_json(j);
        auto m2 = qpm::from_json(nlohmann::json::parse(qpm::to_json(m).dump()));
        EXPECT_TRUE(qpm::same_ranks(m, m2)) << p;
      }
      ++seen;
    }
  }
  EXPECT_GE(seen, 13);
}
