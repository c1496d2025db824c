#include "qpoly/cli/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "qpoly/algebra/budget.hpp"
#include "qpoly/algebra/errors.hpp"
#include "qpoly/algebra/textio.hpp"
#include "qpoly/flats/flats.hpp"
#include "qpoly/qpm/equivalence.hpp"
#include "qpoly/qpm/io.hpp"
#include "qpoly/qpm/minors.hpp"
#include "qpoly/repr/reprsearch.hpp"
#include "qpoly/weights/weights.hpp"

namespace qpoly::cli {

namespace {

using Json = nlohmann::ordered_json;
using algebra::Mat;
using qpm::QPolymatroid;
using rmcode::RankMetricCode;

Json ordered(const nlohmann::json& j) { return Json::parse(j.dump()); }

struct Input {
  std::string path;
  std::optional<RankMetricCode> code;
  std::optional<rmcode::FqmGenerator> gen;
  std::optional<QPolymatroid> qpm;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Reinterprets the element indices of `g` over GF(p^e) with another modulus.
rmcode::FqmGenerator with_modulus(const rmcode::FqmGenerator& g, const std::string& modulus) {
  const auto& f = *g.ext_field();
  auto field = algebra::parse_field(std::to_string(f.p()) + "^" + std::to_string(f.e()), modulus);
  if (field->e() != f.e()) throw ParseError("modulus override does not match the declared field degree");
  return rmcode::FqmGenerator(Mat(field, g.k(), g.n(), g.matrix().data()));
}

Input load(const std::string& path, const std::string& modulus) {
  Input in{path, {}, {}, {}};
  const std::string text = slurp(path);
  std::istringstream lines(text);
  std::string first;
  while (std::getline(lines, first)) {
    auto p = first.find_first_not_of(" \t\r");
    if (p == std::string::npos || first[p] == '#') continue;
    first = first.substr(p);
    break;
  }
  std::istringstream is(text);
  if (!first.empty() && first[0] == '{') {
    if (!modulus.empty()) throw ParseError("--modulus applies to generator files only");
    try {
      in.qpm = qpm::from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::parse_error& e) {
      int line = 1;
      for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) line += text[i] == '\n';
      throw ParseError(e.what(), line);
    }
  } else if (first.rfind("q=", 0) == 0) {
    in.gen = rmcode::read_generator(is);
    if (!modulus.empty()) in.gen = with_modulus(*in.gen, modulus);
    in.code = rmcode::expand_generator(*in.gen);
  } else {
    if (!modulus.empty()) throw ParseError("--modulus applies to generator files only");
    in.code = rmcode::read_code(is);
  }
  return in;
}

QPolymatroid column_qpm(const Input& in) {
  if (in.qpm) return *in.qpm;
  if (in.gen) return qpm::from_generator(*in.gen);
  return qpm::from_code_col(*in.code);
}

const RankMetricCode& need_code(const Input& in, const std::string& what) {
  if (!in.code) throw std::invalid_argument(what + " needs a code or generator file, not a q-PM");
  return *in.code;
}

Json rows_json(const Mat& m) {
  Json rows = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    std::string s;
    for (int c = 0; c < m.cols(); ++c) s += (c ? " " : "") + std::to_string(m(r, c));
    rows.push_back(s);
  }
  return rows;
}

std::string scalar_text(const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array()) {
    bool scalars = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
    if (scalars) {
      std::string s;
      for (const auto& e : j) s += (s.empty() ? "" : " ") + scalar_text(e);
      out.emplace_back(prefix, s);
    } else {
      for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), out);
    }
  } else {
    out.emplace_back(prefix, scalar_text(j));
  }
}

// Restores the process-wide caps when a run ends.
struct CapGuard {
  int enum_bits = algebra::enum_cap_bits();
  int threads = algebra::worker_threads();
  std::uint64_t lattice = algebra::lattice_size_cap();
  ~CapGuard() {
    algebra::set_enum_cap_bits(enum_bits);
    algebra::set_worker_threads(threads);
    algebra::set_lattice_size_cap(lattice);
  }
};

struct Options {
  std::string format = "json";
  int threads = 0;
  int enum_cap = 0;
  std::uint64_t seed = 1;
  std::string modulus;
  std::uint64_t node_budget = 200'000'000;
};

void emit(std::ostream& out, const Json& j, const Options& o) {
  if (o.format == "json") {
    out << j.dump(2) << '\n';
    return;
  }
  std::vector<std::pair<std::string, std::string>> kv;
  flatten(j, "", kv);
  for (const auto& [k, v] : kv) out << k << (o.format == "csv" ? "," : ": ") << v << '\n';
}

Json qpm_summary(const QPolymatroid& m) {
  return Json{{"q", m.field()->q()}, {"ell", m.ell()}, {"full_rank", qpm::to_string(m.full_rank())}, {"provenance", m.provenance()}};
}

Json histogram_json(const QPolymatroid& m) {
  Json h = Json::object();
  auto hist = qpm::histogram(m);
  for (std::size_t d = 0; d < hist.size(); ++d) {
    Json layer = Json::object();
    for (const auto& [v, c] : hist[d]) layer[qpm::to_string(v)] = c;
    h[std::to_string(d)] = layer;
  }
  return h;
}

Json check_json(const flats::Check& c) {
  Json j{{"ok", c.ok}};
  if (!c.ok) j["witness"] = c.witness;
  return j;
}

Json flats_json(const QPolymatroid& m) {
  auto lat = flats::flats_all(m);
  auto hyp = flats::hyperplanes(lat);
  auto cr = flats::closure_axioms_check(lat);
  auto qr = flats::qmatroid_axioms_check(lat);
  Json ranks = Json::array();
  for (const auto& r : qr.hyperplane_rank_values) ranks.push_back(qpm::to_string(r));
  return Json{{"count", lat.size()},
              {"hyperplanes", hyp.size()},
              {"closure_axioms", cr.ok()},
              {"cl4", check_json(qr.cl4)},
              {"f3", check_json(qr.f3)},
              {"semimodular", check_json(qr.semimodular)},
              {"chains", check_json(qr.chains)},
              {"hyperplane_rank_values", ranks}};
}

Json weights_json(const RankMetricCode& c, bool with_flats, std::ostream& err) {
  bool transposed = false;
  auto o = weights::orient(c, &transposed);
  if (transposed) err << "warning: m < n; generalized weights are reported for the transposed code\n";
  auto w = with_flats ? weights::gen_weights_flats(o) : weights::gen_weights_qpm(o);
  Json j = ordered(weights::to_json(w));
  j["transposed"] = transposed;
  return j;
}

RankMetricCode random_code(const algebra::FieldPtr& f, int n, int m, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kd(1, n * m - 1);
  std::uniform_int_distribution<algebra::Elem> ed(0, static_cast<algebra::Elem>(f->q() - 1));
  while (true) {
    Mat flat(f, kd(rng), n * m);
    for (int r = 0; r < flat.rows(); ++r)
      for (int c = 0; c < flat.cols(); ++c) flat(r, c) = ed(rng);
    if (algebra::rank(flat) == 0) continue;
    return RankMetricCode(n, m, flat);
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CapGuard guard;
  Options o;
  if (const char* v = std::getenv("QPOLY_NODE_BUDGET")) o.node_budget = std::strtoull(v, nullptr, 10);
  if (const char* v = std::getenv("QPOLY_LATTICE_CAP")) algebra::set_lattice_size_cap(std::strtoull(v, nullptr, 10));

  CLI::App app{"qpoly: q-polymatroids and rank-metric codes"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", o.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--threads", o.threads, "worker threads (0 = hardware)");
  app.add_option("--enum-cap", o.enum_cap, "enumeration cap, log2 of the ambient size");
  app.add_option("--seed", o.seed, "seed for randomized suites");
  app.add_option("--modulus", o.modulus, "modulus c_0,...,c_e for generator files");
  app.add_option("--node-budget", o.node_budget, "node cap for equivalence searches");

  std::string path, path_b, x_text, gram_path;
  bool f_axioms = false, f_flats = false, f_weights = false, f_dual = false, f_den = false, f_hist = false, f_dump = false, f_row = false;
  bool emit_witness = false, w_flats = false;
  std::string del_text, con_text;
  int m_deg = 0, count = 100;
  std::uint64_t max_candidates = 0;
  double time_cap = 0;

  auto* info = app.add_subcommand("code-info", "parameters of a code");
  info->add_option("input", path)->required();

  auto* qp = app.add_subcommand("qpm", "analyses of a q-polymatroid");
  qp->add_option("input", path)->required();
  qp->add_flag("--axioms", f_axioms);
  qp->add_flag("--flats", f_flats);
  qp->add_flag("--weights", f_weights);
  qp->add_flag("--dual", f_dual);
  qp->add_flag("--denominator", f_den);
  qp->add_flag("--histogram", f_hist);
  qp->add_flag("--dump", f_dump, "full rank table");
  qp->add_flag("--row", f_row, "row q-PM of the code instead of the column one");

  auto* mn = app.add_subcommand("minor", "deletion or contraction");
  mn->add_option("input", path)->required();
  auto* del = mn->add_option("--delete", del_text, "X as RREF rows, e.g. 1000,0100, or a file");
  auto* con = mn->add_option("--contract", con_text, "X as RREF rows or a file");
  del->excludes(con);
  mn->add_option("--gram", gram_path, "Gram matrix file for the deletion");

  auto* eq = app.add_subcommand("equiv", "equivalence of two q-PMs");
  eq->add_option("a", path)->required();
  eq->add_option("b", path_b)->required();

  auto* df = app.add_subcommand("diff", "pointwise comparison of two q-PMs");
  df->add_option("a", path)->required();
  df->add_option("b", path_b)->required();

  auto* rs = app.add_subcommand("repr-search", "F_{q^m}-representation search");
  rs->add_option("input", path)->required();
  rs->add_option("--m", m_deg, "extension degree")->required()->check(CLI::PositiveNumber);
  rs->add_option("--budget", max_candidates, "maximum number of candidates (0 = all)");
  rs->add_option("--time-cap", time_cap, "seconds (0 = none)");
  rs->add_flag("--emit-witness", emit_witness);

  auto* wt = app.add_subcommand("weights", "generalized weights");
  wt->add_option("input", path)->required();
  wt->add_flag("--flats", w_flats, "also the maxima over flats");

  auto* so = app.add_subcommand("spread-obstruction", "the spread q-matroid against F_2^{4 x m}");
  so->add_option("--m", m_deg)->required()->check(CLI::Range(1, 6));

  auto* pr = app.add_subcommand("properties", "randomized duality checks");
  pr->add_option("--count", count)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return parse_error;
  }

  if (o.threads > 0) algebra::set_worker_threads(o.threads);
  if (o.enum_cap > 0) algebra::set_enum_cap_bits(o.enum_cap);

  Json j;
  int code = ok;
  try {
    if (*info) {
      auto in = load(path, o.modulus);
      const auto& c = need_code(in, "code-info");
      j = Json{{"q", c.field()->q()}, {"n", c.n()}, {"m", c.m()}, {"k", c.dim()}};
      j["d"] = rmcode::rank_distance(c);
      j["mrd"] = rmcode::is_mrd(c);
      j["dual_dim"] = c.n() * c.m() - c.dim();
    } else if (*qp) {
      auto in = load(path, o.modulus);
      QPolymatroid m = f_row ? qpm::from_code_row(need_code(in, "--row")) : column_qpm(in);
      j = qpm_summary(m);
      try {
        if (f_hist) j["histogram"] = histogram_json(m);
        if (f_den) {
          auto d = qpm::denominators(m);
          j["denominator"] = Json{{"principal", qpm::to_string(d.principal)},
                                  {"is_qmatroid", d.is_qmatroid},
                                  {"exact", qpm::is_exact(m)},
                                  {"exactify_factor", qpm::to_string(qpm::exactify_factor(m))}};
        }
        if (f_axioms) {
          auto a = qpm::verify_axioms(m);
          j["axioms"] = Json{{"ok", a.ok}, {"axiom", a.axiom}, {"detail", a.detail}, {"r3_all_pairs", a.r3_all_pairs}};
          if (!a.ok) code = property_violation;
        }
        if (f_flats) j["flats"] = flats_json(m);
        if (f_weights) j["weights"] = weights_json(need_code(in, "--weights"), false, err);
        if (f_dual) j["dual"] = ordered(qpm::to_json(qpm::dual(m)));
        if (f_dump) j["table"] = ordered(qpm::to_json(m));
      } catch (const BudgetExceeded& e) {
        j["partial"] = true;
        j["budget_exceeded"] = e.what();
        code = budget_exceeded;
      }
    } else if (*mn) {
      if (del_text.empty() && con_text.empty()) throw std::invalid_argument("minor needs --delete or --contract");
      auto m = column_qpm(load(path, o.modulus));
      std::string text = del_text.empty() ? con_text : del_text;
      if (std::filesystem::is_regular_file(text)) text = slurp(text);
      while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
      auto x = algebra::parse_subspace(text, m.field(), m.ell());
      QPolymatroid res = m;
      if (!del_text.empty()) {
        if (gram_path.empty()) res = qpm::delete_space(m, x);
        else {
          std::istringstream gs(slurp(gram_path));
          res = qpm::delete_space(m, x, algebra::GramMatrix(algebra::read_matrix(gs)));
        }
      } else {
        if (!gram_path.empty()) throw std::invalid_argument("--gram applies to --delete only");
        res = qpm::contract(m, x);
      }
      j = ordered(qpm::to_json(res));
    } else if (*eq) {
      auto a = column_qpm(load(path, o.modulus));
      auto b = column_qpm(load(path_b, o.modulus));
      auto r = qpm::find_equivalence(a, b, o.node_budget);
      j = Json{{"verdict", qpm::to_string(r.verdict)}, {"nodes", r.nodes}};
      if (r.witness) j["witness"] = rows_json(*r.witness);
      if (!r.reason.empty()) j["reason"] = r.reason;
      if (r.verdict == qpm::Verdict::unknown) code = budget_exceeded;
    } else if (*df) {
      auto a = column_qpm(load(path, o.modulus));
      auto b = column_qpm(load(path_b, o.modulus));
      if (a.ell() != b.ell() || a.field()->q() != b.field()->q()) throw std::invalid_argument("q-PMs live on different spaces");
      std::uint64_t differ = 0;
      std::optional<std::size_t> first;
      for (std::size_t v = 0; v < a.lattice().size(); ++v)
        if (a.rank_at(v) != b.rank_at(v)) {
          ++differ;
          if (!first) first = v;
        }
      j = Json{{"equal", differ == 0}, {"differences", differ}};
      if (first)
        j["first"] = Json{{"subspace", qpm::subspace_rows(a.lattice().at(*first))},
                          {"a", qpm::to_string(a.rank_at(*first))},
                          {"b", qpm::to_string(b.rank_at(*first))}};
    } else if (*rs) {
      auto m = column_qpm(load(path, o.modulus));
      repr::SearchBudget budget{max_candidates, o.node_budget, time_cap};
      auto r = repr::search_fqm_representation(m, m_deg, budget);
      j = ordered(repr::to_json(r, emit_witness));
      if (r.status == repr::SearchStatus::budget) code = budget_exceeded;
    } else if (*wt) {
      auto in = load(path, o.modulus);
      const auto& c = need_code(in, "weights");
      if (o.format == "csv") {
        bool transposed = false;
        auto oc = weights::orient(c, &transposed);
        if (transposed) err << "warning: m < n; generalized weights are reported for the transposed code\n";
        out << weights::to_csv(w_flats ? weights::gen_weights_flats(oc) : weights::gen_weights_qpm(oc));
        return ok;
      }
      j = weights_json(c, w_flats, err);
    } else if (*so) {
      auto r = repr::verify_spread_obstruction(m_deg);
      j = ordered(repr::to_json(r));
      if (!r.ok()) code = property_violation;
    } else if (*pr) {
      std::mt19937_64 rng(o.seed);
      std::uint64_t trace = 0, bidual = 0, checked = 0;
      for (int t = 0; t < count; ++t) {
        auto f = algebra::Field::make(t % 2 ? 3 : 2);
        int n = std::uniform_int_distribution<int>(1, 4)(rng);
        int mmax = f->q() == 2 ? 16 / n : 9 / n;
        int m = std::uniform_int_distribution<int>(1, std::max(1, mmax))(rng);
        if (n * m < 2) m = 2;
        auto c = random_code(f, n, m, rng);
        auto mc = qpm::from_code_col(c);
        auto md = qpm::dual(mc);
        trace += !qpm::same_ranks(md, qpm::from_code_col(rmcode::code_dual(c)));
        bidual += !qpm::same_ranks(qpm::dual(md), mc);
        ++checked;
      }
      j = Json{{"seed", o.seed}, {"codes", checked}, {"trace_duality_violations", trace}, {"biduality_violations", bidual}};
      if (trace || bidual) code = property_violation;
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return parse_error;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return budget_exceeded;
  } catch (const PropertyViolation& e) {
    err << "property violation: " << e.what() << '\n';
    return property_violation;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return parse_error;
  }
  emit(out, j, o);
  return code;
}

}  // namespace qpoly::cli
