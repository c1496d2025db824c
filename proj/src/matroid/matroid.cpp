#include "qpoly/matroid/matroid.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <stdexcept>

#include "qpoly/algebra/budget.hpp"
#include "qpoly/algebra/errors.hpp"

namespace qpoly::matroid {

namespace {

std::vector<int> members(Mask a) {
  std::vector<int> out;
  for (int i = 0; a; ++i, a >>= 1)
    if (a & 1) out.push_back(i);
  return out;
}

void check_size(int n) {
  if (n < 0 || n > ClassicalMatroid::max_ground)
    throw BudgetExceeded("matroid ground sets are limited to " + std::to_string(ClassicalMatroid::max_ground) + " elements");
}

}  // namespace

ClassicalMatroid::ClassicalMatroid(std::vector<std::string> labels, std::vector<int> ranks)
    : labels_(std::move(labels)), ranks_(std::move(ranks)) {
  check_size(size());
  if (ranks_.size() != (std::size_t{1} << labels_.size())) throw std::invalid_argument("rank table has the wrong size");
}

Mask ClassicalMatroid::mask_of(const std::vector<std::string>& names) const {
  Mask a = 0;
  for (const auto& s : names) {
    auto it = std::find(labels_.begin(), labels_.end(), s);
    if (it == labels_.end()) throw std::invalid_argument("unknown ground element \"" + s + "\"");
    a |= Mask{1} << (it - labels_.begin());
  }
  return a;
}

std::string ClassicalMatroid::set_text(Mask a) const {
  std::string s = "{";
  for (int i : members(a)) s += (s.size() > 1 ? "," : "") + labels_[i];
  return s + "}";
}

std::vector<std::string> default_labels(int n) {
  std::vector<std::string> out;
  for (int i = 1; i <= n; ++i) out.push_back(std::to_string(i));
  return out;
}

ClassicalMatroid uniform_matroid(int n, int k) {
  check_size(n);
  if (k < 0 || k > n) throw std::invalid_argument("uniform matroid needs 0 <= k <= n");
  std::vector<int> r(std::size_t{1} << n);
  for (Mask a = 0; a < r.size(); ++a) r[a] = std::min(std::popcount(a), k);
  return ClassicalMatroid(default_labels(n), std::move(r));
}

ClassicalMatroid paving_matroid(std::vector<std::string> labels, int k, const std::vector<Mask>& a) {
  const int n = static_cast<int>(labels.size());
  check_size(n);
  if (k < 1 || k > n) throw std::invalid_argument("paving matroid needs 1 <= k <= n");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::popcount(a[i]) != k || (a[i] >> n)) throw std::invalid_argument("paving member is not a k-subset");
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      if (a[i] == a[j]) throw std::invalid_argument("paving member listed twice");
      if (std::popcount(a[i] & a[j]) > k - 2) throw std::invalid_argument("paving members meet in more than k-2 elements");
    }
  }
  std::vector<int> r(std::size_t{1} << n);
  for (Mask x = 0; x < r.size(); ++x) r[x] = std::min(std::popcount(x), k);
  for (Mask x : a) r[x] = k - 1;
  return ClassicalMatroid(std::move(labels), std::move(r));
}

MatroidReport verify_axioms(const ClassicalMatroid& m) {
  MatroidReport rep;
  const int n = m.size();
  const Mask full = (Mask{1} << n) - 1;
  auto fail = [&](const char* ax, std::string d) {
    rep = MatroidReport{false, ax, std::move(d)};
    return rep;
  };
  for (Mask a = 0; a <= full; ++a)
    if (m.rank(a) < 0 || m.rank(a) > std::popcount(a)) return fail("R1", "r" + m.set_text(a) + " = " + std::to_string(m.rank(a)));
  for (Mask a = 0; a <= full; ++a)
    for (int e = 0; e < n; ++e)
      if (!(a >> e & 1) && m.rank(a | Mask{1} << e) < m.rank(a))
        return fail("R2", "r drops from " + m.set_text(a) + " to " + m.set_text(a | Mask{1} << e));
  if (n <= 10) {
    for (Mask a = 0; a <= full; ++a)
      for (Mask b = a + 1; b <= full; ++b)
        if (m.rank(a | b) + m.rank(a & b) > m.rank(a) + m.rank(b))
          return fail("R3", "A=" + m.set_text(a) + ", B=" + m.set_text(b));
  } else {
    for (Mask a = 0; a <= full; ++a)
      for (int e = 0; e < n; ++e)
        for (int f = e + 1; f < n; ++f) {
          Mask me = Mask{1} << e, mf = Mask{1} << f;
          if ((a & me) || (a & mf)) continue;
          if (m.rank(a | me | mf) + m.rank(a) > m.rank(a | me) + m.rank(a | mf))
            return fail("R3", "A=" + m.set_text(a) + ", e=" + m.labels()[e] + ", f=" + m.labels()[f]);
        }
  }
  return rep;
}

std::vector<Mask> circuits(const ClassicalMatroid& m) {
  std::vector<Mask> out;
  const Mask full = (Mask{1} << m.size()) - 1;
  for (Mask a = 1; a <= full; ++a) {
    if (m.rank(a) == std::popcount(a)) continue;
    bool minimal = true;
    for (Mask b = a; b && minimal; b &= b - 1) {
      Mask drop = a & ~(b & -b);
      if (m.rank(drop) < std::popcount(drop)) minimal = false;
    }
    if (minimal) out.push_back(a);
  }
  return out;
}

bool check_representation(const ClassicalMatroid& m, const algebra::Mat& g, const std::vector<int>& column_of) {
  const int n = m.size();
  if (static_cast<int>(column_of.size()) != n) throw std::invalid_argument("column labelling has the wrong length");
  for (int c : column_of)
    if (c < 0 || c >= g.cols()) throw std::invalid_argument("column index out of range");
  const Mask full = (Mask{1} << n) - 1;
  for (Mask a = 0; a <= full; ++a) {
    std::vector<int> cols;
    for (int i : members(a)) cols.push_back(column_of[i]);
    int r = cols.empty() ? 0 : algebra::rank(g.select_cols(cols));
    if (r != m.rank(a)) return false;
  }
  return true;
}

ClassicalMatroid induced_matroid(const qpm::QPolymatroid& m, const algebra::Mat& basis) {
  const int n = basis.rows();
  check_size(n);
  if (basis.cols() != m.ell() || n != m.ell() || !algebra::is_invertible(basis))
    throw std::invalid_argument("induced matroid needs a basis of the ground space");
  std::vector<int> r(std::size_t{1} << n);
  for (Mask a = 0; a < r.size(); ++a) {
    auto rows = members(a);
    auto v = rows.empty() ? algebra::Subspace::zero(m.field(), m.ell()) : algebra::Subspace::span(basis.select_rows(rows));
    qpm::QRat x = m.rank(v);
    if (!qpm::is_integral(x)) throw std::invalid_argument("induced matroid needs a q-matroid; rank " + qpm::to_string(x) + " found");
    r[a] = static_cast<int>(x.get_num().get_si());
  }
  return ClassicalMatroid(default_labels(n), std::move(r));
}

LinkReport link_check(const algebra::Mat& basis, int k, const std::vector<Mask>& a) {
  LinkReport rep;
  const int n = basis.rows();
  auto classical = paving_matroid(default_labels(n), k, a);
  std::vector<algebra::Subspace> spaces;
  for (Mask x : a) spaces.push_back(algebra::Subspace::span(basis.select_rows(members(x))));
  rep.spaces_meet_properly = true;
  for (std::size_t i = 0; i < spaces.size(); ++i)
    for (std::size_t j = i + 1; j < spaces.size(); ++j)
      if (algebra::intersect(spaces[i], spaces[j]).dim() > k - 2) {
        rep.spaces_meet_properly = false;
        rep.detail = "spans of " + classical.set_text(a[i]) + " and " + classical.set_text(a[j]) + " meet in dimension above k-2";
        return rep;
      }
  auto induced = induced_matroid(qpm::paving(basis.field(), n, k, spaces), basis);
  const Mask full = (Mask{1} << n) - 1;
  for (Mask x = 0; x <= full; ++x)
    if (classical.rank(x) != induced.rank(x)) {
      rep.detail = "ranks differ on " + classical.set_text(x);
      return rep;
    }
  rep.ok = true;
  return rep;
}

PavingData paving_from_json(const nlohmann::json& j) {
  try {
    if (j.value("format", "") != "matroid-paving") throw ParseError("expected a matroid-paving document");
    PavingData d;
    d.name = j.value("name", "");
    d.ground = j.at("ground").get<std::vector<std::string>>();
    check_size(static_cast<int>(d.ground.size()));
    d.k = j.at("k").get<int>();
    ClassicalMatroid labels_only(d.ground, std::vector<int>(std::size_t{1} << d.ground.size()));
    for (const auto& s : j.at("A")) d.a.push_back(labels_only.mask_of(s.get<std::vector<std::string>>()));
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

ClassicalMatroid from_json(const nlohmann::json& j) {
  const std::string fmt = j.is_object() ? j.value("format", "") : "";
  if (fmt == "matroid-paving") {
    auto d = paving_from_json(j);
    try {
      return paving_matroid(d.ground, d.k, d.a);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what());
    }
  }
  if (fmt != "matroid-table") throw ParseError("unknown matroid format \"" + fmt + "\"");
  try {
    return ClassicalMatroid(j.at("ground").get<std::vector<std::string>>(), j.at("ranks").get<std::vector<int>>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

ClassicalMatroid read_matroid_json(std::istream& in) {
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    int line = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) line += text[i] == '\n';
    throw ParseError(e.what(), line);
  }
  return from_json(j);
}

nlohmann::json to_json(const ClassicalMatroid& m) {
  return {{"format", "matroid-table"}, {"ground", m.labels()}, {"ranks", m.ranks()}};
}

}  // namespace qpoly::matroid
