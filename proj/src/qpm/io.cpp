#include "qpoly/qpm/io.hpp"

#include <sstream>

#include "qpoly/algebra/errors.hpp"
#include "qpoly/algebra/textio.hpp"

namespace qpoly::qpm {

using nlohmann::json;

namespace {

std::string field_text(const algebra::Field& f) { return std::to_string(f.p()) + "^" + std::to_string(f.e()); }

json subspace_json(const Subspace& v) {
  json rows = json::array();
  if (v.is_zero()) return rows;
  std::string s = v.to_string();
  std::stringstream ss(s);
  std::string row;
  while (std::getline(ss, row, ',')) rows.push_back(row);
  return rows;
}

FieldPtr field_of(const json& j) {
  if (!j.contains("q")) throw ParseError("missing \"q\"");
  std::string q = j["q"].is_string() ? j["q"].get<std::string>() : std::to_string(j["q"].get<int>());
  std::string mod = j.contains("modulus") ? j["modulus"].get<std::string>() : "";
  return algebra::parse_field(q, mod);
}

int int_of(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer()) throw ParseError(std::string("missing integer \"") + key + "\"");
  return j[key].get<int>();
}

Subspace subspace_of(const json& rows, const FieldPtr& f, int ell) {
  if (rows.is_string()) return algebra::parse_subspace(rows.get<std::string>(), f, ell);
  std::string text;
  for (const auto& r : rows) {
    if (!text.empty()) text += ",";
    text += r.get<std::string>();
  }
  return algebra::parse_subspace(text, f, ell);
}

}  // namespace

std::string subspace_rows(const Subspace& v) { return v.to_string(); }

json to_json(const QPolymatroid& m) {
  json out;
  out["format"] = "qpm-table";
  out["q"] = field_text(*m.field());
  out["modulus"] = m.field()->modulus_string();
  out["ell"] = m.ell();
  out["provenance"] = m.provenance();
  json ranks = json::array();
  const auto& lat = m.lattice();
  for (std::size_t i = 0; i < lat.size(); ++i)
    ranks.push_back({{"subspace", subspace_json(lat.at(i))}, {"rank", to_fraction(m.rank_at(i))}});
  out["ranks"] = std::move(ranks);
  return out;
}

QPolymatroid from_json(const json& j) {
  try {
    if (!j.is_object() || !j.contains("format")) throw ParseError("expected an object with a \"format\" key");
    const std::string fmt = j["format"].get<std::string>();
    FieldPtr f = field_of(j);
    const int ell = int_of(j, "ell");
    if (fmt == "qpm-uniform") return uniform(f, ell, int_of(j, "k"));
    if (fmt == "qpm-paving") {
      std::vector<Subspace> spaces;
      for (const auto& s : j.at("spaces")) spaces.push_back(subspace_of(s, f, ell));
      return paving(f, ell, int_of(j, "k"), spaces);
    }
    if (fmt != "qpm-table") throw ParseError("unknown format \"" + fmt + "\"");
    auto lat = algebra::SubspaceLattice::get(f, ell);
    const auto& ranks = j.at("ranks");
    if (ranks.size() != lat->size())
      throw ParseError("expected " + std::to_string(lat->size()) + " rank entries, found " + std::to_string(ranks.size()));
    std::vector<QRat> table(lat->size());
    std::vector<bool> seen(lat->size(), false);
    for (const auto& e : ranks) {
      Subspace v = subspace_of(e.at("subspace"), f, ell);
      std::size_t i = lat->index_of(v);
      if (seen[i]) throw ParseError("subspace " + v.to_string() + " listed twice");
      seen[i] = true;
      table[i] = parse_rat(e.at("rank").get<std::string>());
    }
    std::string prov = j.contains("provenance") ? j["provenance"].get<std::string>() : "table";
    return QPolymatroid::from_table(f, ell, std::move(table), prov);
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

QPolymatroid read_qpm_json(std::istream& in) {
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    int line = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) line += text[i] == '\n';
    throw ParseError(e.what(), line);
  }
  return from_json(j);
}

}  // namespace qpoly::qpm
