#pragma once

#include <istream>
#include <string>

#include "json.hpp"
#include "qpoly/qpm/qpolymatroid.hpp"

namespace qpoly::qpm {

/// Full table dump:
/// {"format": "qpm-table", "q": "p^e", "modulus": ..., "ell": l, "provenance": ...,
///  "ranks": [{"subspace": [row, ...], "rank": "num/den"}, ...]}
/// in canonical enumeration order.
nlohmann::json to_json(const QPolymatroid& m);

/// Reads a table dump, or one of the generated forms
///   {"format": "qpm-paving", "q", "ell", "k", "spaces": ["1000,0100", ...]}
///   {"format": "qpm-uniform", "q", "ell", "k"}
/// Throws ParseError.
QPolymatroid from_json(const nlohmann::json& j);
QPolymatroid read_qpm_json(std::istream& in);

std::string subspace_rows(const Subspace& v);

}  // namespace qpoly::qpm
