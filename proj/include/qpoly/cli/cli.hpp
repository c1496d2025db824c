#pragma once

#include <iosfwd>

namespace qpoly::cli {

enum ExitCode { ok = 0, parse_error = 2, budget_exceeded = 3, property_violation = 4 };

/// Entry point of the qpoly tool; reports go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qpoly::cli
