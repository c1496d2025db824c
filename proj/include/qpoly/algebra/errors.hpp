#pragma once

#include <stdexcept>
#include <string>

namespace qpoly {

/// Raised when an enumeration or search would exceed its configured cap.
class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a constructed object fails a required axiom or identity.
class PropertyViolation : public std::runtime_error {
 public:
  explicit PropertyViolation(const std::string& what) : std::runtime_error(what) {}
};

/// Raised by the text/JSON readers; carries the offending line when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace qpoly
