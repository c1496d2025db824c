#pragma once

#include <istream>
#include <ostream>
#include <string>

#include "qpoly/algebra/subspace.hpp"

namespace qpoly::algebra {

/// Line-oriented reader that tracks line numbers and skips '#' comments.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}
  /// Next non-comment line; blank lines are returned as "". False at EOF.
  bool next(std::string& line);
  /// Next non-blank, non-comment line.
  bool next_nonblank(std::string& line);
  int line_no() const { return line_no_; }

 private:
  std::istream& in_;
  int line_no_ = 0;
};

/// Parses "q=<p>^<e> rows=<r> cols=<c> modulus=<c_0,...,c_e|none>".
struct MatrixHeader {
  FieldPtr field;
  int rows = 0;
  int cols = 0;
};
MatrixHeader parse_matrix_header(const std::string& line, int line_no = 0);
std::string matrix_header(const Field& f, int rows, int cols);

/// Header line followed by `rows` lines of element indices.
Mat read_matrix(LineReader& in);
Mat read_matrix(std::istream& in);
void write_matrix(std::ostream& out, const Mat& m);

/// Inline subspace: rows separated by ',' (or ';'); a row is either a run of
/// single digits ("1010", q <= 10) or whitespace-separated element indices.
/// "0" or "" denotes the zero space.
Subspace parse_subspace(const std::string& text, const FieldPtr& field, int ambient);

/// Parses "q=<p>^<e>" / "<p>^<e>" / "<q>" plus an optional modulus list.
FieldPtr parse_field(const std::string& q_text, const std::string& modulus_text = "");

}  // namespace qpoly::algebra
