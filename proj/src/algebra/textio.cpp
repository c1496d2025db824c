#include "qpoly/algebra/textio.hpp"

#include <cctype>
#include <sstream>
#include <vector>

#include "qpoly/algebra/errors.hpp"

namespace qpoly::algebra {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

int to_int(const std::string& s, int line_no, const char* what) {
  try {
    std::size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(std::string("bad ") + what + " '" + s + "'", line_no);
  }
}

std::vector<int> parse_int_list(const std::string& s, int line_no) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(to_int(trim(tok), line_no, "modulus coefficient"));
  return out;
}

}  // namespace

bool LineReader::next(std::string& line) {
  while (std::getline(in_, line)) {
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string t = trim(line);
    if (!t.empty() && t[0] == '#') continue;
    line = t;
    return true;
  }
  return false;
}

bool LineReader::next_nonblank(std::string& line) {
  while (next(line))
    if (!line.empty()) return true;
  return false;
}

FieldPtr parse_field(const std::string& q_text, const std::string& modulus_text) {
  std::string t = q_text;
  if (t.rfind("q=", 0) == 0) t = t.substr(2);
  int p = 0;
  int e = 1;
  auto caret = t.find('^');
  if (caret != std::string::npos) {
    p = to_int(t.substr(0, caret), 0, "characteristic");
    e = to_int(t.substr(caret + 1), 0, "extension degree");
  } else {
    int q = to_int(t, 0, "field order");
    // Accept a bare prime power.
    for (int cand = 2; cand <= q; ++cand) {
      if (q % cand) continue;
      p = cand;
      int r = q;
      e = 0;
      while (r % p == 0) {
        r /= p;
        ++e;
      }
      if (r != 1) throw ParseError("field order " + t + " is not a prime power");
      break;
    }
    if (p == 0) throw ParseError("field order " + t + " is not a prime power");
  }
  std::optional<std::vector<int>> mod;
  if (!modulus_text.empty() && modulus_text != "none") mod = parse_int_list(modulus_text, 0);
  try {
    return Field::make(p, e, mod);
  } catch (const std::invalid_argument& ex) {
    throw ParseError(ex.what());
  }
}

MatrixHeader parse_matrix_header(const std::string& line, int line_no) {
  std::stringstream ss(line);
  std::string tok;
  std::string q_text;
  std::string mod_text;
  int rows = -1;
  int cols = -1;
  while (ss >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) throw ParseError("malformed header token '" + tok + "'", line_no);
    std::string key = tok.substr(0, eq);
    std::string val = tok.substr(eq + 1);
    if (key == "q") q_text = val;
    else if (key == "rows") rows = to_int(val, line_no, "row count");
    else if (key == "cols") cols = to_int(val, line_no, "column count");
    else if (key == "modulus") mod_text = val;
    else throw ParseError("unknown header key '" + key + "'", line_no);
  }
  if (q_text.empty() || rows < 0 || cols < 0) throw ParseError("matrix header needs q, rows and cols", line_no);
  MatrixHeader h;
  try {
    h.field = parse_field(q_text, mod_text);
  } catch (const ParseError& ex) {
    throw ParseError(ex.what(), line_no);
  }
  h.rows = rows;
  h.cols = cols;
  return h;
}

std::string matrix_header(const Field& f, int rows, int cols) {
  return "q=" + std::to_string(f.p()) + "^" + std::to_string(f.e()) + " rows=" + std::to_string(rows) +
         " cols=" + std::to_string(cols) + " modulus=" + f.modulus_string();
}

Mat read_matrix(LineReader& in) {
  std::string line;
  if (!in.next_nonblank(line)) throw ParseError("expected matrix header", in.line_no() + 1);
  MatrixHeader h = parse_matrix_header(line, in.line_no());
  Mat m(h.field, h.rows, h.cols);
  for (int i = 0; i < h.rows; ++i) {
    if (!in.next_nonblank(line)) throw ParseError("unexpected end of matrix", in.line_no() + 1);
    std::stringstream ss(line);
    std::string tok;
    int j = 0;
    while (ss >> tok) {
      if (j >= h.cols) throw ParseError("too many entries in row", in.line_no());
      int v = to_int(tok, in.line_no(), "entry");
      if (v < 0 || static_cast<Elem>(v) >= h.field->q()) throw ParseError("entry " + tok + " outside field", in.line_no());
      m(i, j++) = static_cast<Elem>(v);
    }
    if (j != h.cols) throw ParseError("row has " + std::to_string(j) + " entries, expected " + std::to_string(h.cols), in.line_no());
  }
  return m;
}

Mat read_matrix(std::istream& in) {
  LineReader r(in);
  return read_matrix(r);
}

void write_matrix(std::ostream& out, const Mat& m) {
  out << matrix_header(*m.field(), m.rows(), m.cols()) << '\n';
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) out << (j ? " " : "") << m(i, j);
    out << '\n';
  }
}

Subspace parse_subspace(const std::string& text, const FieldPtr& field, int ambient) {
  std::string t = trim(text);
  if (t.empty() || t == "0") return Subspace::zero(field, ambient);
  std::vector<std::vector<Elem>> rows;
  std::string cur;
  auto flush = [&](std::string row) {
    row = trim(row);
    if (row.empty()) return;
    std::vector<Elem> v;
    if (row.find(' ') == std::string::npos && static_cast<int>(row.size()) == ambient && field->q() <= 10) {
      for (char c : row) {
        if (!std::isdigit(static_cast<unsigned char>(c))) throw ParseError("bad subspace digit in '" + row + "'");
        v.push_back(static_cast<Elem>(c - '0'));
      }
    } else {
      std::stringstream ss(row);
      std::string tok;
      while (ss >> tok) v.push_back(static_cast<Elem>(to_int(tok, 0, "subspace entry")));
    }
    if (static_cast<int>(v.size()) != ambient)
      throw ParseError("subspace row '" + row + "' has length " + std::to_string(v.size()) + ", expected " + std::to_string(ambient));
    for (Elem x : v)
      if (x >= field->q()) throw ParseError("subspace entry outside field in '" + row + "'");
    rows.push_back(std::move(v));
  };
  for (char c : t) {
    if (c == ',' || c == ';') {
      flush(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  flush(cur);
  return Subspace::from_rows(field, ambient, rows);
}

}  // namespace qpoly::algebra
