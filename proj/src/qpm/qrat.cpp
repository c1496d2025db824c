#include "qpoly/qpm/qrat.hpp"

#include <stdexcept>

namespace qpoly::qpm {

QRat rat(long num, long den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  QRat r(num, den);
  r.canonicalize();
  return r;
}

std::string to_string(const QRat& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string to_fraction(const QRat& r) { return r.get_num().get_str() + "/" + r.get_den().get_str(); }

QRat parse_rat(const std::string& s) {
  auto bad = [&] { return std::invalid_argument("not a rational number: '" + s + "'"); };
  if (s.empty()) throw bad();
  auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  auto digits = [](const std::string& t) {
    if (t.empty()) return false;
    for (char c : t)
      if (c < '0' || c > '9') return false;
    return true;
  };
  std::string n = num[0] == '-' ? num.substr(1) : num;
  if (!digits(n) || !digits(den)) throw bad();
  mpz_class d(den);
  if (d == 0) throw bad();
  QRat r{mpz_class(num), d};
  r.canonicalize();
  return r;
}

bool is_integral(const QRat& r) { return r.get_den() == 1; }

}  // namespace qpoly::qpm
