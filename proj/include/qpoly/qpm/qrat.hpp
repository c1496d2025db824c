#pragma once

#include <gmpxx.h>

#include <string>

namespace qpoly::qpm {

/// Exact non-negative rational; always kept canonical (gcd 1, den >= 1).
using QRat = mpq_class;

QRat rat(long num, long den = 1);
/// "3/2", or "2" when integral.
std::string to_string(const QRat& r);
/// Always "num/den", as used in dump files.
std::string to_fraction(const QRat& r);
/// Accepts "n" or "n/d"; throws std::invalid_argument.
QRat parse_rat(const std::string& s);

bool is_integral(const QRat& r);

}  // namespace qpoly::qpm
