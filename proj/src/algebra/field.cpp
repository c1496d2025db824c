#include "qpoly/algebra/field.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace qpoly::algebra {

namespace {

// Default moduli, little-endian coefficient vectors c_0..c_e. Table version 1.
// Conway polynomials; these must stay fixed so stored results remain reproducible.
const std::map<std::pair<int, int>, std::vector<int>>& pinned_moduli() {
  static const std::map<std::pair<int, int>, std::vector<int>> table = {
      {{2, 2}, {1, 1, 1}},
      {{2, 3}, {1, 1, 0, 1}},
      {{2, 4}, {1, 1, 0, 0, 1}},
      {{2, 5}, {1, 0, 1, 0, 0, 1}},
      {{2, 6}, {1, 1, 0, 1, 1, 0, 1}},
      {{2, 7}, {1, 1, 0, 0, 0, 0, 0, 1}},
      {{2, 8}, {1, 0, 1, 1, 1, 0, 0, 0, 1}},
      {{2, 9}, {1, 0, 0, 0, 1, 0, 0, 0, 0, 1}},
      {{2, 10}, {1, 1, 1, 1, 0, 1, 1, 0, 0, 0, 1}},
      {{3, 2}, {2, 2, 1}},
      {{3, 3}, {1, 2, 0, 1}},
      {{3, 4}, {2, 0, 0, 2, 1}},
      {{3, 5}, {1, 2, 0, 0, 0, 1}},
      {{3, 6}, {2, 2, 1, 0, 2, 0, 1}},
      {{5, 2}, {2, 4, 1}},
      {{5, 3}, {3, 3, 0, 1}},
      {{5, 4}, {2, 4, 4, 0, 1}},
      {{7, 2}, {3, 6, 1}},
      {{7, 3}, {4, 0, 6, 1}},
  };
  return table;
}

int mod_p(long long v, int p) {
  long long r = v % p;
  return static_cast<int>(r < 0 ? r + p : r);
}

// Remainder of a by b over GF(p); b monic.
std::vector<int> poly_rem(std::vector<int> a, std::span<const int> b, int p) {
  const int db = static_cast<int>(b.size()) - 1;
  for (int i = static_cast<int>(a.size()) - 1; i >= db; --i) {
    int c = a[i];
    if (c == 0) continue;
    for (int j = 0; j <= db; ++j) a[i - db + j] = mod_p(a[i - db + j] - static_cast<long long>(c) * b[j], p);
  }
  a.resize(std::max(0, db));
  return a;
}

Elem int_pow(int base, int exp) {
  Elem r = 1;
  for (int i = 0; i < exp; ++i) r *= static_cast<Elem>(base);
  return r;
}

}  // namespace

bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

bool Field::is_irreducible(std::span<const int> poly, int p) {
  const int deg = static_cast<int>(poly.size()) - 1;
  if (deg < 1) return false;
  if (deg == 1) return true;
  // Trial division by every monic polynomial of degree 1..deg/2.
  for (int d = 1; d <= deg / 2; ++d) {
    const Elem count = int_pow(p, d);
    for (Elem idx = 0; idx < count; ++idx) {
      std::vector<int> divisor(d + 1);
      Elem t = idx;
      for (int j = 0; j < d; ++j) {
        divisor[j] = static_cast<int>(t % p);
        t /= p;
      }
      divisor[d] = 1;
      auto rem = poly_rem(std::vector<int>(poly.begin(), poly.end()), divisor, p);
      bool zero = true;
      for (int c : rem) zero = zero && c == 0;
      if (zero) return false;
    }
  }
  return true;
}

std::vector<int> Field::default_modulus(int p, int e) {
  if (e == 1) return {0, 1};
  auto it = pinned_moduli().find({p, e});
  if (it != pinned_moduli().end()) return it->second;
  const Elem count = int_pow(p, e);
  for (Elem idx = 0; idx < count; ++idx) {
    std::vector<int> poly(e + 1);
    Elem t = idx;
    for (int j = 0; j < e; ++j) {
      poly[j] = static_cast<int>(t % p);
      t /= p;
    }
    poly[e] = 1;
    if (poly[0] != 0 && is_irreducible(poly, p)) return poly;
  }
  throw std::logic_error("no irreducible polynomial found");
}

FieldPtr Field::make(int p, int e, std::optional<std::vector<int>> modulus) {
  if (!is_prime(p)) throw std::invalid_argument("field characteristic " + std::to_string(p) + " is not prime");
  if (e < 1) throw std::invalid_argument("extension degree must be >= 1");
  double bits = 0;
  for (int i = 0; i < e; ++i) bits += std::log2(static_cast<double>(p));
  if (bits > kMaxOrderBits + 1e-9)
    throw std::invalid_argument("field order exceeds 2^" + std::to_string(kMaxOrderBits));
  std::vector<int> mod;
  if (e == 1) {
    // Prime field: arithmetic is direct mod p; a supplied modulus must still be monic of degree 1.
    if (modulus && (modulus->size() != 2 || (*modulus)[1] != 1))
      throw std::invalid_argument("prime field modulus must be monic of degree 1");
    mod = {0, 1};
  } else {
    mod = modulus ? *modulus : default_modulus(p, e);
    if (static_cast<int>(mod.size()) != e + 1) throw std::invalid_argument("modulus has wrong degree");
    for (int& c : mod) c = mod_p(c, p);
    if (mod[e] != 1) throw std::invalid_argument("modulus is not monic");
    if (!is_irreducible(mod, p)) throw std::invalid_argument("modulus is reducible over GF(" + std::to_string(p) + ")");
  }
  return FieldPtr(new Field(p, e, std::move(mod)));
}

Field::Field(int p, int e, std::vector<int> modulus)
    : p_(p), e_(e), q_(int_pow(p, e)), modulus_(std::move(modulus)) {
  if (p_ != 2) {
    neg_table_.resize(q_);
    for (Elem a = 0; a < q_; ++a) neg_table_[a] = digit_add(0, a, -1);
    if (q_ <= 1024) {
      add_table_.resize(static_cast<std::size_t>(q_) * q_);
      for (Elem a = 0; a < q_; ++a)
        for (Elem b = 0; b < q_; ++b) add_table_[static_cast<std::size_t>(a) * q_ + b] = digit_add(a, b, 1);
    }
  }
  // Find a generator of the multiplicative group by brute force.
  const Elem order = q_ - 1;
  if (order == 1) {
    primitive_ = 1;
  } else {
    for (Elem g = 2; g < q_; ++g) {
      Elem x = g;
      Elem k = 1;
      while (x != 1) {
        x = poly_mul(x, g);
        ++k;
      }
      if (k == order) {
        primitive_ = g;
        break;
      }
    }
  }
  exp_.resize(2 * static_cast<std::size_t>(order));
  log_.assign(q_, 0);
  Elem x = 1;
  for (Elem k = 0; k < order; ++k) {
    exp_[k] = x;
    exp_[k + order] = x;
    log_[x] = k;
    x = poly_mul(x, primitive_);
  }
}

Elem Field::digit_add(Elem a, Elem b, int sign) const {
  Elem result = 0;
  Elem scale = 1;
  for (int i = 0; i < e_; ++i) {
    int da = static_cast<int>(a % p_);
    int db = static_cast<int>(b % p_);
    a /= p_;
    b /= p_;
    result += scale * static_cast<Elem>(mod_p(da + sign * db, p_));
    scale *= p_;
  }
  return result;
}

Elem Field::poly_mul(Elem a, Elem b) const {
  if (e_ == 1) return static_cast<Elem>((static_cast<std::uint64_t>(a) * b) % p_);
  if (p_ == 2) {
    std::uint64_t r = 0;
    std::uint64_t aa = a;
    for (int i = 0; i < e_; ++i)
      if ((b >> i) & 1U) r ^= aa << i;
    std::uint64_t mod = 0;
    for (int i = 0; i <= e_; ++i)
      if (modulus_[i]) mod |= std::uint64_t{1} << i;
    for (int i = 2 * e_ - 2; i >= e_; --i)
      if ((r >> i) & 1U) r ^= mod << (i - e_);
    return static_cast<Elem>(r);
  }
  auto ca = coeffs(a);
  auto cb = coeffs(b);
  std::vector<int> prod(2 * e_ - 1, 0);
  for (int i = 0; i < e_; ++i)
    for (int j = 0; j < e_; ++j) prod[i + j] = mod_p(prod[i + j] + ca[i] * cb[j], p_);
  return from_coeffs(poly_rem(std::move(prod), modulus_, p_));
}

Elem Field::add(Elem a, Elem b) const {
  if (p_ == 2) return a ^ b;
  if (e_ == 1) return static_cast<Elem>((a + b) % p_);
  if (!add_table_.empty()) return add_table_[static_cast<std::size_t>(a) * q_ + b];
  return digit_add(a, b, 1);
}

Elem Field::neg(Elem a) const {
  if (p_ == 2) return a;
  return neg_table_[a];
}

Elem Field::sub(Elem a, Elem b) const { return add(a, neg(b)); }

Elem Field::inv(Elem a) const {
  if (a == 0) throw std::domain_error("inverse of zero");
  const Elem order = q_ - 1;
  return exp_[(order - log_[a]) % order];
}

Elem Field::pow(Elem a, std::uint64_t k) const {
  if (k == 0) return 1;
  if (a == 0) return 0;
  const std::uint64_t order = q_ - 1;
  return exp_[(static_cast<std::uint64_t>(log_[a]) * (k % order)) % order];
}

std::vector<int> Field::coeffs(Elem a) const {
  std::vector<int> c(e_);
  for (int i = 0; i < e_; ++i) {
    c[i] = static_cast<int>(a % p_);
    a /= p_;
  }
  return c;
}

Elem Field::from_coeffs(std::span<const int> c) const {
  Elem r = 0;
  Elem scale = 1;
  for (int i = 0; i < e_; ++i) {
    int v = i < static_cast<int>(c.size()) ? mod_p(c[i], p_) : 0;
    r += scale * static_cast<Elem>(v);
    scale *= p_;
  }
  return r;
}

std::string Field::modulus_string() const {
  if (e_ == 1) return "none";
  std::ostringstream os;
  for (std::size_t i = 0; i < modulus_.size(); ++i) os << (i ? "," : "") << modulus_[i];
  return os.str();
}

std::string Field::describe() const {
  return "q=" + std::to_string(p_) + "^" + std::to_string(e_) + " modulus=" + modulus_string();
}

FieldElement::FieldElement(FieldPtr field, Elem value) : field_(std::move(field)), value_(value) {
  if (value_ >= field_->q()) throw std::out_of_range("element index outside field");
}

FieldElement FieldElement::operator+(const FieldElement& o) const { return {field_, field_->add(value_, o.value_)}; }
FieldElement FieldElement::operator-(const FieldElement& o) const { return {field_, field_->sub(value_, o.value_)}; }
FieldElement FieldElement::operator*(const FieldElement& o) const { return {field_, field_->mul(value_, o.value_)}; }
FieldElement FieldElement::operator/(const FieldElement& o) const { return {field_, field_->div(value_, o.value_)}; }

}  // namespace qpoly::algebra
