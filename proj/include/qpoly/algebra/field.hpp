#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qpoly::algebra {

/// Element of GF(p^e), stored as the integer whose base-p digits are the
/// coefficient vector (little-endian) in the polynomial basis 1, x, ..., x^{e-1}.
/// For p = 2 this is the bit-packed coefficient word.
using Elem = std::uint32_t;

class Field;
using FieldPtr = std::shared_ptr<const Field>;

/// Finite field GF(p^e) = GF(p)[x]/(f) with an explicit monic irreducible modulus f.
///
/// Immutable; create through Field::make and share the pointer. Multiplication
/// uses log/antilog tables, addition is XOR for p = 2 and digit-wise otherwise.
class Field {
 public:
  static constexpr int kMaxOrderBits = 16;

  /// `modulus` holds c_0..c_e (little-endian, c_e = 1). When omitted the pinned
  /// default for (p, e) is used. Throws std::invalid_argument for a non-prime p,
  /// a wrong-degree/non-monic modulus, or a reducible one.
  static FieldPtr make(int p, int e = 1, std::optional<std::vector<int>> modulus = std::nullopt);

  /// Pinned default modulus for (p, e) (Conway polynomial where tabulated,
  /// otherwise the lexicographically smallest monic irreducible).
  static std::vector<int> default_modulus(int p, int e);

  static bool is_irreducible(std::span<const int> poly, int p);

  int p() const { return p_; }
  int e() const { return e_; }
  Elem q() const { return q_; }
  bool is_prime_field() const { return e_ == 1; }
  const std::vector<int>& modulus() const { return modulus_; }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  /// Class of x in GF(p)[x]/(f), i.e. a root of the modulus. Only meaningful for e > 1.
  Elem root() const { return e_ > 1 ? static_cast<Elem>(p_) : 1; }
  /// A generator of the multiplicative group.
  Elem primitive() const { return primitive_; }

  Elem add(Elem a, Elem b) const;
  Elem sub(Elem a, Elem b) const;
  Elem neg(Elem a) const;
  Elem mul(Elem a, Elem b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, std::uint64_t k) const;

  std::vector<int> coeffs(Elem a) const;
  Elem from_coeffs(std::span<const int> c) const;

  /// Same characteristic, degree and modulus.
  bool same_as(const Field& other) const {
    return p_ == other.p_ && e_ == other.e_ && modulus_ == other.modulus_;
  }

  /// "q=<p>^<e> modulus=<c_0,...,c_e>" (prime fields print modulus=none).
  std::string describe() const;
  std::string modulus_string() const;

 private:
  Field(int p, int e, std::vector<int> modulus);
  Elem poly_mul(Elem a, Elem b) const;
  Elem digit_add(Elem a, Elem b, int sign) const;

  int p_;
  int e_;
  Elem q_;
  std::vector<int> modulus_;
  Elem primitive_ = 1;
  std::vector<Elem> exp_;           // size 2(q-1)
  std::vector<std::uint32_t> log_;  // size q
  std::vector<Elem> add_table_;     // odd p and small q only
  std::vector<Elem> neg_table_;
};

/// Value type pairing an element with its field, for API callers that want
/// operator syntax. Internal kernels use raw Elem with an explicit field.
class FieldElement {
 public:
  FieldElement(FieldPtr field, Elem value);
  const FieldPtr& field() const { return field_; }
  Elem value() const { return value_; }

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator/(const FieldElement& o) const;
  FieldElement pow(std::uint64_t k) const { return {field_, field_->pow(value_, k)}; }
  bool operator==(const FieldElement& o) const { return value_ == o.value_ && field_->same_as(*o.field_); }

 private:
  FieldPtr field_;
  Elem value_;
};

bool is_prime(int n);

}  // namespace qpoly::algebra
