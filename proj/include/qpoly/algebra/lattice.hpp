#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "qpoly/algebra/subspace.hpp"

namespace qpoly::algebra {

/// Number of k-dimensional subspaces of F_q^l. Throws std::overflow_error past 2^64.
std::uint64_t gaussian_binomial(int ell, int k, std::uint64_t q);
std::uint64_t subspace_count(int ell, std::uint64_t q);

/// Calls visit(V) for every k-dimensional subspace of F_q^l, ordered by pivot
/// set (lexicographic) and then by free entries read as a base-q number with
/// the first free entry most significant. Returning false from visit stops.
/// Subject to check_enum_budget.
void enumerate_subspaces(const FieldPtr& field, int ell, int k, const std::function<bool(const Subspace&)>& visit);
/// All subspaces by dimension 0..l, each layer in the order above.
std::vector<Subspace> enumerate_subspaces(const FieldPtr& field, int ell);
std::vector<Subspace> enumerate_subspaces(const FieldPtr& field, int ell, int k);

/// Every subspace of F_q^l, indexed in canonical order, with lookup and a
/// point-join table for closure and cover computations.
class SubspaceLattice {
 public:
  SubspaceLattice(FieldPtr field, int ell);

  /// Shared instance per (field, l).
  static std::shared_ptr<const SubspaceLattice> get(const FieldPtr& field, int ell);

  const FieldPtr& field() const { return field_; }
  int ell() const { return ell_; }
  std::size_t size() const { return all_.size(); }
  const Subspace& at(std::size_t i) const { return all_[i]; }
  const std::vector<Subspace>& all() const { return all_; }
  std::size_t dim_begin(int k) const { return offsets_[k]; }
  std::size_t dim_end(int k) const { return offsets_[k + 1]; }
  int dim_of(std::size_t i) const { return all_[i].dim(); }
  std::size_t zero_index() const { return 0; }
  std::size_t full_index() const { return all_.size() - 1; }

  /// Index of a subspace of F_q^l; throws std::invalid_argument for foreign input.
  std::size_t index_of(const Subspace& v) const;
  /// Index of the 1-space spanned by a nonzero vector.
  std::size_t point_of(std::span<const Elem> v) const;
  std::size_t num_points() const { return ell_ ? dim_end(1) - dim_begin(1) : 0; }
  /// Point indices of the RREF basis rows of the i-th subspace.
  const std::vector<std::uint32_t>& basis_points(std::size_t i) const { return basis_points_[i]; }

  /// Index of V + P where P is the p-th point (0-based within the dim-1 layer).
  std::size_t join_point(std::size_t v, std::size_t p) const {
    ensure_join_table();
    return join_[v * num_points() + p];
  }
  bool point_in(std::size_t v, std::size_t p) const { return join_point(v, p) == v; }

  std::size_t sum_index(std::size_t v, std::size_t w) const;
  std::size_t intersect_index(std::size_t v, std::size_t w) const;
  /// Index of V^perp for the standard dot product (lazily tabulated).
  std::size_t orth_index(std::size_t v) const;

 private:
  void ensure_join_table() const;

  FieldPtr field_;
  int ell_;
  std::vector<Subspace> all_;
  std::vector<std::size_t> offsets_;
  std::unordered_map<std::vector<Elem>, std::size_t, ElemVecHash> index_;
  std::vector<std::vector<std::uint32_t>> basis_points_;
  mutable std::once_flag join_once_;
  mutable std::vector<std::uint32_t> join_;
  mutable std::once_flag orth_once_;
  mutable std::vector<std::uint32_t> orth_;
};

}  // namespace qpoly::algebra
