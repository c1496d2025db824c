#include "qpoly/algebra/lattice.hpp"

#include <map>
#include <stdexcept>
#include <string>

#include "qpoly/algebra/budget.hpp"
#include "qpoly/algebra/errors.hpp"

namespace qpoly::algebra {

std::uint64_t gaussian_binomial(int ell, int k, std::uint64_t q) {
  if (k < 0 || k > ell) return 0;
  // Pascal-style recurrence [l,k] = [l-1,k-1] + q^k [l-1,k], exact in integers.
  std::vector<std::uint64_t> row(ell + 1, 0);
  row[0] = 1;
  for (int l = 1; l <= ell; ++l) {
    for (int j = std::min(l, k); j >= 1; --j) {
      std::uint64_t qj = 1;
      for (int t = 0; t < j; ++t)
        if (__builtin_mul_overflow(qj, q, &qj)) throw std::overflow_error("gaussian binomial overflow");
      std::uint64_t term;
      if (__builtin_mul_overflow(qj, row[j], &term) || __builtin_add_overflow(term, row[j - 1], &row[j]))
        throw std::overflow_error("gaussian binomial overflow");
    }
  }
  return row[k];
}

std::uint64_t subspace_count(int ell, std::uint64_t q) {
  std::uint64_t total = 0;
  for (int k = 0; k <= ell; ++k)
    if (__builtin_add_overflow(total, gaussian_binomial(ell, k, q), &total)) throw std::overflow_error("subspace count overflow");
  return total;
}

void enumerate_subspaces(const FieldPtr& field, int ell, int k, const std::function<bool(const Subspace&)>& visit) {
  check_enum_budget(ell, *field);
  if (k < 0 || k > ell) return;
  const Elem q = field->q();
  std::vector<int> piv(k);
  for (int i = 0; i < k; ++i) piv[i] = i;
  while (true) {
    // Free positions: row i, column j > piv[i], j not a pivot.
    std::vector<bool> is_piv(ell, false);
    for (int p : piv) is_piv[p] = true;
    std::vector<std::pair<int, int>> free_pos;
    for (int i = 0; i < k; ++i)
      for (int j = piv[i] + 1; j < ell; ++j)
        if (!is_piv[j]) free_pos.emplace_back(i, j);
    Mat basis(field, k, ell);
    for (int i = 0; i < k; ++i) basis(i, piv[i]) = 1;
    std::vector<Elem> digits(free_pos.size(), 0);
    while (true) {
      for (std::size_t t = 0; t < free_pos.size(); ++t) basis(free_pos[t].first, free_pos[t].second) = digits[t];
      if (!visit(Subspace::from_rref(basis, piv))) return;
      int t = static_cast<int>(free_pos.size()) - 1;
      while (t >= 0 && ++digits[t] == q) digits[t--] = 0;
      if (t < 0) break;
    }
    // Next k-combination in lexicographic order.
    int i = k - 1;
    while (i >= 0 && piv[i] == ell - k + i) --i;
    if (i < 0) break;
    ++piv[i];
    for (int j = i + 1; j < k; ++j) piv[j] = piv[j - 1] + 1;
  }
}

std::vector<Subspace> enumerate_subspaces(const FieldPtr& field, int ell, int k) {
  std::vector<Subspace> out;
  enumerate_subspaces(field, ell, k, [&](const Subspace& s) {
    out.push_back(s);
    return true;
  });
  return out;
}

std::vector<Subspace> enumerate_subspaces(const FieldPtr& field, int ell) {
  std::vector<Subspace> out;
  for (int k = 0; k <= ell; ++k) {
    auto layer = enumerate_subspaces(field, ell, k);
    out.insert(out.end(), std::make_move_iterator(layer.begin()), std::make_move_iterator(layer.end()));
  }
  return out;
}

SubspaceLattice::SubspaceLattice(FieldPtr field, int ell) : field_(std::move(field)), ell_(ell) {
  check_enum_budget(ell_, *field_);
  const std::uint64_t total = subspace_count(ell_, field_->q());
  if (total > lattice_size_cap())
    throw BudgetExceeded("subspace lattice of F_" + std::to_string(field_->q()) + "^" + std::to_string(ell_) + " has " +
                         std::to_string(total) + " members, above the cap of " + std::to_string(lattice_size_cap()));
  all_.reserve(total);
  offsets_.push_back(0);
  for (int k = 0; k <= ell_; ++k) {
    enumerate_subspaces(field_, ell_, k, [&](const Subspace& s) {
      all_.push_back(s);
      return true;
    });
    offsets_.push_back(all_.size());
  }
  index_.reserve(all_.size());
  for (std::size_t i = 0; i < all_.size(); ++i) index_.emplace(all_[i].basis().data(), i);
  basis_points_.resize(all_.size());
  for (std::size_t i = 0; i < all_.size(); ++i) {
    const Subspace& v = all_[i];
    for (int r = 0; r < v.dim(); ++r) basis_points_[i].push_back(static_cast<std::uint32_t>(point_of(v.basis().row(r))));
  }
}

std::shared_ptr<const SubspaceLattice> SubspaceLattice::get(const FieldPtr& field, int ell) {
  static std::mutex mu;
  static std::map<std::pair<std::string, int>, std::shared_ptr<const SubspaceLattice>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(field->describe(), ell);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto lat = std::make_shared<const SubspaceLattice>(field, ell);
  cache.emplace(key, lat);
  return lat;
}

std::size_t SubspaceLattice::index_of(const Subspace& v) const {
  if (v.ambient() != ell_) throw std::invalid_argument("subspace ambient does not match lattice");
  auto it = index_.find(v.basis().data());
  if (it == index_.end()) throw std::invalid_argument("subspace not in lattice (not canonical?)");
  return it->second;
}

std::size_t SubspaceLattice::point_of(std::span<const Elem> v) const {
  const Field& f = *field_;
  std::vector<Elem> w(v.begin(), v.end());
  std::size_t lead = 0;
  while (lead < w.size() && !w[lead]) ++lead;
  if (lead == w.size()) throw std::invalid_argument("zero vector spans no point");
  const Elem inv = f.inv(w[lead]);
  for (Elem& x : w) x = f.mul(x, inv);
  auto it = index_.find(w);
  if (it == index_.end()) throw std::invalid_argument("vector length does not match lattice");
  return it->second - dim_begin(1);
}

void SubspaceLattice::ensure_join_table() const {
  std::call_once(join_once_, [this] {
    const std::size_t np = num_points();
    join_.assign(all_.size() * np, 0);
    parallel_for(all_.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t v = b; v < e; ++v) {
        const Subspace& V = all_[v];
        for (std::size_t p = 0; p < np; ++p) {
          const Subspace& P = all_[dim_begin(1) + p];
          if (V.contains(P.basis().row(0))) {
            join_[v * np + p] = static_cast<std::uint32_t>(v);
          } else {
            join_[v * np + p] = static_cast<std::uint32_t>(index_of(sum(V, P)));
          }
        }
      }
    });
  });
}

std::size_t SubspaceLattice::sum_index(std::size_t v, std::size_t w) const {
  std::size_t r = v;
  for (auto p : basis_points_[w]) r = join_point(r, p);
  return r;
}

std::size_t SubspaceLattice::intersect_index(std::size_t v, std::size_t w) const {
  return orth_index(sum_index(orth_index(v), orth_index(w)));
}

std::size_t SubspaceLattice::orth_index(std::size_t v) const {
  std::call_once(orth_once_, [this] {
    orth_.assign(all_.size(), 0);
    parallel_for(all_.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) orth_[i] = static_cast<std::uint32_t>(index_of(orthogonal(all_[i])));
    });
  });
  return orth_[v];
}

}  // namespace qpoly::algebra
