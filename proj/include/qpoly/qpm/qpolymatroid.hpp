#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qpoly/algebra/lattice.hpp"
#include "qpoly/qpm/qrat.hpp"
#include "qpoly/rmcode/code.hpp"
#include "qpoly/rmcode/fqm.hpp"

namespace qpoly::qpm {

using algebra::Elem;
using algebra::FieldPtr;
using algebra::GramMatrix;
using algebra::Mat;
using algebra::Subspace;
using algebra::SubspaceLattice;

/// Rank function on the subspaces of F_q^l. Holds a pure oracle and a lazily
/// built table over the canonical enumeration; copies share both.
class QPolymatroid {
 public:
  using Oracle = std::function<QRat(const Subspace&)>;

  QPolymatroid(FieldPtr field, int ell, Oracle oracle, std::string provenance);
  /// `table` is indexed like SubspaceLattice::get(field, ell).
  static QPolymatroid from_table(FieldPtr field, int ell, std::vector<QRat> table, std::string provenance);

  const FieldPtr& field() const;
  int ell() const;
  const std::string& provenance() const;

  const SubspaceLattice& lattice() const;
  std::shared_ptr<const SubspaceLattice> lattice_ptr() const;

  /// Table lookup when the table exists, otherwise a direct oracle call.
  QRat rank(const Subspace& v) const;
  /// Forces the table.
  const QRat& rank_at(std::size_t index) const { return table()[index]; }
  const std::vector<QRat>& table() const;
  bool has_table() const;
  QRat full_rank() const;

 private:
  struct State;
  std::shared_ptr<State> s_;
};

QPolymatroid from_code_col(const rmcode::RankMetricCode& c);
QPolymatroid from_code_row(const rmcode::RankMetricCode& c);
/// rho(V) = rank over F_{q^m} of G * B_V^T.
QPolymatroid from_generator(const rmcode::FqmGenerator& g);
QPolymatroid uniform(const FieldPtr& field, int ell, int k);
QPolymatroid free_qmatroid(const FieldPtr& field, int ell);
QPolymatroid trivial(const FieldPtr& field, int ell);
/// k-1 on the members of `spaces`, min(k, dim V) elsewhere. Every member must
/// have dimension k and pairwise intersections of dimension <= k-2.
QPolymatroid paving(const FieldPtr& field, int ell, int k, const std::vector<Subspace>& spaces);

struct AxiomReport {
  bool ok = true;
  std::string axiom;  ///< "R1", "R2", "R3" or "point-closure"
  std::string detail;
  bool r3_all_pairs = true;  ///< false when only covering diamonds were checked
};

/// R1 on all V, R2 on covering pairs, R3 on all pairs (or on covering
/// diamonds when the lattice has more than `pair_limit` members), and the
/// derived point-closure property: if rho(V + <x>) = rho(V) for all x in W
/// then rho(V + W) = rho(V).
AxiomReport verify_axioms(const QPolymatroid& m, std::size_t pair_limit = 4000);

/// rho*(V) = dim V + rho(V^perp) - rho(E) for the form given by `q`.
QPolymatroid dual(const QPolymatroid& m, const GramMatrix& q);
QPolymatroid dual(const QPolymatroid& m);

struct Denominators {
  QRat principal;
  bool is_qmatroid = false;
};
/// lcm of value denominators over gcd of value numerators (1 for the trivial q-PM).
Denominators denominators(const QPolymatroid& m);
/// Some 1-space has rank 1.
bool is_exact(const QPolymatroid& m);
/// a * rho, checked against R1-R3; throws PropertyViolation otherwise.
QPolymatroid rescale(const QPolymatroid& m, const QRat& a);
/// max rho(V)/dim V over nonzero V (attained on a 1-space). Dividing by it makes M exact.
QRat exactify_factor(const QPolymatroid& m);
QPolymatroid exactify(const QPolymatroid& m);

/// Per-dimension multiset of rank values.
std::vector<std::map<QRat, std::uint64_t>> histogram(const QPolymatroid& m);

/// Index of the first subspace where the tables differ, if any.
std::optional<std::size_t> first_difference(const QPolymatroid& a, const QPolymatroid& b);
bool same_ranks(const QPolymatroid& a, const QPolymatroid& b);

}  // namespace qpoly::qpm
