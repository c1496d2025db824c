#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qpoly/qpm/qpolymatroid.hpp"

namespace qpoly::flats {

using qpm::QPolymatroid;
using qpm::QRat;
using algebra::Subspace;

/// cl(V): V plus every point P with rho(V + P) = rho(V). Lattice indices.
std::size_t closure_index(const QPolymatroid& m, std::size_t v);
Subspace closure(const QPolymatroid& m, const Subspace& v);
/// Adds one rank-preserving point at a time until none is left.
Subspace closure_fixpoint(const QPolymatroid& m, const Subspace& v);
/// cl over the whole lattice, indexed like m.lattice().
std::vector<std::uint32_t> closure_table(const QPolymatroid& m);

bool is_flat(const QPolymatroid& m, const Subspace& f);

/// Flats in canonical lattice order with their ranks and the cover relation.
struct FlatLattice {
  QPolymatroid m;
  std::vector<std::uint32_t> index;             ///< lattice index of each flat
  std::vector<std::int32_t> flat_of;            ///< lattice index -> flat id or -1
  std::vector<std::uint32_t> closure;           ///< lattice index -> lattice index of cl(V)
  std::vector<std::vector<std::uint32_t>> up;   ///< flats covering flat i
  std::vector<std::vector<std::uint32_t>> down; ///< flats covered by flat i
  std::uint32_t bottom = 0;                     ///< cl(0)
  std::uint32_t top = 0;                        ///< E

  std::size_t size() const { return index.size(); }
  const Subspace& at(std::size_t f) const { return m.lattice().at(index[f]); }
  const QRat& rank(std::size_t f) const { return m.rank_at(index[f]); }
  int dim(std::size_t f) const { return m.lattice().dim_of(index[f]); }
  /// Flat id of a subspace that is a flat; throws std::invalid_argument otherwise.
  std::size_t id_of(const Subspace& f) const;
};

FlatLattice flats_all(const QPolymatroid& m);
/// Flats covered by E, in canonical order.
std::vector<std::uint32_t> hyperplanes(const FlatLattice& lat);

std::uint32_t meet(const FlatLattice& lat, std::uint32_t a, std::uint32_t b);
std::uint32_t join(const FlatLattice& lat, std::uint32_t a, std::uint32_t b);
const std::vector<std::uint32_t>& covers(const FlatLattice& lat, std::uint32_t f);
/// Longest chain length from cl(0) to each flat.
std::vector<int> chain_heights(const FlatLattice& lat);
int chain_height(const FlatLattice& lat, std::uint32_t f);

struct Check {
  bool ok = true;
  std::string witness;
};

/// CL1-CL3, F1, F2, and cl(V) equal to the intersection of the flats above V.
struct ClosureReport {
  Check cl1, cl2, cl3, f1, f2, intersection_formula, rank_preserved;
  bool ok() const;
};
ClosureReport closure_axioms_check(const FlatLattice& lat);

/// Properties that every q-matroid has and a q-PM may lack.
struct QMatroidReport {
  Check cl4;
  Check f3;
  Check semimodular;
  Check chains;  ///< maximal chains between comparable flats have one length
  Check hyperplane_ranks;
  std::vector<QRat> hyperplane_rank_values;  ///< distinct, ascending
  bool ok() const;
};
QMatroidReport qmatroid_axioms_check(const FlatLattice& lat);

/// F1-F3 for an arbitrary collection of subspaces of F_q^l.
QMatroidReport flat_axioms_check(const algebra::FieldPtr& field, int ell, const std::vector<Subspace>& flats);

/// rho(V) = height of the intersection of the members above V. Throws
/// PropertyViolation unless the collection satisfies F1-F3.
QPolymatroid qmatroid_from_flats(const algebra::FieldPtr& field, int ell, const std::vector<Subspace>& flats);

/// rho(V) = rho(cl(V)) read back from the flat ranks alone.
QPolymatroid from_flat_ranks(const FlatLattice& lat);

/// {"format": "flat-lattice", "q", "modulus", "ell",
///  "nodes": [{"subspace": [rows], "rank": "n/d"}], "edges": [[lower, upper], ...]}
nlohmann::json to_json(const FlatLattice& lat);
/// Reads the node subspaces of a flat-lattice document.
std::vector<Subspace> flats_from_json(const nlohmann::json& j, algebra::FieldPtr* field = nullptr, int* ell = nullptr);

}  // namespace qpoly::flats
