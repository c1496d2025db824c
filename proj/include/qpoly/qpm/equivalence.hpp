#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "qpoly/qpm/qpolymatroid.hpp"

namespace qpoly::qpm {

enum class Verdict { yes, no, unknown };
std::string to_string(Verdict v);

struct EquivalenceResult {
  Verdict verdict = Verdict::unknown;
  /// l x l invertible A with rho_b(rowsp(B_V A)) = rho_a(V) for all V.
  std::optional<Mat> witness;
  std::uint64_t nodes = 0;
  std::string reason;
};

/// rho_b(V A) = rho_a(V) for every V.
bool check_isomorphism(const QPolymatroid& a, const QPolymatroid& b, const Mat& alpha);

/// Backtracking over images of e_1, ..., e_l. Candidates for the image of e_j
/// are restricted to vectors whose point profile (multiset of (dim, rank) over
/// the subspaces containing it) matches that of <e_j>; after fixing e_j every
/// subspace inside <e_1..e_j> that needs e_j is checked. Per-dimension rank
/// histograms are compared first. Returns unknown when `node_budget` is spent.
EquivalenceResult find_equivalence(const QPolymatroid& a, const QPolymatroid& b, std::uint64_t node_budget = 200'000'000);

}  // namespace qpoly::qpm
