#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qpoly/algebra/matrix.hpp"
#include "qpoly/qpm/qpolymatroid.hpp"

namespace qpoly::matroid {

using Mask = std::uint32_t;

/// Matroid on a labelled ground set of at most 20 elements, rank stored per
/// subset bitmask (bit i = ground element i).
class ClassicalMatroid {
 public:
  static constexpr int max_ground = 20;

  ClassicalMatroid() = default;
  ClassicalMatroid(std::vector<std::string> labels, std::vector<int> ranks);

  int size() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  int rank(Mask a) const { return ranks_[a]; }
  int full_rank() const { return ranks_.back(); }
  const std::vector<int>& ranks() const { return ranks_; }
  /// Mask of a label list; throws std::invalid_argument for unknown labels.
  Mask mask_of(const std::vector<std::string>& names) const;
  std::string set_text(Mask a) const;

  bool operator==(const ClassicalMatroid& o) const { return ranks_ == o.ranks_; }

 private:
  std::vector<std::string> labels_;
  std::vector<int> ranks_;
};

std::vector<std::string> default_labels(int n);

ClassicalMatroid uniform_matroid(int n, int k);
/// k-1 on the members of `a`, min(|X|, k) elsewhere. Members must be
/// k-subsets meeting pairwise in at most k-2 elements (std::invalid_argument).
ClassicalMatroid paving_matroid(std::vector<std::string> labels, int k, const std::vector<Mask>& a);

struct MatroidReport {
  bool ok = true;
  std::string axiom;
  std::string detail;
};
/// R1 everywhere, R2 on single-element extensions, R3 on all pairs when the
/// ground set has at most 10 elements and on the equivalent local form
/// r(A+e) + r(A+f) >= r(A+e+f) + r(A) otherwise.
MatroidReport verify_axioms(const ClassicalMatroid& m);

/// Minimal dependent sets, ascending by mask.
std::vector<Mask> circuits(const ClassicalMatroid& m);

/// r(A) = rank of the columns of G picked by A, for every subset A;
/// column_of[i] is the column representing ground element i.
bool check_representation(const ClassicalMatroid& m, const algebra::Mat& g, const std::vector<int>& column_of);

/// r(A) = rho(<rows of `basis` indexed by A>). Needs integral rank values.
ClassicalMatroid induced_matroid(const qpm::QPolymatroid& m, const algebra::Mat& basis);

struct LinkReport {
  bool ok = false;
  bool spaces_meet_properly = false;  ///< dim(V cap W) <= k-2 on the spanned spaces
  std::string detail;
};
/// Compares the paving matroid on the rows of `basis` with the matroid induced
/// by the paving q-matroid on the spans of the same subsets.
LinkReport link_check(const algebra::Mat& basis, int k, const std::vector<Mask>& a);

/// {"format": "matroid-paving", "ground": [labels], "k", "A": [[labels]]} or
/// {"format": "matroid-table", "ground": [labels], "ranks": [r(mask) for mask = 0..]}.
struct PavingData {
  std::string name;
  std::vector<std::string> ground;
  int k = 0;
  std::vector<Mask> a;
};
PavingData paving_from_json(const nlohmann::json& j);
ClassicalMatroid from_json(const nlohmann::json& j);
ClassicalMatroid read_matroid_json(std::istream& in);
nlohmann::json to_json(const ClassicalMatroid& m);

}  // namespace qpoly::matroid
