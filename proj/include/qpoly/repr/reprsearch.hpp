#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qpoly/qpm/equivalence.hpp"
#include "qpoly/qpm/qpolymatroid.hpp"
#include "qpoly/rmcode/fqm.hpp"

namespace qpoly::repr {

using algebra::Mat;
using qpm::QPolymatroid;

/// M equivalent to M_c(C). Three-valued; `witness` maps M onto M_c(C).
qpm::EquivalenceResult is_represented_by(const QPolymatroid& m, const rmcode::RankMetricCode& c,
                                         std::uint64_t node_budget = 200'000'000);

/// Zero fields mean "no cap".
struct SearchBudget {
  std::uint64_t max_candidates = 0;
  std::uint64_t max_orbit_nodes = 50'000'000;  ///< per GL equivalence test
  double time_cap_seconds = 0;
};

enum class SearchStatus { found, exhausted, budget };
std::string to_string(SearchStatus s);

struct SearchReport {
  SearchStatus status = SearchStatus::exhausted;
  int k = 0, n = 0, m = 0;
  std::uint64_t candidates_total = 0;     ///< Gaussian binomial [n choose k] over q^m
  std::uint64_t candidates_examined = 0;
  std::uint64_t histogram_passed = 0;
  std::uint64_t gl_unknown = 0;
  std::optional<rmcode::FqmGenerator> witness;
  std::optional<Mat> iso;  ///< maps M onto M_c(expand(witness))
};

/// All k-dim row spaces of F_{q^m}^n (RREF, canonical order), k = rho(E) <= 3,
/// q prime. Candidates whose per-dimension rank histogram differs from M's are
/// dropped before the GL_n(F_q) test. A returned witness has passed the round
/// trip expand -> column q-PM -> check_isomorphism. The earliest witness in
/// enumeration order is returned regardless of thread count.
SearchReport search_fqm_representation(const QPolymatroid& m, int ext_degree, const SearchBudget& budget = {});

nlohmann::json to_json(const SearchReport& r, bool emit_witness);

/// The four 2-spaces of F_2^4 from the non-representability theorem.
std::vector<algebra::Subspace> spread_spaces();
/// Paving q-matroid of rank 2 dropping the spread spaces to rank 1.
QPolymatroid spread_qmatroid();

struct SpreadObstructionReport {
  int m = 0;
  bool spread_axioms_ok = false;
  bool table_matches_display = false;  ///< 2m - m rho(W^perp) agrees with the case table
  // exhaustive part (m <= 2)
  bool exhaustive = false;
  std::uint64_t candidates = 0, gaussian_count = 0;
  std::uint64_t fail_small = 0;    ///< some space of dim <= 1 meets C
  std::uint64_t fail_spread = 0;   ///< dim C(V_i, c) != m for some spread space
  std::uint64_t fail_dim3 = 0;
  std::uint64_t fail_witness = 0;  ///< the rest, failing at <1010,0101>
  std::uint64_t fail_other = 0;
  std::uint64_t survivors = 0;
  std::uint64_t equivalence_no = 0;  ///< m = 1: candidates rejected by is_represented_by
  // structural part
  bool t_is_s_squared = false, t_is_s_inverse = false, t_squared_is_i_plus_t = false, f4_closed = false;
  bool spread_block_shape = false;    ///< V_2 = rowsp(I | S^T), V_3 = rowsp(I | T^T)
  bool spread_self_orthogonal = false;
  std::string witness;
  bool witness_outside_spread = false;
  bool odd_m_excluded = false;        ///< m odd: no T-invariant space of dimension m
  int forced_code_dim = -1;           ///< m even: the forced basis shape spans 2m dimensions
  int forced_witness_dim = -1;        ///< ... and meets F(<1010,0101>, c) in >= m/2
  bool forced_spread_dims_ok = false; ///< ... while dim C(V_i, c) = m for all four spread spaces

  bool ok() const;
};

/// m <= 2 exhaustive plus structural; m <= 6 structural only; BudgetExceeded beyond.
SpreadObstructionReport verify_spread_obstruction(int m);
nlohmann::json to_json(const SpreadObstructionReport& r);

}  // namespace qpoly::repr
