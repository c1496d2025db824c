#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qpoly/rmcode/code.hpp"

namespace qpoly::weights {

using rmcode::RankMetricCode;

/// Entry i-1 holds the i-th weight, i = 1..dim C. Codes must satisfy m >= n.
struct WeightProfile {
  int n = 0, m = 0, k = 0;
  std::vector<int> a_c, a_r;  ///< column and row versions; a_r only for m = n
  std::vector<int> a;         ///< a_c when m > n, min(a_c, a_r) when m = n
  std::vector<int> b_c, b_r;  ///< the same maxima restricted to flats (empty unless computed)
};

/// Transposes when m < n; `transposed` reports whether it did.
RankMetricCode orient(const RankMetricCode& c, bool* transposed = nullptr);

/// a_i^c = n - max{dim V : rho_c(V) <= rho_c(E) - i/m}, a_i^r likewise with
/// rho_r and i/n. Throws std::invalid_argument for m < n or the zero code.
WeightProfile gen_weights_qpm(const RankMetricCode& c);
/// gen_weights_qpm plus b_c, b_r from the flats of both q-PMs.
WeightProfile gen_weights_flats(const RankMetricCode& c);

/// Largest rank of a codeword (enumeration, q^k <= 2^24).
int maxrk(const RankMetricCode& c);
/// dim C = m * maxrk(C).
bool is_optimal_anticode(const RankMetricCode& c);
/// F^{n x m}(V, c) and F^{n x m}(W, r) as codes.
RankMetricCode column_anticode(const algebra::Subspace& v, int m);
RankMetricCode row_anticode(int n, const algebra::Subspace& w);

/// a_i straight from the definition: min (1/m) dim A over the optimal
/// anticodes A = F(V, c) (and F(W, r) when m = n) with dim(C cap A) >= i.
/// Intersections are computed in F_q^{nm}. All i at once.
std::vector<int> anticode_weights(const RankMetricCode& c);
int anticode_oracle(const RankMetricCode& c, int i);

struct HyperplaneDistance {
  int d = 0;                  ///< n - max dim of a hyperplane of M_c(C)
  std::optional<int> d_row;   ///< m - max dim of a hyperplane of M_r(C), for m = n
};
HyperplaneDistance rank_distance_via_hyperplanes(const RankMetricCode& c);

nlohmann::json to_json(const WeightProfile& w);
/// Header i,a_c,a_r,a,b_c,b_r; b columns are blank when not computed.
std::string to_csv(const WeightProfile& w);

}  // namespace qpoly::weights
