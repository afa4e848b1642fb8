#pragma once

#include <cstdint>
#include <vector>

namespace sgp {

/// Per-dimension levels j = (j_1, ..., j_d), every entry >= 1.
using MultiIndex = std::vector<int>;

int level_sum(const MultiIndex& j);

/// Exact binomial coefficient; returns 0 when k < 0 or k > n.
std::uint64_t binomial(int n, int k);

/// Ordering used everywhere a set of multi-indices is listed: by level sum,
/// then lexicographically.
bool multi_index_less(const MultiIndex& a, const MultiIndex& b);

/// All j with entries >= 1 and |j| <= eta, in multi_index_less order.
/// Throws InvalidLevelError when eta < d or d < 1.
std::vector<MultiIndex> index_set_J(int eta, int d);

/// The subset of index_set_J with max(d, eta - d + 1) <= |j| <= eta. These are
/// the multi-indices carrying a nonzero combination coefficient.
std::vector<MultiIndex> index_set_P(int eta, int d);

/// (-1)^(eta - |j|) * binomial(d - 1, eta - |j|).
std::int64_t smolyak_coefficient(const MultiIndex& j, int eta, int d);

/// Position of j within index_set_J(eta, d) for any eta >= |j|. Computed
/// combinatorially; the rank does not depend on eta because the ordering
/// lists smaller level sums first.
std::size_t multi_index_rank(const MultiIndex& j);

}  // namespace sgp
