#include "sgp/multi_index.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "sgp/errors.hpp"

namespace sgp {

int level_sum(const MultiIndex& j) { return std::accumulate(j.begin(), j.end(), 0); }

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    // result * (n - k + i) is divisible by i at every step.
    result = result * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return result;
}

bool multi_index_less(const MultiIndex& a, const MultiIndex& b) {
  const int sa = level_sum(a);
  const int sb = level_sum(b);
  if (sa != sb) return sa < sb;
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

namespace {

void check_level(int eta, int d) {
  if (d < 1) throw InvalidLevelError("dimension must be >= 1, got " + std::to_string(d));
  if (eta < d) {
    throw InvalidLevelError("level of construction " + std::to_string(eta) +
                            " is below the dimension " + std::to_string(d));
  }
}

// Appends every composition of `total` into `parts.size() - pos` positive
// parts, written into parts[pos..], in lexicographic order.
void compositions(int total, std::size_t pos, MultiIndex& parts, std::vector<MultiIndex>& out) {
  const std::size_t remaining = parts.size() - pos;
  if (remaining == 1) {
    parts[pos] = total;
    out.push_back(parts);
    return;
  }
  const int max_first = total - static_cast<int>(remaining - 1);
  for (int v = 1; v <= max_first; ++v) {
    parts[pos] = v;
    compositions(total - v, pos + 1, parts, out);
  }
}

std::vector<MultiIndex> sums_between(int lo, int hi, int d) {
  std::vector<MultiIndex> out;
  MultiIndex parts(static_cast<std::size_t>(d), 1);
  for (int s = lo; s <= hi; ++s) compositions(s, 0, parts, out);
  return out;
}

}  // namespace

std::vector<MultiIndex> index_set_J(int eta, int d) {
  check_level(eta, d);
  return sums_between(d, eta, d);
}

std::vector<MultiIndex> index_set_P(int eta, int d) {
  check_level(eta, d);
  return sums_between(std::max(d, eta - d + 1), eta, d);
}

std::int64_t smolyak_coefficient(const MultiIndex& j, int eta, int d) {
  const int gap = eta - level_sum(j);
  const auto magnitude = static_cast<std::int64_t>(binomial(d - 1, gap));
  return (gap % 2 == 0) ? magnitude : -magnitude;
}

std::size_t multi_index_rank(const MultiIndex& j) {
  const int d = static_cast<int>(j.size());
  const int s = level_sum(j);
  // Compositions of t into d positive parts: binomial(t - 1, d - 1).
  std::size_t rank = 0;
  for (int t = d; t < s; ++t) rank += binomial(t - 1, d - 1);
  int remaining = s;
  for (int i = 0; i + 1 < d; ++i) {
    const int parts_after = d - i - 1;
    for (int v = 1; v < j[static_cast<std::size_t>(i)]; ++v) {
      rank += binomial(remaining - v - 1, parts_after - 1);
    }
    remaining -= j[static_cast<std::size_t>(i)];
  }
  return rank;
}

}  // namespace sgp
