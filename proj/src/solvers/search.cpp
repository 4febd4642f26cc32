#include "qfcm/solvers.hpp"

#include <cmath>

namespace qfcm {

Index ceil_log2(Index n) {
  Index bits = 0;
  Index v = 1;
  while (v < n) {
    v <<= 1;
    ++bits;
  }
  return bits;
}

Index binary_search_threshold(MembershipOracle& oracle, const Permutation& pi, Index j, double x) {
  const Index n = pi.size();
  if (x <= 0.0) return n;
  Index low = 0;
  Index high = n;
  while (low < high) {
    const Index mid = low + (high - low + 1) / 2;  // >= 1
    if (oracle.membership(pi[mid - 1], j) >= x) {
      low = mid;
    } else {
      high = mid - 1;
    }
  }
  return low;
}

Search2Result binary_search2(MembershipOracle& oracle, const Permutation& pi, Index t1, double x) {
  const Index n = pi.size();
  if (x <= 0.0) return {1, std::nullopt};
  Index low = 1;
  Index high = n + 1;
  std::optional<double> at_high;
  while (low < high) {
    const Index mid = low + (high - low) / 2;  // <= n
    const double v = 1.0 - oracle.membership(pi[mid - 1], t1);
    if (v >= x) {
      high = mid;
      at_high = v;
    } else {
      low = mid + 1;
    }
  }
  if (low == n + 1) return {low, std::nullopt};
  return {low, at_high};
}

}  // namespace qfcm
