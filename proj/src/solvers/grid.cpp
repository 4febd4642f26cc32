#include "qfcm/core.hpp"
#include "qfcm/errors.hpp"
#include "qfcm/solvers.hpp"

#include <cmath>

namespace qfcm {

namespace {

// 1/eta rounded to an integer when it is one up to float noise, else 0.
Index integral_inverse(double eta) {
  const double inv = 1.0 / eta;
  const double rounded = std::round(inv);
  if (rounded >= 1.0 && std::abs(inv - rounded) <= 1e-12 * rounded) {
    return static_cast<Index>(rounded);
  }
  return 0;
}

}  // namespace

Index grid_levels(double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw ConfigError("grid width must lie in (0, 1]");
  if (const Index n = integral_inverse(eta)) return n;
  return static_cast<Index>(std::ceil(1.0 / eta));
}

double grid_value(Index s, double eta) {
  if (const Index n = integral_inverse(eta)) {
    return static_cast<double>(s) / static_cast<double>(n);
  }
  return static_cast<double>(s) * eta;
}

GridEstimate estimate_memberships_grid(const Dataset& data, MembershipOracle& oracle,
                                       const Eigen::Ref<const Vector>& center_hat, Index j,
                                       double eta) {
  GridEstimate est;
  est.eta = eta;
  const Index levels = grid_levels(eta);
  const std::uint64_t before = oracle.ledger().counts().membership;

  est.order = sort_by_distance(data, center_hat);
  est.thresholds.resize(levels + 1);
  for (Index s = 0; s <= levels; ++s) {
    est.thresholds[s] = binary_search_threshold(oracle, est.order, j, grid_value(s, eta));
  }

  // Rank p receives the largest level s whose threshold covers it.
  std::vector<double> by_rank(data.n(), 0.0);
  for (Index s = 1; s <= levels; ++s) {
    const double v = grid_value(s, eta);
    for (Index p = 0; p < est.thresholds[s]; ++p) by_rank[p] = v;
  }
  est.values = Vector::Zero(static_cast<Eigen::Index>(data.n()));
  for (Index p = 0; p < data.n(); ++p) {
    est.values(static_cast<Eigen::Index>(est.order[p])) = by_rank[p];
  }
  est.queries = oracle.ledger().counts().membership - before;
  return est;
}

}  // namespace qfcm
