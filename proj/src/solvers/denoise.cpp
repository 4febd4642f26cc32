#include "qfcm/errors.hpp"
#include "qfcm/solvers.hpp"

#include <algorithm>
#include <cmath>

namespace qfcm {

namespace {

// ceil that ignores float noise just above an integer.
Index safe_ceil(double x) { return static_cast<Index>(std::max(1.0, std::ceil(x - 1e-9))); }

}  // namespace

DenoisedMembershipOracle::DenoisedMembershipOracle(MembershipOracle& noisy, double sigma,
                                                   double kappa, std::optional<Index> batches,
                                                   std::optional<Index> batch_size)
    : noisy_(noisy) {
  if (!(kappa > 0.0)) throw ConfigError("kappa must be positive");
  if (sigma < 0.0) throw ConfigError("sigma must be nonnegative");
  const double n = static_cast<double>(std::max<Index>(noisy.n(), 2));
  batches_ = batches.value_or(safe_ceil(6.0 * std::log2(n)));
  batch_size_ = batch_size.value_or(safe_ceil(4.0 * sigma * sigma / (kappa * kappa)));
  if (batches_ < 1 || batch_size_ < 1) throw ConfigError("batch counts must be positive");
  means_.resize(batches_);
}

double DenoisedMembershipOracle::membership(Index i, Index j) {
  ledger_.charge(QueryType::kMembership);
  for (Index b = 0; b < batches_; ++b) {
    double sum = 0.0;
    for (Index t = 0; t < batch_size_; ++t) sum += noisy_.membership(i, j);
    means_[b] = sum / static_cast<double>(batch_size_);
  }
  std::sort(means_.begin(), means_.end());
  const Index mid = batches_ / 2;
  const double answer = batches_ % 2 == 1 ? means_[mid] : 0.5 * (means_[mid - 1] + means_[mid]);
  ledger_.log({QueryType::kMembership, i, j, 0, answer});
  return answer;
}

}  // namespace qfcm
