#include "qfcm/errors.hpp"
#include "qfcm/harness.hpp"
#include "qfcm/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qfcm {

void SyntheticSpec::validate() const {
  if (k < 1) throw ConfigError("synthetic settings need k >= 1");
  if (d < 1) throw ConfigError("synthetic settings need d >= 1");
  if (sizes.size() != k) throw ConfigError("synthetic settings need one size per cluster");
  for (Index s : sizes) {
    if (s < 1) throw ConfigError("every cluster size must be at least 1");
  }
  if (!(center_separation > 0.0)) throw ConfigError("center separation must be positive");
  if (!(point_std >= 0.0)) throw ConfigError("point std must be nonnegative");
}

SyntheticSpec SyntheticSpec::imbalanced(double zeta, Index base, std::uint64_t seed) {
  if (!(zeta > 0.0)) throw ConfigError("zeta must be positive");
  SyntheticSpec spec;
  const auto big = static_cast<Index>(std::llround(static_cast<double>(base) * zeta));
  spec.sizes = {base, big, big, big};
  spec.seed = seed;
  return spec;
}

LabeledDataset generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng = make_rng(spec.seed, {0x5e7});
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto k = static_cast<Eigen::Index>(spec.k);
  const auto d = static_cast<Eigen::Index>(spec.d);
  const double sep = spec.center_separation;

  Matrix centers(k, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    if (spec.first_center_only) {
      centers(0, c) = 0.0;
      for (Eigen::Index j = 1; j < k; ++j) {
        const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
        centers(j, c) = sign * (sep + 0.5 * sep * unit(rng));
      }
    } else {
      // Ranked slots 1.5 sep apart with jitter below 0.5 sep keep every pair
      // at least sep apart in this coordinate.
      std::vector<Index> rank(spec.k);
      std::iota(rank.begin(), rank.end(), Index{0});
      std::shuffle(rank.begin(), rank.end(), rng);
      for (Eigen::Index j = 0; j < k; ++j) {
        centers(j, c) = static_cast<double>(rank[static_cast<std::size_t>(j)]) * 1.5 * sep +
                        0.5 * sep * unit(rng);
      }
    }
    centers.col(c).array() -= centers.col(c).mean();
  }

  const Index n = std::accumulate(spec.sizes.begin(), spec.sizes.end(), Index{0});
  Matrix points(static_cast<Eigen::Index>(n), d);
  Labels labels(n);
  Index row = 0;
  for (Index j = 0; j < spec.k; ++j) {
    for (Index t = 0; t < spec.sizes[j]; ++t, ++row) {
      for (Eigen::Index c = 0; c < d; ++c) {
        points(static_cast<Eigen::Index>(row), c) =
            centers(static_cast<Eigen::Index>(j), c) + spec.point_std * normal(rng);
      }
      labels[row] = j;
    }
  }
  return {Dataset(std::move(points)), std::move(labels), std::move(centers)};
}

}  // namespace qfcm
