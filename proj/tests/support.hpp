#pragma once

// Fixtures and brute-force reference implementations shared by the unit
// tests and the acceptance runner.

#include "qfcm/core.hpp"
#include "qfcm/oracle.hpp"
#include "qfcm/rng.hpp"
#include "qfcm/types.hpp"

#include <optional>
#include <vector>

namespace qfcm::testing {

/// n points drawn uniformly from [-scale, scale]^d.
Dataset random_dataset(Index n, Index d, double scale, Rng& rng);

/// Random row-stochastic n x k matrix with entries bounded away from 0.
Matrix random_memberships(Index n, Index k, Rng& rng);

struct ConsistentInstance {
  Dataset data;
  Clustering target;
  double alpha = 2.0;
  double gamma = 0.0;
};

/// Tight, well-separated blobs whose memberships depend only on the blob and
/// decrease with blob-to-center distance; centers are the weighted means.
/// Resamples until the result passes is_consistent_center_based and has
/// gamma > 0.
ConsistentInstance consistent_instance(Index n, Index k, Index d, double alpha, Rng& rng);

/// Each center moved by exactly `radius` in a uniformly random direction.
Matrix perturb_centers(const Matrix& centers, double radius, Rng& rng);

/// Single-column target holding a non-increasing sequence of n values in
/// [0, 1] with deliberate runs of equal values.
Clustering monotone_column(Index n, Rng& rng);

double naive_objective(const Dataset& data, const Matrix& centers, const Matrix& u, double alpha);

/// Minimum assignment cost by enumerating all permutations.
double brute_force_assignment(const Matrix& cost);

/// Row-stochastic matrix whose rows are forced to be pure for the first k
/// rows (row t pure in cluster t) when `pure_prefix` is set.
Matrix simplex_rows(Index n, Index k, bool pure_prefix, Rng& rng);

/// Max entrywise gap between `found` and `truth` after pairing each column of
/// `found` with the nearest column of `truth`; +infinity when that pairing is
/// not a permutation. `sigma` receives the pairing.
double matched_column_error(const Matrix& truth, const Matrix& found,
                            std::vector<Index>* sigma = nullptr);

/// Oracle target for a bare membership matrix (centers zero).
Clustering bare_target(const Matrix& u);

}  // namespace qfcm::testing
