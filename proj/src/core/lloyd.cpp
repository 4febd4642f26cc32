#include "qfcm/core.hpp"
#include "qfcm/errors.hpp"
#include "qfcm/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace qfcm {

namespace {

// Memberships for the current centers, reseeding any center whose column
// carries no mass until every column is usable.
Matrix memberships_with_reseed(const Dataset& data, Matrix& centers, double alpha, Rng& rng,
                               Index& reseeds) {
  std::uniform_int_distribution<Index> pick(0, data.n() - 1);
  for (Index attempt = 0;; ++attempt) {
    Matrix u = update_memberships(data, centers, alpha);
    bool degenerate = false;
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
      if (u.col(j).maxCoeff() <= 0.0) {
        centers.row(j) = data.point(pick(rng));
        ++reseeds;
        degenerate = true;
      }
    }
    if (!degenerate) return u;
    if (attempt > 10 * data.n()) {
      throw DegenerateError("could not reseed an empty cluster", 0);
    }
  }
}

}  // namespace

LloydResult lloyd_fuzzy(const Dataset& data, const Matrix& init_centers, double alpha,
                        const LloydOptions& options) {
  validate_alpha(alpha);
  if (init_centers.rows() < 1 || static_cast<Index>(init_centers.cols()) != data.d()) {
    throw ShapeError("initial centers must be k x d with k >= 1");
  }
  if (static_cast<Index>(init_centers.rows()) > data.n()) {
    throw ConfigError("k = " + std::to_string(init_centers.rows()) + " exceeds n = " +
                      std::to_string(data.n()));
  }

  LloydResult result;
  Rng reseed_rng = make_rng(0, {stream_id(Stream::kLloydReseed)});
  const double center_tol = options.center_tol * std::max(1.0, data.radius());
  Matrix centers = init_centers;
  Matrix u = memberships_with_reseed(data, centers, alpha, reseed_rng, result.reseeds);

  for (Index it = 0; it < options.max_iter; ++it) {
    const Matrix next = update_centers(data, u, alpha);
    const double objective = fuzzy_objective(data, next, u, alpha);
    const double shift = (next - centers).rowwise().norm().maxCoeff();
    const bool small_drop =
        options.tol > 0.0 && !result.objective_trace.empty() &&
        result.objective_trace.back() - objective <
            options.tol * std::max(result.objective_trace.back(), 1e-300);
    result.objective_trace.push_back(objective);
    result.iterations = it + 1;
    centers = next;
    u = memberships_with_reseed(data, centers, alpha, reseed_rng, result.reseeds);
    if (shift <= center_tol || small_drop) break;
  }

  result.clustering.centers = centers;
  result.clustering.memberships = u;
  result.clustering.consistent =
      is_consistent_center_based(data, result.clustering, alpha,
                                 kDefaultTol * std::max(1.0, data.radius()))
          .consistent;
  return result;
}

LloydResult lloyd_fuzzy(const Dataset& data, Index k, double alpha, std::uint64_t seed,
                        const LloydOptions& options) {
  if (k < 1 || k > data.n()) {
    throw ConfigError("k must lie in [1, n]");
  }
  Rng rng = make_rng(seed, {stream_id(Stream::kLloydInit)});
  std::vector<Index> idx(data.n());
  std::iota(idx.begin(), idx.end(), Index{0});
  // Partial Fisher-Yates: the first k entries are a uniform k-subset.
  for (Index t = 0; t < k; ++t) {
    std::uniform_int_distribution<Index> pick(t, data.n() - 1);
    std::swap(idx[t], idx[pick(rng)]);
  }
  Matrix init(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(data.d()));
  for (Index t = 0; t < k; ++t) init.row(static_cast<Eigen::Index>(t)) = data.point(idx[t]);
  return lloyd_fuzzy(data, init, alpha, options);
}

}  // namespace qfcm
