#include "internal.hpp"

#include "qfcm/errors.hpp"

#include <numeric>

namespace qfcm {

SolverResult two_phase_solve(const Dataset& data, MembershipOracle& oracle, Index k,
                             const SolverConfig& config) {
  config.validate();
  if (k < 1 || k != oracle.k()) throw ConfigError("k must match the oracle's cluster count");
  if (oracle.n() != data.n()) throw ShapeError("oracle and dataset sizes differ");

  SolverResult result;
  result.solver = "two_phase";
  result.config = config;
  detail::StageTracker stages(oracle, result);

  Rng rng = make_rng(config.seed, {stream_id(Stream::kInitialSample)});
  const std::vector<Index> sample = detail::uniform_sample(data.n(), config.m, rng);
  const Matrix rows = detail::query_rows(oracle, sample, k);
  stages.close("initial_sample");

  const auto kk = static_cast<Eigen::Index>(k);
  Matrix centers(kk, static_cast<Eigen::Index>(data.d()));
  const std::vector<double> ones(sample.size(), 1.0);
  for (Index j = 0; j < k; ++j) {
    std::vector<double> col(sample.size());
    for (Index s = 0; s < sample.size(); ++s) {
      col[s] = rows(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(j));
    }
    Vector c;
    double total = 0.0;
    if (!detail::weighted_center(data, sample, col, ones, config.alpha, c, total)) {
      throw DegenerateError(
          "sampled membership mass of cluster " + std::to_string(j) + " is zero", j);
    }
    centers.row(static_cast<Eigen::Index>(j)) = c.transpose();
  }

  Matrix u(static_cast<Eigen::Index>(data.n()), kk);
  for (Index j = 0; j < k; ++j) {
    const Vector c = centers.row(static_cast<Eigen::Index>(j)).transpose();
    u.col(static_cast<Eigen::Index>(j)) =
        estimate_memberships_grid(data, oracle, c, j, config.eta).values;
    stages.close("grid_" + std::to_string(j));
  }
  detail::renormalize(u, config.clamp_output);

  result.estimate.centers = std::move(centers);
  result.estimate.memberships = std::move(u);
  result.cluster_order.resize(k);
  std::iota(result.cluster_order.begin(), result.cluster_order.end(), Index{0});
  detail::finish(result, oracle);
  return result;
}

}  // namespace qfcm
