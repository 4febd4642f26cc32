#include "internal.hpp"

#include "qfcm/core.hpp"
#include "qfcm/errors.hpp"

#include <algorithm>

namespace qfcm {

TwoClusterBins membership2(const Dataset& data, MembershipOracle& oracle,
                           const Eigen::Ref<const Vector>& center_hat_t1, Index t1) {
  if (oracle.k() != 2) throw ConfigError("membership2 needs exactly two clusters");
  const Index n = data.n();
  if (n < 2) throw ConfigError("membership2 needs at least two elements");

  TwoClusterBins out;
  const std::uint64_t before = oracle.ledger().counts().membership;
  out.order = sort_by_distance(data, center_hat_t1);
  const Permutation& pi = out.order;
  const Index log_n = ceil_log2(n);
  out.log_n = log_n;
  out.estimates = Vector::Zero(static_cast<Eigen::Index>(n));
  auto second = [&](Index rank) { return 1.0 - oracle.membership(pi[rank - 1], t1); };
  auto set_estimate = [&](Index rank, double v) {
    out.estimates(static_cast<Eigen::Index>(pi[rank - 1])) = v;
  };

  // The farthest element anchors the first level and is known exactly.
  double eta = second(n);
  out.special.emplace_back(pi[n - 1], eta);
  set_estimate(n, eta);
  Index prev = n;

  for (Index q = 2; q <= 3 * log_n; ++q) {
    if (prev == 1) break;
    eta /= 2.0;
    const Search2Result found = binary_search2(oracle, pi, t1, eta);
    const Index candidate = std::min(found.index, prev);
    if (prev - candidate >= log_n) {
      const double value = found.value && found.index == candidate ? *found.value
                                                                  : second(candidate);
      out.bins.push_back({candidate, prev, value});
      for (Index p = candidate; p < prev; ++p) set_estimate(p, value);
      prev = candidate;
    } else {
      // Too few elements between the levels: query a block of log n + 1
      // elements individually and restart the halving from its nearest one.
      const Index start = prev > log_n + 1 ? prev - 1 - log_n : 1;
      for (Index p = start; p < prev; ++p) {
        const double v = second(p);
        out.special.emplace_back(pi[p - 1], v);
        set_estimate(p, v);
        if (p == start) eta = v;
      }
      prev = start;
    }
  }
  out.near_end = prev;
  out.queries = oracle.ledger().counts().membership - before;
  return out;
}

SolverResult two_cluster_solve(const Dataset& data, MembershipOracle& oracle,
                               const SolverConfig& config) {
  config.validate();
  if (oracle.k() != 2) throw ConfigError("the two-cluster solver needs k = 2");
  if (data.n() < 2) throw ConfigError("the two-cluster solver needs n >= 2");
  if (oracle.n() != data.n()) throw ShapeError("oracle and dataset sizes differ");

  SolverResult result;
  result.solver = "two_cluster";
  result.config = config;
  detail::StageTracker stages(oracle, result);
  const double alpha = config.alpha;

  Rng rng = make_rng(config.seed, {stream_id(Stream::kInitialSample)});
  const std::vector<Index> sample = detail::uniform_sample(data.n(), config.m, rng);
  const Matrix rows = detail::query_rows(oracle, sample, 2);
  stages.close("initial_sample");

  double mass0 = 0.0;
  double mass1 = 0.0;
  for (Eigen::Index s = 0; s < rows.rows(); ++s) {
    mass0 += detail::mass(rows(s, 0), alpha);
    mass1 += detail::mass(rows(s, 1), alpha);
  }
  const Index t1 = mass1 > mass0 ? 1 : 0;
  const Index t2 = 1 - t1;
  Vector center1;
  {
    std::vector<double> col(sample.size());
    for (Index s = 0; s < sample.size(); ++s) {
      col[s] = rows(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t1));
    }
    double total = 0.0;
    if (!detail::weighted_center(data, sample, col, std::vector<double>(sample.size(), 1.0),
                                 alpha, center1, total)) {
      throw DegenerateError("sampled membership mass is zero", t1);
    }
  }

  TwoClusterBins bins = membership2(data, oracle, center1, t1);
  stages.close("membership2");

  // Second center: r draws per bin and from the near set, exact special part.
  Rng bin_rng = make_rng(config.seed, {stream_id(Stream::kTwoClusterBins)});
  Rng near_rng = make_rng(config.seed, {stream_id(Stream::kTwoClusterNear)});
  std::vector<Index> elements;
  std::vector<double> values;
  std::vector<double> weights;
  const double r = static_cast<double>(config.r);
  for (const auto& bin : bins.bins) {
    std::uniform_int_distribution<Index> pick(bin.begin, bin.end - 1);
    const double w = static_cast<double>(bin.end - bin.begin) / r;
    for (Index t = 0; t < config.r; ++t) {
      const Index e = bins.order[pick(bin_rng) - 1];
      elements.push_back(e);
      values.push_back(oracle.membership(e, t2));
      weights.push_back(w);
    }
  }
  for (const auto& [e, v] : bins.special) {
    elements.push_back(e);
    values.push_back(v);
    weights.push_back(1.0);
  }
  if (bins.near_end > 1) {
    std::uniform_int_distribution<Index> pick(1, bins.near_end - 1);
    const double w = static_cast<double>(bins.near_end - 1) / r;
    for (Index t = 0; t < config.r; ++t) {
      const Index e = bins.order[pick(near_rng) - 1];
      elements.push_back(e);
      values.push_back(oracle.membership(e, t2));
      weights.push_back(w);
    }
  }
  Vector center2;
  double total = 0.0;
  if (!detail::weighted_center(data, elements, values, weights, alpha, center2, total)) {
    throw DegenerateError("second cluster has no membership mass in the sample", t2);
  }
  stages.close("second_center");

  const GridEstimate grid = estimate_memberships_grid(data, oracle, center2, t2, config.eta);
  stages.close("final_grid");

  const auto n = static_cast<Eigen::Index>(data.n());
  Matrix u(n, 2);
  u.col(static_cast<Eigen::Index>(t2)) = grid.values;
  u.col(static_cast<Eigen::Index>(t1)) = Vector::Ones(n) - grid.values;
  detail::renormalize(u, config.clamp_output);

  Matrix centers(2, static_cast<Eigen::Index>(data.d()));
  centers.row(static_cast<Eigen::Index>(t1)) = center1.transpose();
  centers.row(static_cast<Eigen::Index>(t2)) = center2.transpose();
  result.estimate.centers = std::move(centers);
  result.estimate.memberships = std::move(u);
  result.cluster_order = {t1, t2};
  result.two_cluster = std::move(bins);
  detail::finish(result, oracle);
  return result;
}

}  // namespace qfcm
