#include "internal.hpp"

#include "qfcm/errors.hpp"

#include <cmath>
#include <map>

namespace qfcm {

namespace {

Index argmax_lowest(const std::vector<double>& v, const std::vector<bool>& eligible) {
  Index best = v.size();
  for (Index j = 0; j < v.size(); ++j) {
    if (!eligible[j]) continue;
    if (best == v.size() || v[j] > v[best]) best = j;
  }
  return best;
}

}  // namespace

SolverResult sequential_solve(const Dataset& data, MembershipOracle& oracle, Index k,
                              const SolverConfig& config) {
  config.validate();
  if (k < 1 || k != oracle.k()) throw ConfigError("k must match the oracle's cluster count");
  if (oracle.n() != data.n()) throw ShapeError("oracle and dataset sizes differ");

  SolverResult result;
  result.solver = "sequential";
  result.config = config;
  detail::StageTracker stages(oracle, result);
  const double alpha = config.alpha;
  const auto n = static_cast<Eigen::Index>(data.n());
  const auto kk = static_cast<Eigen::Index>(k);

  // Stage 1: uniform sample, largest cluster first.
  Rng rng = make_rng(config.seed, {stream_id(Stream::kInitialSample)});
  const std::vector<Index> sample = detail::uniform_sample(data.n(), config.m, rng);
  const Matrix rows = detail::query_rows(oracle, sample, k);
  stages.close("initial_sample");

  std::vector<double> sampled_mass(k, 0.0);
  for (Index s = 0; s < sample.size(); ++s) {
    for (Index j = 0; j < k; ++j) {
      sampled_mass[j] +=
          detail::mass(rows(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(j)), alpha);
    }
  }
  std::vector<bool> unprocessed(k, true);
  const Index t1 = argmax_lowest(sampled_mass, unprocessed);
  if (!(sampled_mass[t1] > 0.0)) throw DegenerateError("sampled membership mass is zero", t1);

  Matrix centers = Matrix::Zero(kk, static_cast<Eigen::Index>(data.d()));
  {
    std::vector<double> col(sample.size());
    for (Index s = 0; s < sample.size(); ++s) {
      col[s] = rows(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t1));
    }
    Vector c;
    double total = 0.0;
    detail::weighted_center(data, sample, col, std::vector<double>(sample.size(), 1.0), alpha, c,
                            total);
    centers.row(static_cast<Eigen::Index>(t1)) = c.transpose();
  }
  result.cluster_order.push_back(t1);
  unprocessed[t1] = false;

  Vector covered = Vector::Zero(n);  // Sum over processed clusters of U_hat
  Rng bin_rng = make_rng(config.seed, {stream_id(Stream::kBinSample)});
  const double eta1 = config.eta1;
  const bool integral = std::abs(1.0 / eta1 - std::round(1.0 / eta1)) <= 1e-12 / eta1;

  for (Index stage = 1; stage < k; ++stage) {
    const Index current = result.cluster_order.back();
    const Vector c = centers.row(static_cast<Eigen::Index>(current)).transpose();
    covered += estimate_memberships_grid(data, oracle, c, current, eta1).values;
    stages.close("grid_" + std::to_string(stage));

    // Bins share the grid-rounded covered mass.
    std::map<long long, std::vector<Index>> bins;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double level = integral ? covered(i) * std::round(1.0 / eta1) : covered(i) / eta1;
      bins[std::llround(level)].push_back(static_cast<Index>(i));
    }

    std::vector<Index> drawn;
    std::vector<double> weight;
    for (const auto& [level, members] : bins) {
      const Index draws = std::min<Index>(config.r, members.size());
      std::uniform_int_distribution<Index> pick(0, members.size() - 1);
      const double w = static_cast<double>(members.size()) / static_cast<double>(draws);
      for (Index t = 0; t < draws; ++t) {
        drawn.push_back(members[pick(bin_rng)]);
        weight.push_back(w);
      }
    }

    std::vector<std::vector<double>> answers(k);
    std::vector<double> est_mass(k, 0.0);
    for (Index j = 0; j < k; ++j) {
      if (!unprocessed[j]) continue;
      answers[j].resize(drawn.size());
    }
    for (Index t = 0; t < drawn.size(); ++t) {
      for (Index j = 0; j < k; ++j) {
        if (!unprocessed[j]) continue;
        answers[j][t] = oracle.membership(drawn[t], j);
        est_mass[j] += weight[t] * detail::mass(answers[j][t], alpha);
      }
    }
    stages.close("bins_" + std::to_string(stage));

    const Index next = argmax_lowest(est_mass, unprocessed);
    Vector center;
    double total = 0.0;
    if (!detail::weighted_center(data, drawn, answers[next], weight, alpha, center, total)) {
      throw DegenerateError("stage " + std::to_string(stage) +
                                ": every sampled membership to the remaining clusters is zero",
                            stage);
    }
    centers.row(static_cast<Eigen::Index>(next)) = center.transpose();
    result.cluster_order.push_back(next);
    unprocessed[next] = false;
  }

  Matrix u(n, kk);
  for (Index t = 0; t < k; ++t) {
    const Index j = result.cluster_order[t];
    const Vector c = centers.row(static_cast<Eigen::Index>(j)).transpose();
    u.col(static_cast<Eigen::Index>(j)) =
        estimate_memberships_grid(data, oracle, c, j, config.eta2).values;
    stages.close("final_grid_" + std::to_string(j));
  }
  detail::renormalize(u, config.clamp_output);

  result.estimate.centers = std::move(centers);
  result.estimate.memberships = std::move(u);
  detail::finish(result, oracle);
  return result;
}

}  // namespace qfcm
