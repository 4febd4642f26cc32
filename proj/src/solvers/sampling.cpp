#include "internal.hpp"

#include "qfcm/errors.hpp"

#include <numeric>

namespace qfcm {

namespace detail {

void renormalize(Matrix& u, bool clamp) {
  const double k = static_cast<double>(u.cols());
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    const double deficit = 1.0 - u.row(i).sum();
    u.row(i).array() += deficit / k;
    if (clamp) {
      u.row(i) = u.row(i).cwiseMax(0.0).cwiseMin(1.0);
      const double s = u.row(i).sum();
      if (s > 0.0) {
        u.row(i) /= s;
      } else {
        u.row(i).setConstant(1.0 / k);
      }
    }
  }
}

std::vector<Index> uniform_sample(Index n, Index m, Rng& rng) {
  std::uniform_int_distribution<Index> pick(0, n - 1);
  std::vector<Index> out(m);
  for (auto& v : out) v = pick(rng);
  return out;
}

Matrix query_rows(MembershipOracle& oracle, const std::vector<Index>& sample, Index k) {
  Matrix u(static_cast<Eigen::Index>(sample.size()), static_cast<Eigen::Index>(k));
  for (Index s = 0; s < sample.size(); ++s) {
    for (Index j = 0; j < k; ++j) {
      u(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(j)) =
          oracle.membership(sample[s], j);
    }
  }
  return u;
}

bool weighted_center(const Dataset& data, const std::vector<Index>& elements,
                     const std::vector<double>& memberships, const std::vector<double>& weights,
                     double alpha, Vector& center, double& total_mass) {
  center = Vector::Zero(static_cast<Eigen::Index>(data.d()));
  total_mass = 0.0;
  for (Index t = 0; t < elements.size(); ++t) {
    const double w = weights[t] * mass(memberships[t], alpha);
    if (w == 0.0) continue;
    total_mass += w;
    center += w * data.point(elements[t]).transpose();
  }
  if (!(total_mass > 0.0)) return false;
  center /= total_mass;
  return true;
}

void finish(SolverResult& result, const MembershipOracle& oracle) {
  result.ledger_snapshot = oracle.ledger().counts();
}

}  // namespace detail

std::uint64_t SolverResult::stage_total() const {
  std::uint64_t total = 0;
  for (const auto& s : per_stage_counts) total += s.queries;
  return total;
}

std::uint64_t SolverResult::stage(const std::string& name) const {
  for (const auto& s : per_stage_counts) {
    if (s.stage == name) return s.queries;
  }
  return 0;
}

Vector estimate_center_uniform(const Dataset& data, MembershipOracle& oracle, Index j, Index m,
                               double alpha, Rng& rng) {
  if (m < 1) throw ConfigError("m must be positive");
  const std::vector<Index> sample = detail::uniform_sample(data.n(), m, rng);
  std::vector<double> u(m);
  for (Index s = 0; s < m; ++s) u[s] = oracle.membership(sample[s], j);
  Vector center;
  double total = 0.0;
  if (!detail::weighted_center(data, sample, u, std::vector<double>(m, 1.0), alpha, center,
                               total)) {
    throw DegenerateError("sampled membership mass of cluster " + std::to_string(j) + " is zero",
                          j);
  }
  return center;
}

double two_cluster_budget_shape(Index n, double radius, double eps, double eta, double delta,
                                double c1, double c2, double c3) {
  const double l = std::log2(static_cast<double>(std::max<Index>(n, 2)));
  return c1 * l * l + c2 * l / eta +
         c3 * std::pow(radius / eps, 4.0) * l * std::log(1.0 / (eta * delta));
}

std::uint64_t two_phase_query_ceiling(Index n, Index k, Index m, double eta) {
  return static_cast<std::uint64_t>(k) * m +
         static_cast<std::uint64_t>(k) * (grid_levels(eta) + 1) * (ceil_log2(n) + 1);
}

}  // namespace qfcm
