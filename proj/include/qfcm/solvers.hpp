#pragma once

// Query solvers: uniform-sample center estimation, grid membership recovery,
// the two-phase, sequential and two-cluster solvers, and a median-of-means
// wrapper for noisy oracles.

#include "qfcm/oracle.hpp"
#include "qfcm/rng.hpp"
#include "qfcm/types.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qfcm {

/// Number of queries spent by one named stage, in execution order.
struct StageCount {
  std::string stage;
  std::uint64_t queries = 0;
};

/// Bins and special elements produced by membership2 (positions are 1-based
/// ranks along the distance ordering from the first center estimate).
struct TwoClusterBins {
  Permutation order;
  Index log_n = 0;
  /// Near set: ranks [1, near_end); estimated membership 0.
  Index near_end = 1;
  /// Individually queried elements (element ids) with their exact values.
  std::vector<std::pair<Index, double>> special;
  struct Bin {
    Index begin;  // first rank, inclusive
    Index end;    // one past the last rank
    double value; // estimate shared by the whole bin
  };
  std::vector<Bin> bins;
  Vector estimates;  // U_hat for the second cluster, indexed by element
  std::uint64_t queries = 0;
};

struct SolverResult {
  std::string solver;
  Clustering estimate;
  QueryCounts ledger_snapshot;
  std::vector<StageCount> per_stage_counts;
  std::vector<Index> cluster_order;
  SolverConfig config;
  std::optional<TwoClusterBins> two_cluster;

  std::uint64_t stage_total() const;
  std::uint64_t stage(const std::string& name) const;
};

struct GridEstimate {
  Vector values;                   // indexed by element
  double eta = 0.0;
  std::vector<Index> thresholds;   // l_s for s = 0..S
  Permutation order;               // distance ordering from the center estimate
  std::uint64_t queries = 0;
};

/// Number of grid levels above zero, ceil(1/eta), robust to 1/eta landing a
/// hair above an integer.
Index grid_levels(double eta);
/// Value of grid level s; exactly s/N when 1/eta is the integer N.
double grid_value(Index s, double eta);

/// Weighted mean of m uniformly drawn elements (with replacement) using
/// queried U_ij. Exactly m queries. Throws DegenerateError(j) on zero mass.
Vector estimate_center_uniform(const Dataset& data, MembershipOracle& oracle, Index j, Index m,
                               double alpha, Rng& rng);

/// Largest rank i in [0, n] with U_{pi(i), j} >= x along the 1-based ranks of
/// pi, assuming non-increasing values; 0 when no rank qualifies. At most
/// ceil(log2(n + 1)) queries; x <= 0 returns n without querying.
Index binary_search_threshold(MembershipOracle& oracle, const Permutation& pi, Index j, double x);

struct Search2Result {
  Index index;                  // minimum 1-based rank, or n + 1
  std::optional<double> value;  // 1 - U_{pi(index), t1} if it was queried
};

/// Minimum 1-based rank i with 1 - U_{pi(i), t1} >= x, or n + 1. Queries only
/// cluster t1; at most ceil(log2(n + 1)) queries.
Search2Result binary_search2(MembershipOracle& oracle, const Permutation& pi, Index t1, double x);

/// Grid membership estimate of cluster j around center_hat.
GridEstimate estimate_memberships_grid(const Dataset& data, MembershipOracle& oracle,
                                       const Eigen::Ref<const Vector>& center_hat, Index j,
                                       double eta);

SolverResult two_phase_solve(const Dataset& data, MembershipOracle& oracle, Index k,
                             const SolverConfig& config);

SolverResult sequential_solve(const Dataset& data, MembershipOracle& oracle, Index k,
                              const SolverConfig& config);

/// Adaptive-bin membership estimate of the second cluster given the first
/// center estimate. Cluster t2 is the other one of {0, 1}.
TwoClusterBins membership2(const Dataset& data, MembershipOracle& oracle,
                           const Eigen::Ref<const Vector>& center_hat_t1, Index t1);

SolverResult two_cluster_solve(const Dataset& data, MembershipOracle& oracle,
                               const SolverConfig& config);

/// Answers each membership query with the median of B batch means of T'
/// noisy answers, B = ceil(6 log2 n), T' = ceil(4 sigma^2 / kappa^2).
class DenoisedMembershipOracle final : public MembershipOracle {
 public:
  DenoisedMembershipOracle(MembershipOracle& noisy, double sigma, double kappa,
                           std::optional<Index> batches = std::nullopt,
                           std::optional<Index> batch_size = std::nullopt);

  double membership(Index i, Index j) override;
  Index n() const override { return noisy_.n(); }
  Index k() const override { return noisy_.k(); }
  /// Counts adapter calls; the wrapped oracle's ledger counts raw queries.
  const QueryLedger& ledger() const override { return ledger_; }

  Index batches() const noexcept { return batches_; }
  Index batch_size() const noexcept { return batch_size_; }
  std::uint64_t cost_per_call() const noexcept {
    return static_cast<std::uint64_t>(batches_) * batch_size_;
  }

 private:
  MembershipOracle& noisy_;
  Index batches_;
  Index batch_size_;
  QueryLedger ledger_;
  std::vector<double> means_;
};

/// c1 log2^2 n + c2 log2 n / eta + c3 (R / eps)^4 log2 n log(1 / (eta delta)).
double two_cluster_budget_shape(Index n, double radius, double eps, double eta, double delta,
                                double c1, double c2, double c3);
/// k m + k (ceil(1/eta) + 1)(ceil(log2 n) + 1): the two-phase query ceiling.
std::uint64_t two_phase_query_ceiling(Index n, Index k, Index m, double eta);

/// ceil(log2 n) with log2 1 = 0.
Index ceil_log2(Index n);

}  // namespace qfcm
