#pragma once

#include "qfcm/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qfcm::detail {

/// U^alpha for a queried value; noisy answers below zero carry no weight.
inline double mass(double u, double alpha) { return u > 0.0 ? std::pow(u, alpha) : 0.0; }

/// Records membership-query deltas per named stage.
class StageTracker {
 public:
  StageTracker(const MembershipOracle& oracle, SolverResult& result)
      : oracle_(oracle), result_(result), last_(oracle.ledger().counts().membership) {}

  void close(const std::string& name) {
    const std::uint64_t now = oracle_.ledger().counts().membership;
    result_.per_stage_counts.push_back({name, now - last_});
    last_ = now;
  }

 private:
  const MembershipOracle& oracle_;
  SolverResult& result_;
  std::uint64_t last_;
};

/// U_ij += (1 - Sum_j U_ij) / k, then optionally clamp to [0, 1] and rescale.
void renormalize(Matrix& u, bool clamp);

/// m uniform draws with replacement from [0, n).
std::vector<Index> uniform_sample(Index n, Index m, Rng& rng);

/// Queries all k memberships of every sampled element (sample-major order).
Matrix query_rows(MembershipOracle& oracle, const std::vector<Index>& sample, Index k);

/// Weighted mean Sum w_i U_i^alpha x_i / Sum w_i U_i^alpha; returns false on
/// zero mass.
bool weighted_center(const Dataset& data, const std::vector<Index>& elements,
                     const std::vector<double>& memberships, const std::vector<double>& weights,
                     double alpha, Vector& center, double& total_mass);

void finish(SolverResult& result, const MembershipOracle& oracle);

}  // namespace qfcm::detail
