#pragma once

// Fuzzy k-means mathematics: objective, alternating updates, the Xie-Beni
// index, the structural quantities beta and gamma, and consistency checks.

#include "qfcm/types.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

namespace qfcm {

inline constexpr double kDefaultTol = 1e-9;

/// Sum_i Sum_j U_ij^alpha |x_i - mu_j|^2.
double fuzzy_objective(const Dataset& data, const Clustering& clustering, double alpha);
double fuzzy_objective(const Dataset& data, const Matrix& centers, const Matrix& memberships,
                       double alpha);

/// Optimal memberships for fixed centers. A point closer than 1e-12 to one or
/// more centers splits its mass equally among them.
Matrix update_memberships(const Dataset& data, const Matrix& centers, double alpha);

/// Alpha-weighted means. Throws DegenerateError naming the first cluster
/// whose column of U^alpha sums to zero.
Matrix update_centers(const Dataset& data, const Matrix& memberships, double alpha);

struct LloydOptions {
  Index max_iter = 1000;
  /// Stop once no center moves farther than center_tol * max(1, R).
  double center_tol = 1e-12;
  /// Or once the relative objective decrease falls below tol (0 disables).
  /// The objective is flat near a fixed point, so this stops early.
  double tol = 0.0;
};

struct LloydResult {
  Clustering clustering;
  std::vector<double> objective_trace;
  Index iterations = 0;
  Index reseeds = 0;
};

/// Alternating minimisation from explicit initial centers (k x d).
LloydResult lloyd_fuzzy(const Dataset& data, const Matrix& init_centers, double alpha,
                        const LloydOptions& options = {});
/// Alternating minimisation from k distinct data points drawn with `seed`.
LloydResult lloyd_fuzzy(const Dataset& data, Index k, double alpha, std::uint64_t seed,
                        const LloydOptions& options = {});

/// J_fm / (n k min_{i != j} |mu_i - mu_j|^2). Throws DegenerateError when two
/// centers coincide and ConfigError when k < 2.
double xie_beni(const Dataset& data, const Clustering& clustering, double alpha);

/// Upper bound on |XB(P) - XB(P_hat)| for any P_hat whose centers are within
/// eps1 and whose memberships are within eps2 (entrywise, staying in [0, 1])
/// of P. Returns +infinity when the perturbed separation bound is not positive.
double xie_beni_perturbation_bound(const Dataset& data, const Clustering& clustering,
                                   double alpha, double eps1, double eps2);

/// (k / n) min_j Sum_i U_ij.
double beta_of(const Matrix& memberships);

/// Ascending distance from v; ties broken by ascending index.
Permutation sort_by_distance(const Dataset& data, const Eigen::Ref<const Vector>& v);

/// Largest radius around every center inside which all distance orderings are
/// unchanged. +infinity when n == 1, 0 when any ordering has an exact tie.
double gamma_of(const Dataset& data, const Matrix& centers);

struct MonotonicityViolation {
  Index closer;   // element ranked earlier along the center's ordering
  Index farther;  // element ranked later but with larger membership
  Index cluster;
};

struct ConsistencyReport {
  bool consistent = true;
  double max_center_deviation = 0.0;
  std::vector<MonotonicityViolation> violations;
};

/// Checks that the centers are the weighted means of the memberships (within
/// tol) and that each membership column is non-increasing along the distance
/// ordering from its center (allowing increases up to tol).
ConsistencyReport is_consistent_center_based(const Dataset& data, const Clustering& clustering,
                                             double alpha, double tol = kDefaultTol);

}  // namespace qfcm
