#pragma once

// Membership queries simulated from similarity queries: pure anchors read off
// from pairwise data, or an anchor basis recovered from the third-order
// moment tensor by Jennrich's algorithm.

#include "qfcm/oracle.hpp"
#include "qfcm/rng.hpp"
#include "qfcm/types.hpp"

#include <optional>
#include <unordered_map>
#include <vector>

namespace qfcm {

/// Anchor elements and their membership rows in anchor labelling: column t of
/// `basis` is the cluster that anchor set construction called t.
struct AnchorSet {
  std::vector<Index> indices;
  Matrix basis;  // |indices| x k
  bool is_pure = false;
  double condition = 1.0;
};

/// Fully symmetric a x a x a array.
class MomentTensor {
 public:
  MomentTensor() = default;
  explicit MomentTensor(Index a) : a_(a), entries_(a * a * a, 0.0) {}

  Index dim() const noexcept { return a_; }
  double operator()(Index p, Index q, Index s) const { return entries_[(p * a_ + q) * a_ + s]; }
  /// Writes all permutations of (p, q, s).
  void set_symmetric(Index p, Index q, Index s, double v);
  /// Sum_s w_s A[:, :, s].
  Matrix slice(const Vector& w) const;
  double frobenius_norm() const;
  const std::vector<double>& entries() const noexcept { return entries_; }

  /// Sum_r z_r (x) z_r (x) z_r for the columns z_r of factors.
  static MomentTensor from_factors(const Matrix& factors);

 private:
  Index a_ = 0;
  std::vector<double> entries_;
};

/// Queries every pair among the candidates and searches for k mutually
/// zero-similar elements; k such rows must be pure for distinct clusters. A
/// further candidate, if any, must have similarities to them summing to 1.
std::optional<AnchorSet> find_pure_anchors(SimilarityOracle& oracle,
                                           const std::vector<Index>& candidates, Index k);

/// Builds an anchor set from known rows (used by the tensor route and tests).
/// Throws ConditioningError when the basis condition number exceeds 1e12.
AnchorSet make_anchor_set(std::vector<Index> indices, Matrix basis, bool is_pure);

/// Membership row of element i in anchor labelling from k pairwise queries
/// (none when i is an anchor). Rows outside [0, 1] or off the simplex by more
/// than 1e-6 are clamped and rescaled; `adjusted` reports whether that
/// happened.
Vector membership_from_pairwise(SimilarityOracle& oracle, const AnchorSet& anchors, Index i,
                                bool* adjusted = nullptr);

/// a(a+1)(a+2)/6 triplet queries with repeated indices allowed.
MomentTensor build_moment_tensor(SimilarityOracle& oracle, const std::vector<Index>& anchors);

struct JennrichResult {
  Matrix factors;  // a x R, column r is z_r
  double residual = 0.0;
  Index attempts = 0;
};

/// Rank-R symmetric CP factors of `tensor`, each column entrywise nonnegative.
/// Retries with fresh random slice weights on rank deficiency, complex or
/// nearly equal eigenvalues (at most 5 retries), then throws
/// ConditioningError; a residual above 1e-6 |A| throws DecompositionError.
JennrichResult jennrich_decompose(const MomentTensor& tensor, Index rank, Rng& rng);

struct SimilarityAdapterOptions {
  /// Candidate pool for the pure-anchor search; 0 selects min(n, max(6k, 20)).
  Index candidate_pool = 0;
  /// Anchor resamples for the tensor route.
  Index tensor_attempts = 10;
  bool allow_tensor = true;
  std::uint64_t seed = 0;
};

/// Membership oracle backed by similarity queries. Cluster labels follow the
/// anchor order, so they match the target's labels up to a permutation.
class SimilarityMembershipOracle final : public MembershipOracle {
 public:
  enum class Route { kPure, kTensor };

  SimilarityMembershipOracle(SimilarityOracle& oracle, Index k,
                             SimilarityAdapterOptions options = {});

  double membership(Index i, Index j) override;
  Index n() const override { return oracle_.n(); }
  Index k() const override { return k_; }
  const QueryLedger& ledger() const override { return ledger_; }

  Route route() const noexcept { return route_; }
  const AnchorSet& anchors() const noexcept { return anchors_; }
  /// Similarity queries spent before the first membership query.
  const QueryCounts& bootstrap_cost() const noexcept { return bootstrap_; }
  Index rows_adjusted() const noexcept { return adjusted_; }

 private:
  SimilarityOracle& oracle_;
  Index k_;
  QueryLedger ledger_;
  AnchorSet anchors_;
  Route route_ = Route::kPure;
  QueryCounts bootstrap_;
  std::unordered_map<Index, Vector> rows_;
  Index adjusted_ = 0;
};

}  // namespace qfcm
