#include "qfcm/errors.hpp"
#include "qfcm/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qfcm {

namespace {

std::vector<Index> sample_distinct(Index n, Index count, Rng& rng) {
  std::vector<Index> idx(n);
  std::iota(idx.begin(), idx.end(), Index{0});
  for (Index t = 0; t < count; ++t) {
    std::uniform_int_distribution<Index> pick(t, n - 1);
    std::swap(idx[t], idx[pick(rng)]);
  }
  idx.resize(count);
  return idx;
}

}  // namespace

SimilarityMembershipOracle::SimilarityMembershipOracle(SimilarityOracle& oracle, Index k,
                                                       SimilarityAdapterOptions options)
    : oracle_(oracle), k_(k) {
  if (k < 1) throw ConfigError("k must be positive");
  const Index n = oracle.n();
  if (n < k) throw ConfigError("fewer elements than clusters");
  const QueryCounts start = oracle.ledger().counts();
  Rng rng = make_rng(options.seed, {stream_id(Stream::kAnchors)});

  const Index pool =
      std::min(n, options.candidate_pool > 0 ? options.candidate_pool : std::max<Index>(6 * k, 20));
  const std::vector<Index> candidates = sample_distinct(n, pool, rng);
  std::optional<AnchorSet> pure = find_pure_anchors(oracle, candidates, k);

  if (pure) {
    anchors_ = std::move(*pure);
    route_ = Route::kPure;
  } else {
    std::string reason = "no pure anchor set among " + std::to_string(pool) + " candidates";
    bool done = false;
    if (!options.allow_tensor) {
      reason += "; tensor route disabled";
    } else if (!oracle.supports_repeated_triplets()) {
      reason += "; oracle does not answer repeated-index triplets";
    } else {
      Rng jrng = make_rng(options.seed, {stream_id(Stream::kJennrich)});
      for (Index attempt = 0; attempt < options.tensor_attempts && !done; ++attempt) {
        const std::vector<Index> chosen = sample_distinct(n, k, rng);
        try {
          const MomentTensor tensor = build_moment_tensor(oracle, chosen);
          const JennrichResult jr = jennrich_decompose(tensor, k, jrng);
          // Rows of the recovered basis are the anchors' membership rows.
          const Matrix& basis = jr.factors;
          if ((basis.rowwise().sum().array() - 1.0).abs().maxCoeff() > 1e-6) {
            reason += "; recovered anchor rows are off the simplex";
            continue;
          }
          anchors_ = make_anchor_set(chosen, basis, false);
          route_ = Route::kTensor;
          done = true;
        } catch (const ConditioningError& e) {
          reason += std::string("; ") + e.what();
        } catch (const DecompositionError& e) {
          reason += std::string("; ") + e.what();
        }
      }
    }
    if (!done) throw ReductionUnavailableError("similarity reduction unavailable: " + reason);
  }

  const QueryCounts end = oracle.ledger().counts();
  bootstrap_ = {end.membership - start.membership, end.pair - start.pair,
                end.triplet - start.triplet};
}

double SimilarityMembershipOracle::membership(Index i, Index j) {
  if (i >= n() || j >= k_) throw InvalidQueryError("membership index out of range");
  ledger_.charge(QueryType::kMembership);
  auto it = rows_.find(i);
  if (it == rows_.end()) {
    bool adjusted = false;
    it = rows_.emplace(i, membership_from_pairwise(oracle_, anchors_, i, &adjusted)).first;
    adjusted_ += adjusted;
  }
  const double answer = it->second(static_cast<Eigen::Index>(j));
  ledger_.log({QueryType::kMembership, i, j, 0, answer});
  return answer;
}

}  // namespace qfcm
