#pragma once

// Hidden target clustering answering membership and similarity queries, with
// exact per-type query accounting.

#include "qfcm/errors.hpp"
#include "qfcm/rng.hpp"
#include "qfcm/types.hpp"

#include <functional>
#include <optional>
#include <ostream>
#include <vector>

namespace qfcm {

enum class QueryType { kMembership, kPair, kTriplet };

struct QueryBudget {
  std::optional<std::uint64_t> membership;
  std::optional<std::uint64_t> pair;
  std::optional<std::uint64_t> triplet;
};

/// One logged query. Membership records use (a = i, b = j); pair records use
/// (a, b); triplet records use (a, b, c).
struct QueryRecord {
  QueryType type;
  Index a = 0;
  Index b = 0;
  Index c = 0;
  double answer = 0.0;
};

class QueryLedger {
 public:
  explicit QueryLedger(QueryBudget budget = {}, bool logging = false)
      : budget_(budget), logging_(logging) {}

  /// Reserves one query of type t; throws BudgetError (counts unchanged) when
  /// the budget for t is exhausted.
  void charge(QueryType t);
  void log(const QueryRecord& record);

  const QueryCounts& counts() const noexcept { return counts_; }
  const QueryBudget& budget() const noexcept { return budget_; }
  bool logging() const noexcept { return logging_; }
  const std::vector<QueryRecord>& records() const noexcept { return records_; }

  /// One JSON object per line: {"t":"mem","i":..,"j":..,"ans":..} and the
  /// "pair" / "tri" analogues.
  void write_jsonl(std::ostream& out) const;

 private:
  QueryBudget budget_;
  bool logging_;
  QueryCounts counts_;
  std::vector<QueryRecord> records_;
};

/// Anything that answers U_ij for 0-based element i and cluster j.
class MembershipOracle {
 public:
  virtual ~MembershipOracle() = default;
  virtual double membership(Index i, Index j) = 0;
  virtual Index n() const = 0;
  virtual Index k() const = 0;
  virtual const QueryLedger& ledger() const = 0;
};

/// Pairwise <U_p, U_q> and triplet Sum_t U_pt U_qt U_rt similarity queries.
class SimilarityOracle {
 public:
  virtual ~SimilarityOracle() = default;
  virtual double pair(Index p, Index q) = 0;
  /// Repeated indices are rejected unless allow_repeats is set and the oracle
  /// supports it.
  virtual double triplet(Index p, Index q, Index r, bool allow_repeats = false) = 0;
  virtual bool supports_repeated_triplets() const = 0;
  virtual Index n() const = 0;
  virtual const QueryLedger& ledger() const = 0;
};

/// Draws one additive noise sample.
using NoiseHook = std::function<double(Rng&)>;

struct OracleOptions {
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  QueryBudget budget;
  bool logging = false;
  bool allow_repeated_triplets = false;
  /// Require the target to pass is_consistent_center_based (needs the data).
  bool strict = false;
  double alpha = 2.0;
  /// Consistency tolerance; negative selects 1e-9 * max(1, R).
  double consistency_tol = -1.0;
  /// Replaces the default Normal(0, sigma^2) draw when set.
  NoiseHook noise;
};

class TargetOracle final : public MembershipOracle, public SimilarityOracle {
 public:
  /// `data` is only needed for the strict consistency check and may be null
  /// otherwise. Throws ConfigError when strict and the target is inconsistent.
  explicit TargetOracle(Clustering target, OracleOptions options = {},
                        const Dataset* data = nullptr);

  double membership(Index i, Index j) override;
  double pair(Index p, Index q) override;
  double triplet(Index p, Index q, Index r, bool allow_repeats = false) override;
  bool supports_repeated_triplets() const override { return options_.allow_repeated_triplets; }

  Index n() const override { return target_.n(); }
  Index k() const override { return target_.k(); }
  const QueryLedger& ledger() const override { return ledger_; }

  const Clustering& target() const noexcept { return target_; }
  double noise_sigma() const noexcept { return options_.noise_sigma; }
  /// Result of the consistency check, when data was supplied.
  std::optional<bool> target_consistent() const noexcept { return consistent_; }

 private:
  void check_index(Index i) const;

  Clustering target_;
  OracleOptions options_;
  QueryLedger ledger_;
  Rng rng_;
  std::normal_distribution<double> normal_;
  std::optional<bool> consistent_;
};

}  // namespace qfcm
