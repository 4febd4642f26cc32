#include "qfcm/core.hpp"
#include "qfcm/oracle.hpp"

#include <algorithm>
#include <string>

namespace qfcm {

TargetOracle::TargetOracle(Clustering target, OracleOptions options, const Dataset* data)
    : target_(std::move(target)),
      options_(std::move(options)),
      ledger_(options_.budget, options_.logging),
      rng_(make_rng(options_.seed, {stream_id(Stream::kOracleNoise)})),
      normal_(0.0, 1.0) {
  if (target_.memberships.cols() != target_.centers.rows() && target_.centers.size() > 0) {
    throw ShapeError("target center count does not match membership columns");
  }
  if (target_.memberships.rows() < 1 || target_.memberships.cols() < 1) {
    throw ShapeError("target memberships are empty");
  }
  if (options_.noise_sigma < 0.0) throw ConfigError("noise sigma must be nonnegative");

  if (data != nullptr) {
    if (data->n() != target_.n()) throw ShapeError("target and dataset sizes differ");
    const double tol = options_.consistency_tol >= 0.0
                           ? options_.consistency_tol
                           : kDefaultTol * std::max(1.0, data->radius());
    const ConsistencyReport report =
        is_consistent_center_based(*data, target_, options_.alpha, tol);
    consistent_ = report.consistent;
    if (options_.strict && !report.consistent) {
      std::string detail = "center deviation " + std::to_string(report.max_center_deviation);
      if (!report.violations.empty()) {
        const auto& v = report.violations.front();
        detail += ", first monotonicity violation: elements " + std::to_string(v.closer) +
                  " and " + std::to_string(v.farther) + " in cluster " +
                  std::to_string(v.cluster);
      }
      throw ConfigError("strict oracle requires a consistent center-based target (" + detail +
                        ")");
    }
  } else if (options_.strict) {
    throw ConfigError("strict oracle construction needs the dataset");
  }
}

void TargetOracle::check_index(Index i) const {
  if (i >= n()) {
    throw InvalidQueryError("element index " + std::to_string(i) + " out of range [0, " +
                            std::to_string(n()) + ")");
  }
}

double TargetOracle::membership(Index i, Index j) {
  check_index(i);
  if (j >= k()) {
    throw InvalidQueryError("cluster index " + std::to_string(j) + " out of range");
  }
  ledger_.charge(QueryType::kMembership);
  double answer = target_.memberships(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  if (options_.noise) {
    answer += options_.noise(rng_);
  } else if (options_.noise_sigma > 0.0) {
    answer += options_.noise_sigma * normal_(rng_);
  }
  ledger_.log({QueryType::kMembership, i, j, 0, answer});
  return answer;
}

double TargetOracle::pair(Index p, Index q) {
  check_index(p);
  check_index(q);
  if (p == q) throw InvalidQueryError("pairwise similarity needs two distinct elements");
  ledger_.charge(QueryType::kPair);
  const auto& u = target_.memberships;
  const double answer =
      u.row(static_cast<Eigen::Index>(p)).dot(u.row(static_cast<Eigen::Index>(q)));
  ledger_.log({QueryType::kPair, p, q, 0, answer});
  return answer;
}

double TargetOracle::triplet(Index p, Index q, Index r, bool allow_repeats) {
  check_index(p);
  check_index(q);
  check_index(r);
  const bool repeated = p == q || q == r || p == r;
  if (repeated) {
    if (!allow_repeats) {
      throw InvalidQueryError("triplet similarity needs three distinct elements");
    }
    if (!options_.allow_repeated_triplets) {
      throw CapabilityError("this oracle does not answer repeated-index triplet queries");
    }
  }
  ledger_.charge(QueryType::kTriplet);
  const auto& u = target_.memberships;
  const double answer = (u.row(static_cast<Eigen::Index>(p)).array() *
                         u.row(static_cast<Eigen::Index>(q)).array() *
                         u.row(static_cast<Eigen::Index>(r)).array())
                            .sum();
  ledger_.log({QueryType::kTriplet, p, q, r, answer});
  return answer;
}

}  // namespace qfcm
