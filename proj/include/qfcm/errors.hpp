#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qfcm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched dimensions between points, centers and memberships.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration value (rejected before any work is done).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A cluster ended up with zero alpha-mass (whole population or sample).
class DegenerateError : public Error {
 public:
  DegenerateError(const std::string& what, std::size_t cluster)
      : Error(what), cluster_(cluster) {}
  std::size_t cluster() const noexcept { return cluster_; }

 private:
  std::size_t cluster_;
};

/// Query that the oracle model does not allow (e.g. p == q for a pair).
class InvalidQueryError : public Error {
 public:
  using Error::Error;
};

/// Per-type query totals.
struct QueryCounts {
  std::uint64_t membership = 0;
  std::uint64_t pair = 0;
  std::uint64_t triplet = 0;

  std::uint64_t total() const noexcept { return membership + pair + triplet; }
  bool operator==(const QueryCounts&) const = default;
};

/// A query would exceed the ledger budget; carries the counts at refusal.
class BudgetError : public Error {
 public:
  BudgetError(const std::string& what, QueryCounts snapshot) : Error(what), snapshot_(snapshot) {}
  const QueryCounts& snapshot() const noexcept { return snapshot_; }

 private:
  QueryCounts snapshot_;
};

/// Oracle lacks a capability the caller needs (repeated-index triplets).
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// Linear-algebra conditioning failure (singular anchor basis, rank deficit).
class ConditioningError : public Error {
 public:
  using Error::Error;
};

/// Tensor decomposition did not reproduce its input.
class DecompositionError : public Error {
 public:
  using Error::Error;
};

/// Neither the pure-anchor nor the tensor route could bootstrap an anchor set.
class ReductionUnavailableError : public Error {
 public:
  using Error::Error;
};

}  // namespace qfcm
