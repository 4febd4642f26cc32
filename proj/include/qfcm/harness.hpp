#pragma once

// Experiment plumbing: synthetic data, CSV ingestion, target construction,
// evaluation with center matching, and parameter sweeps.

#include "qfcm/core.hpp"
#include "qfcm/oracle.hpp"
#include "qfcm/solvers.hpp"
#include "qfcm/types.hpp"

#include <json.hpp>

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace qfcm {

using Labels = std::vector<Index>;

struct SyntheticSpec {
  Index k = 4;
  Index d = 10;
  std::vector<Index> sizes;
  /// Minimum per-coordinate gap between centers.
  double center_separation = 1000.0;
  double point_std = 20.0;
  std::uint64_t seed = 1;
  /// Only separate the first center from the others (otherwise all pairs).
  bool first_center_only = false;

  void validate() const;
  /// k = 4, d = 10, std 20, separation 1000, sizes (base, base*zeta x 3).
  static SyntheticSpec imbalanced(double zeta, Index base = 5000, std::uint64_t seed = 1);
};

struct LabeledDataset {
  Dataset data;
  Labels labels;
  Matrix generating_centers;
};

LabeledDataset generate_synthetic(const SyntheticSpec& spec);

struct CsvData {
  Dataset data;
  std::optional<Labels> labels;
  std::vector<std::string> feature_names;
  /// Distinct label strings in order of first appearance (label id = index).
  std::vector<std::string> label_names;
};

/// Headered CSV with numeric feature columns; `label_column`, when given, is
/// mapped to consecutive ids in order of first appearance.
CsvData load_csv(const std::string& path, const std::optional<std::string>& label_column);
void write_csv(const std::string& path, const Dataset& data, const Labels* labels);

enum class TargetMode { kLloyd, kHardLabels };

struct TargetOptions {
  TargetMode mode = TargetMode::kLloyd;
  Index k = 0;
  double alpha = 2.0;
  std::uint64_t seed = 1;
  /// Lloyd start; random distinct data points when absent.
  std::optional<Matrix> init_centers;
  LloydOptions lloyd;
};

/// Lloyd mode: converged alternating minimisation. Hard mode: one-hot labels
/// with centers from update_centers. `consistent` records the check result.
Clustering build_target(const Dataset& data, const TargetOptions& options,
                        const Labels* labels = nullptr);

/// Minimum-cost perfect assignment on a square cost matrix: row j is matched
/// to column result[j].
std::vector<Index> hungarian(const Matrix& cost);

struct EvalReport {
  double center_error = 0.0;      // max_j |mu_j - mu_hat_sigma(j)|
  double membership_error = 0.0;  // max_ij |U_ij - U_hat_i,sigma(j)|
  /// Fraction with argmax_j U_hat_ij equal to the label, no relabelling.
  std::optional<double> argmax_accuracy;
  /// Same, after mapping estimate columns through the center matching.
  std::optional<double> matched_accuracy;
  std::vector<Index> matching;    // sigma
  QueryCounts queries;
};

EvalReport evaluate(const Clustering& target, const Clustering& estimate, const Labels* labels,
                    const QueryCounts& queries = {});

/// Fraction of rows whose argmax (lowest index on ties) equals the label.
double argmax_accuracy(const Matrix& memberships, const Labels& labels);

/// Runs the configured grid and returns one JSON record per (grid point,
/// solver, trial), in deterministic order regardless of thread count.
std::vector<nlohmann::json> run_sweep(const nlohmann::json& config,
                                      const std::function<void(const std::string&)>& log = {});

/// Groups records by everything except trial/seed/metrics and writes
/// count, failures and mean/median/quartiles of each metric as CSV.
void aggregate_records(const std::vector<nlohmann::json>& records, std::ostream& csv);

/// Dataset file I/O helpers shared by the CLI.
nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);
std::vector<nlohmann::json> read_jsonl_file(const std::string& path);

}  // namespace qfcm
