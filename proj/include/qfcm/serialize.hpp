#pragma once

// JSON encodings of clusterings, solver configurations and results.

#include "qfcm/solvers.hpp"
#include "qfcm/types.hpp"

#include <json.hpp>

namespace qfcm {

inline constexpr int kSchemaVersion = 1;

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

nlohmann::json to_json(const QueryCounts& c);
nlohmann::json to_json(const SolverConfig& c);
/// Missing keys keep their defaults; unknown keys raise ConfigError.
SolverConfig solver_config_from_json(const nlohmann::json& j);

/// {"schema_version", "centers", "memberships", "consistent"}.
nlohmann::json to_json(const Clustering& c);
Clustering clustering_from_json(const nlohmann::json& j);

/// Memberships are omitted when n * k exceeds membership_limit.
nlohmann::json to_json(const SolverResult& r, std::size_t membership_limit = 1'000'000);

}  // namespace qfcm
