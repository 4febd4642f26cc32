#include "qfcm/errors.hpp"
#include "qfcm/serialize.hpp"

#include <set>

namespace qfcm {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("expected a matrix as an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows > 0 ? static_cast<Eigen::Index>(j.front().size()) : 0;
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ParseError("matrix row " + std::to_string(i) + " has the wrong length");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      if (!row[static_cast<std::size_t>(c)].is_number()) {
        throw ParseError("matrix entry (" + std::to_string(i) + ", " + std::to_string(c) +
                         ") is not a number");
      }
      m(i, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
  }
  return m;
}

json to_json(const QueryCounts& c) {
  return {{"membership", c.membership}, {"pair", c.pair}, {"triplet", c.triplet}};
}

json to_json(const SolverConfig& c) {
  return {{"alpha", c.alpha}, {"m", c.m},       {"r", c.r},         {"eta", c.eta},
          {"eta1", c.eta1},   {"eta2", c.eta2}, {"delta", c.delta}, {"seed", c.seed},
          {"clamp_output", c.clamp_output}};
}

SolverConfig solver_config_from_json(const json& j) {
  static const std::set<std::string> known = {"alpha", "m",     "r",    "eta",         "eta1",
                                              "eta2",  "delta", "seed", "clamp_output"};
  if (!j.is_object()) throw ConfigError("solver configuration must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ConfigError("unknown solver configuration key '" + key + "'");
  }
  SolverConfig c;
  try {
    c.alpha = j.value("alpha", c.alpha);
    c.m = j.value("m", c.m);
    c.r = j.value("r", c.r);
    c.eta = j.value("eta", c.eta);
    c.eta1 = j.value("eta1", c.eta1);
    c.eta2 = j.value("eta2", c.eta2);
    c.delta = j.value("delta", c.delta);
    c.seed = j.value("seed", c.seed);
    c.clamp_output = j.value("clamp_output", c.clamp_output);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad solver configuration value: ") + e.what());
  }
  return c;
}

json to_json(const Clustering& c) {
  return {{"schema_version", kSchemaVersion},
          {"centers", matrix_to_json(c.centers)},
          {"memberships", matrix_to_json(c.memberships)},
          {"consistent", c.consistent}};
}

Clustering clustering_from_json(const json& j) {
  if (!j.is_object() || !j.contains("centers") || !j.contains("memberships")) {
    throw ParseError("clustering JSON needs 'centers' and 'memberships'");
  }
  if (j.value("schema_version", -1) != kSchemaVersion) {
    throw ParseError("unsupported schema_version");
  }
  Clustering c;
  c.centers = matrix_from_json(j.at("centers"));
  c.memberships = matrix_from_json(j.at("memberships"));
  c.consistent = j.value("consistent", false);
  if (c.centers.rows() != c.memberships.cols()) {
    throw ParseError("center count does not match membership columns");
  }
  return c;
}

json to_json(const SolverResult& r, std::size_t membership_limit) {
  json stages = json::array();
  for (const auto& s : r.per_stage_counts) {
    stages.push_back({{"stage", s.stage}, {"queries", s.queries}});
  }
  json out = {{"schema_version", kSchemaVersion},
              {"solver", r.solver},
              {"config", to_json(r.config)},
              {"seed", r.config.seed},
              {"centers", matrix_to_json(r.estimate.centers)},
              {"queries", to_json(r.ledger_snapshot)},
              {"per_stage_counts", stages},
              {"cluster_order", r.cluster_order}};
  const auto size = static_cast<std::size_t>(r.estimate.memberships.size());
  if (size <= membership_limit) {
    out["memberships"] = matrix_to_json(r.estimate.memberships);
  } else {
    out["memberships"] = nullptr;
  }
  if (r.two_cluster) {
    out["two_cluster"] = {{"bins", r.two_cluster->bins.size()},
                          {"special", r.two_cluster->special.size()},
                          {"near", r.two_cluster->near_end - 1},
                          {"log_n", r.two_cluster->log_n}};
  }
  return out;
}

}  // namespace qfcm
