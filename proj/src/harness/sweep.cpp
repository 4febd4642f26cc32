#include "qfcm/errors.hpp"
#include "qfcm/harness.hpp"
#include "qfcm/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <set>
#include <thread>

namespace qfcm {

using nlohmann::json;

namespace {

std::vector<json> grid_values(const json& grid, const char* key, json fallback) {
  if (!grid.contains(key)) return {std::move(fallback)};
  const json& v = grid.at(key);
  if (!v.is_array() || v.empty()) {
    throw ConfigError(std::string("grid key '") + key + "' must be a non-empty array");
  }
  return {v.begin(), v.end()};
}

struct Instance {
  Dataset data;
  std::optional<Labels> labels;
  Clustering target;
};

struct Point {
  json nu, zeta, alpha, eta;
  std::size_t instance;
  std::size_t index;
};

struct Run {
  std::size_t point;
  std::size_t solver;
  Index trial;
};

Index scaled(const json& spec, const char* fixed, const char* per, double base, Index fallback) {
  if (spec.contains(fixed)) return spec.at(fixed).get<Index>();
  if (spec.contains(per)) {
    return std::max<Index>(1, static_cast<Index>(std::llround(spec.at(per).get<double>() * base)));
  }
  return fallback;
}

Instance make_instance(const json& config, double zeta, double alpha, std::uint64_t seed) {
  const json& ds = config.at("dataset");
  const json tg = config.value("target", json::object());
  const std::string type = ds.value("type", "synthetic");
  Instance inst;
  std::optional<Matrix> init;

  if (type == "synthetic") {
    SyntheticSpec spec =
        SyntheticSpec::imbalanced(zeta, ds.value("base_size", Index{5000}), seed);
    spec.d = ds.value("d", spec.d);
    spec.point_std = ds.value("std", spec.point_std);
    spec.center_separation = ds.value("separation", spec.center_separation);
    spec.first_center_only = ds.value("first_center_only", false);
    if (ds.contains("sizes")) spec.sizes = ds.at("sizes").get<std::vector<Index>>();
    spec.k = spec.sizes.size();
    LabeledDataset gen = generate_synthetic(spec);
    inst.data = std::move(gen.data);
    inst.labels = std::move(gen.labels);
    if (tg.value("init", std::string("generating")) == "generating") {
      init = std::move(gen.generating_centers);
    }
  } else if (type == "csv") {
    CsvData csv = load_csv(ds.at("path").get<std::string>(),
                           ds.contains("label_column")
                               ? std::optional<std::string>(ds.at("label_column"))
                               : std::nullopt);
    inst.data = std::move(csv.data);
    inst.labels = std::move(csv.labels);
  } else {
    throw ConfigError("unknown dataset type '" + type + "'");
  }

  TargetOptions opts;
  const std::string mode = tg.value("mode", std::string("lloyd"));
  if (mode == "lloyd") {
    opts.mode = TargetMode::kLloyd;
  } else if (mode == "hard-labels") {
    opts.mode = TargetMode::kHardLabels;
  } else {
    throw ConfigError("unknown target mode '" + mode + "'");
  }
  opts.alpha = alpha;
  opts.seed = derive_seed(seed, {stream_id(Stream::kLloydInit)});
  opts.init_centers = std::move(init);
  opts.k = tg.value("k", Index{0});
  if (opts.k == 0 && inst.labels) {
    opts.k = *std::max_element(inst.labels->begin(), inst.labels->end()) + 1;
  }
  if (opts.mode == TargetMode::kHardLabels && !inst.labels) {
    throw ConfigError("hard-labels target mode needs a labelled dataset");
  }
  inst.target = build_target(inst.data, opts, inst.labels ? &*inst.labels : nullptr);
  return inst;
}

json run_one(const json& config, const Instance& inst, const Point& pt, const json& solver,
             Index trial, std::uint64_t seed) {
  const std::string name = solver.at("name").get<std::string>();
  const double nu = pt.nu.get<double>();
  const double eta = pt.eta.get<double>();
  SolverConfig cfg;
  cfg.alpha = pt.alpha.get<double>();
  cfg.m = scaled(solver, "m", "m_per_nu", nu, static_cast<Index>(nu));
  cfg.r = scaled(solver, "r", "r_per_nu", nu, scaled(solver, "r", "r_per_m",
                                                     static_cast<double>(cfg.m), cfg.r));
  cfg.eta = eta;
  cfg.eta1 = solver.value("eta1", eta);
  cfg.eta2 = solver.value("eta2", eta);
  cfg.delta = solver.value("delta", cfg.delta);
  cfg.seed = seed;

  json rec = {{"point", pt.index},
              {"nu", pt.nu},
              {"zeta", pt.zeta},
              {"alpha", pt.alpha},
              {"eta", pt.eta},
              {"solver", name},
              {"m", cfg.m},
              {"r", cfg.r},
              {"trial", trial},
              {"seed", seed}};
  try {
    const Index k = inst.target.k();
    OracleOptions oo;
    oo.noise_sigma = config.value("noise_sigma", 0.0);
    oo.seed = derive_seed(seed, {stream_id(Stream::kOracleNoise)});
    oo.alpha = cfg.alpha;
    TargetOracle oracle(inst.target, oo);
    std::optional<DenoisedMembershipOracle> denoised;
    MembershipOracle* mo = &oracle;
    if (oo.noise_sigma > 0.0 && config.contains("kappa")) {
      denoised.emplace(oracle, oo.noise_sigma, config.at("kappa").get<double>());
      mo = &*denoised;
    }

    Clustering estimate;
    json stages = json::object();
    if (name == "lloyd_random") {
      estimate = lloyd_fuzzy(inst.data, k, cfg.alpha, seed).clustering;
    } else {
      SolverResult res;
      if (name == "two_phase") {
        res = two_phase_solve(inst.data, *mo, k, cfg);
      } else if (name == "sequential") {
        res = sequential_solve(inst.data, *mo, k, cfg);
      } else if (name == "two_cluster") {
        res = two_cluster_solve(inst.data, *mo, cfg);
      } else {
        throw ConfigError("unknown solver '" + name + "'");
      }
      estimate = std::move(res.estimate);
      for (const auto& s : res.per_stage_counts) stages[s.stage] = s.queries;
    }
    const EvalReport ev =
        evaluate(inst.target, estimate, inst.labels ? &*inst.labels : nullptr,
                 oracle.ledger().counts());
    rec["status"] = "ok";
    rec["center_error"] = ev.center_error;
    rec["membership_error"] = ev.membership_error;
    rec["argmax_accuracy"] = ev.argmax_accuracy ? json(*ev.argmax_accuracy) : json(nullptr);
    rec["matched_accuracy"] = ev.matched_accuracy ? json(*ev.matched_accuracy) : json(nullptr);
    rec["queries"] = ev.queries.membership;
    rec["per_stage"] = stages;
  } catch (const Error& e) {
    rec["status"] = "error";
    rec["error"] = e.what();
  }
  return rec;
}

}  // namespace

std::vector<json> run_sweep(const json& config,
                            const std::function<void(const std::string&)>& log) {
  if (!config.is_object()) throw ConfigError("sweep configuration must be a JSON object");
  if (!config.contains("seed")) throw ConfigError("sweep configuration needs a master 'seed'");
  if (!config.contains("dataset")) throw ConfigError("sweep configuration needs 'dataset'");
  if (!config.contains("solvers") || !config.at("solvers").is_array() ||
      config.at("solvers").empty()) {
    throw ConfigError("sweep configuration needs a non-empty 'solvers' array");
  }
  const std::uint64_t master = config.at("seed").get<std::uint64_t>();
  const Index trials = config.value("trials", Index{1});
  const json grid = config.value("grid", json::object());
  const json solvers = config.at("solvers");
  std::mutex log_mutex;
  auto say = [&](const std::string& s) {
    if (!log) return;
    std::lock_guard<std::mutex> lock(log_mutex);
    log(s);
  };

  const auto nus = grid_values(grid, "nu", 1000);
  const auto zetas = grid_values(grid, "zeta", 1);
  const auto alphas = grid_values(grid, "alpha", 2.0);
  const auto etas = grid_values(grid, "eta", 0.1);

  // One dataset and target per (zeta, alpha); trials vary only the solver seed.
  std::vector<Instance> instances;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> instance_of;
  for (std::size_t z = 0; z < zetas.size(); ++z) {
    for (std::size_t a = 0; a < alphas.size(); ++a) {
      const std::uint64_t seed = derive_seed(master, {1, z});
      instances.push_back(
          make_instance(config, zetas[z].get<double>(), alphas[a].get<double>(), seed));
      instance_of[{z, a}] = instances.size() - 1;
      const Instance& inst = instances.back();
      const double beta = beta_of(inst.target.memberships);
      say("instance zeta=" + zetas[z].dump() + " alpha=" + alphas[a].dump() +
          ": n=" + std::to_string(inst.data.n()) + " beta=" + std::to_string(beta) +
          (inst.target.consistent ? "" : " (target not consistent center-based)"));
    }
  }

  std::vector<Point> points;
  for (std::size_t z = 0; z < zetas.size(); ++z) {
    for (std::size_t a = 0; a < alphas.size(); ++a) {
      for (const auto& nu : nus) {
        for (const auto& eta : etas) {
          points.push_back({nu, zetas[z], alphas[a], eta, instance_of[{z, a}], points.size()});
        }
      }
    }
  }
  for (const auto& pt : points) {
    const Instance& inst = instances[pt.instance];
    const double k = static_cast<double>(inst.target.k());
    const double beta = beta_of(inst.target.memberships);
    const double limit = (1.0 / k) * (1.0 - beta / k);
    for (const auto& s : solvers) {
      const double eta1 = s.value("eta1", pt.eta.get<double>());
      if (s.value("name", std::string()) == "sequential" && eta1 > limit) {
        say("warning: eta1=" + std::to_string(eta1) + " exceeds (1/k)(1-beta/k)=" +
            std::to_string(limit) + " for zeta=" + pt.zeta.dump());
      }
    }
  }

  std::vector<Run> runs;
  for (std::size_t p = 0; p < points.size(); ++p) {
    for (std::size_t s = 0; s < solvers.size(); ++s) {
      for (Index t = 0; t < trials; ++t) runs.push_back({p, s, t});
    }
  }

  std::vector<json> records(runs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t idx = next++; idx < runs.size(); idx = next++) {
      const Run& run = runs[idx];
      const Point& pt = points[run.point];
      const std::uint64_t seed = derive_seed(master, {2, run.point, run.trial});
      records[idx] =
          run_one(config, instances[pt.instance], pt, solvers[run.solver], run.trial, seed);
      if (records[idx]["status"] == "error") {
        say("run failed: " + records[idx]["error"].get<std::string>());
      }
    }
  };
  const Index threads = std::max<Index>(
      1, config.value("threads", static_cast<Index>(std::thread::hardware_concurrency())));
  std::vector<std::thread> pool;
  for (Index t = 1; t < std::min<Index>(threads, runs.size()); ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return records;
}

void aggregate_records(const std::vector<json>& records, std::ostream& csv) {
  static const std::vector<std::string> keys = {"point", "nu", "zeta", "alpha",
                                                "eta",   "solver", "m", "r"};
  static const std::vector<std::string> metrics = {"center_error", "membership_error",
                                                   "argmax_accuracy", "matched_accuracy",
                                                   "queries"};
  std::vector<std::string> order;
  std::map<std::string, std::vector<const json*>> groups;
  for (const auto& rec : records) {
    json key = json::object();
    for (const auto& k : keys) key[k] = rec.value(k, json(nullptr));
    const std::string id = key.dump();
    if (!groups.count(id)) order.push_back(id);
    groups[id].push_back(&rec);
  }

  auto quantile = [](std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = static_cast<std::size_t>(std::ceil(pos));
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  auto cell = [](const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return std::string();
    return v.dump();
  };

  for (const auto& k : keys) csv << k << ',';
  csv << "runs,failures";
  for (const auto& m : metrics) {
    csv << ',' << m << "_mean," << m << "_median," << m << "_q25," << m << "_q75";
  }
  csv << '\n';
  for (const auto& id : order) {
    const auto& group = groups[id];
    const json key = json::parse(id);
    for (const auto& k : keys) csv << cell(key[k]) << ',';
    Index failures = 0;
    for (const json* r : group) failures += r->value("status", std::string()) != "ok";
    csv << group.size() << ',' << failures;
    for (const auto& m : metrics) {
      std::vector<double> v;
      for (const json* r : group) {
        if (r->value("status", std::string()) == "ok" && r->contains(m) && (*r)[m].is_number()) {
          v.push_back((*r)[m].get<double>());
        }
      }
      if (v.empty()) {
        csv << ",,,,";
        continue;
      }
      double mean = 0.0;
      for (double x : v) mean += x;
      mean /= static_cast<double>(v.size());
      csv << ',' << mean << ',' << quantile(v, 0.5) << ',' << quantile(v, 0.25) << ','
          << quantile(v, 0.75);
    }
    csv << '\n';
  }
}

}  // namespace qfcm
