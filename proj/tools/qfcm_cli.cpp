#include "qfcm/core.hpp"
#include "qfcm/errors.hpp"
#include "qfcm/harness.hpp"
#include "qfcm/oracle.hpp"
#include "qfcm/reduction.hpp"
#include "qfcm/serialize.hpp"
#include "qfcm/solvers.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using nlohmann::json;
using namespace qfcm;

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

void emit(const json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << '\n';
  } else {
    write_json_file(path, j);
  }
}

// Dataset files carry an optional `label` column; it is never a feature.
CsvData load_dataset(const std::string& path, const std::string& label_column) {
  if (!label_column.empty()) return load_csv(path, label_column);
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::string header;
  std::getline(in, header);
  std::stringstream cells(header);
  for (std::string cell; std::getline(cells, cell, ',');) {
    if (!cell.empty() && cell.back() == '\r') cell.pop_back();
    if (cell == "label") return load_csv(path, std::string("label"));
  }
  return load_csv(path, std::nullopt);
}

// Result files may omit memberships for large n; centers alone still evaluate.
Clustering clustering_from_file(const json& j) {
  if (j.contains("memberships") && j.at("memberships").is_null()) {
    json copy = j;
    copy["memberships"] = matrix_to_json(Matrix(0, static_cast<Eigen::Index>(
                                                       j.at("centers").size())));
    Clustering c = clustering_from_json(copy);
    c.memberships.resize(0, 0);
    return c;
  }
  return clustering_from_json(j);
}

struct GenerateArgs {
  std::string out;
  Index k = 4, d = 10, base = 5000;
  double zeta = 1.0, std_dev = 20.0, separation = 1000.0;
  std::vector<Index> sizes;
  std::uint64_t seed = 1;
  bool first_center_only = false;
};

int run_generate(const GenerateArgs& a) {
  SyntheticSpec spec = SyntheticSpec::imbalanced(a.zeta, a.base, a.seed);
  spec.d = a.d;
  spec.point_std = a.std_dev;
  spec.center_separation = a.separation;
  spec.first_center_only = a.first_center_only;
  if (!a.sizes.empty()) {
    spec.sizes = a.sizes;
    spec.k = a.sizes.size();
  } else if (a.k != 4) {
    spec.k = a.k;
    spec.sizes.assign(a.k, a.base);
  }
  const LabeledDataset gen = generate_synthetic(spec);
  write_csv(a.out, gen.data, &gen.labels);
  std::cerr << "wrote n=" << gen.data.n() << " d=" << gen.data.d() << " to " << a.out << '\n';
  return 0;
}

struct TargetArgs {
  std::string data, label_column, mode = "lloyd", out;
  Index k = 0;
  double alpha = 2.0;
  std::uint64_t seed = 1;
};

int run_target(const TargetArgs& a) {
  const CsvData csv = load_dataset(a.data, a.label_column);
  TargetOptions opts;
  if (a.mode == "lloyd") {
    opts.mode = TargetMode::kLloyd;
  } else if (a.mode == "hard-labels") {
    opts.mode = TargetMode::kHardLabels;
  } else {
    throw ConfigError("unknown target mode '" + a.mode + "'");
  }
  opts.k = a.k;
  if (opts.k == 0 && csv.labels) opts.k = csv.label_names.size();
  opts.alpha = a.alpha;
  opts.seed = a.seed;
  const Clustering target =
      build_target(csv.data, opts, csv.labels ? &*csv.labels : nullptr);
  if (!target.consistent) {
    std::cerr << "note: target is not consistent center-based; solver guarantees do not apply\n";
  }
  json out = to_json(target);
  out["alpha"] = a.alpha;
  emit(out, a.out);
  return 0;
}

struct SolveArgs {
  std::string data, label_column, target, solver = "two_phase", config, out, query_log;
  std::optional<Index> m, r;
  std::optional<double> eta, eta1, eta2, alpha, delta, noise_sigma, kappa;
  std::optional<std::uint64_t> seed;
  bool via_similarity = false;
  bool repeated_triplets = false;
};

int run_solve(const SolveArgs& a) {
  const CsvData csv = load_dataset(a.data, a.label_column);
  const json target_json = read_json_file(a.target);
  const Clustering target = clustering_from_json(target_json);
  if (target.n() != csv.data.n()) throw ShapeError("target and dataset have different n");

  SolverConfig cfg = a.config.empty() ? SolverConfig{}
                                      : solver_config_from_json(read_json_file(a.config));
  if (!a.alpha && target_json.contains("alpha")) cfg.alpha = target_json.at("alpha");
  if (a.m) cfg.m = *a.m;
  if (a.r) cfg.r = *a.r;
  if (a.eta) cfg.eta = cfg.eta1 = cfg.eta2 = *a.eta;
  if (a.eta1) cfg.eta1 = *a.eta1;
  if (a.eta2) cfg.eta2 = *a.eta2;
  if (a.alpha) cfg.alpha = *a.alpha;
  if (a.delta) cfg.delta = *a.delta;
  if (a.seed) cfg.seed = *a.seed;
  cfg.validate();

  OracleOptions oo;
  oo.alpha = cfg.alpha;
  oo.noise_sigma = a.noise_sigma.value_or(0.0);
  oo.seed = derive_seed(cfg.seed, {stream_id(Stream::kOracleNoise)});
  oo.logging = !a.query_log.empty();
  oo.allow_repeated_triplets = a.repeated_triplets;
  TargetOracle oracle(target, oo);

  std::optional<SimilarityMembershipOracle> adapter;
  std::optional<DenoisedMembershipOracle> denoised;
  MembershipOracle* mo = &oracle;
  if (a.via_similarity) {
    SimilarityAdapterOptions so;
    so.seed = cfg.seed;
    adapter.emplace(oracle, target.k(), so);
    mo = &*adapter;
  }
  if (oo.noise_sigma > 0.0) {
    if (!a.kappa) throw ConfigError("--noise-sigma needs --kappa for the denoiser");
    denoised.emplace(*mo, oo.noise_sigma, *a.kappa);
    mo = &*denoised;
  }

  SolverResult res;
  if (a.solver == "two_phase") {
    res = two_phase_solve(csv.data, *mo, target.k(), cfg);
  } else if (a.solver == "sequential") {
    res = sequential_solve(csv.data, *mo, target.k(), cfg);
  } else if (a.solver == "two_cluster") {
    res = two_cluster_solve(csv.data, *mo, cfg);
  } else {
    throw ConfigError("unknown solver '" + a.solver + "'");
  }
  json out = to_json(res);
  out["oracle_queries"] = to_json(oracle.ledger().counts());
  if (adapter) out["adapter_bootstrap"] = to_json(adapter->bootstrap_cost());
  emit(out, a.out);
  if (!a.query_log.empty()) {
    std::ofstream log(a.query_log);
    if (!log) throw ConfigError("cannot write '" + a.query_log + "'");
    oracle.ledger().write_jsonl(log);
  }
  return 0;
}

struct SweepArgs {
  std::string config, out;
  std::optional<Index> threads;
};

int run_sweep_cmd(const SweepArgs& a) {
  json config = read_json_file(a.config);
  if (a.threads) config["threads"] = *a.threads;
  const auto records = run_sweep(config, [](const std::string& s) { std::cerr << s << '\n'; });
  std::ofstream file;
  if (!a.out.empty() && a.out != "-") {
    file.open(a.out);
    if (!file) throw ConfigError("cannot write '" + a.out + "'");
  }
  std::ostream& out = file.is_open() ? file : std::cout;
  for (const auto& r : records) out << r.dump() << '\n';
  return 0;
}

int run_aggregate(const std::string& in, const std::string& out_path) {
  const auto records = read_jsonl_file(in);
  if (out_path.empty() || out_path == "-") {
    aggregate_records(records, std::cout);
    return 0;
  }
  std::ofstream out(out_path);
  if (!out) throw ConfigError("cannot write '" + out_path + "'");
  aggregate_records(records, out);
  return 0;
}

struct EvaluateArgs {
  std::string target, estimate, data, label_column, out;
};

int run_evaluate(const EvaluateArgs& a) {
  const Clustering target = clustering_from_json(read_json_file(a.target));
  const json est_json = read_json_file(a.estimate);
  const Clustering estimate = clustering_from_file(est_json);
  std::optional<Labels> labels;
  if (!a.data.empty()) {
    labels = load_dataset(a.data, a.label_column).labels;
    if (!labels) throw ConfigError("--data has no label column");
  }
  QueryCounts q;
  if (est_json.contains("queries")) {
    const json& jq = est_json.at("queries");
    q.membership = jq.value("membership", std::uint64_t{0});
    q.pair = jq.value("pair", std::uint64_t{0});
    q.triplet = jq.value("triplet", std::uint64_t{0});
  }
  const EvalReport r = evaluate(target, estimate, labels ? &*labels : nullptr, q);
  json out = {{"center_error", r.center_error},
              {"membership_error", estimate.memberships.size() ? json(r.membership_error)
                                                               : json(nullptr)},
              {"matching", r.matching},
              {"queries", to_json(r.queries)}};
  if (r.argmax_accuracy) out["argmax_accuracy"] = *r.argmax_accuracy;
  if (r.matched_accuracy) out["matched_accuracy"] = *r.matched_accuracy;
  emit(out, a.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Query-based fuzzy k-means solvers and experiment harness"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write a synthetic Gaussian dataset as CSV");
  g->add_option("-o,--out", gen.out, "Output CSV path")->required();
  g->add_option("--k", gen.k, "Number of clusters (equal sizes of --base)");
  g->add_option("--d", gen.d, "Dimension");
  g->add_option("--base", gen.base, "Size of the first cluster");
  g->add_option("--zeta", gen.zeta, "Other clusters have size base*zeta (k = 4)");
  g->add_option("--sizes", gen.sizes, "Explicit cluster sizes (overrides k/base/zeta)");
  g->add_option("--std", gen.std_dev, "Per-coordinate standard deviation");
  g->add_option("--separation", gen.separation, "Minimum per-coordinate center gap");
  g->add_option("--seed", gen.seed, "Random seed");
  g->add_flag("--first-center-only", gen.first_center_only,
              "Only separate the first center from the rest");

  TargetArgs tgt;
  auto* t = app.add_subcommand("target", "Build a target clustering from a dataset");
  t->add_option("--data", tgt.data, "Dataset CSV")->required();
  t->add_option("--label-column", tgt.label_column, "Label column name (default: label)");
  t->add_option("--mode", tgt.mode, "lloyd or hard-labels")
      ->check(CLI::IsMember({"lloyd", "hard-labels"}));
  t->add_option("--k", tgt.k, "Number of clusters (default: label count)");
  t->add_option("--alpha", tgt.alpha, "Fuzzifier");
  t->add_option("--seed", tgt.seed, "Lloyd initialisation seed");
  t->add_option("-o,--out", tgt.out, "Output JSON path (default stdout)");

  SolveArgs sol;
  auto* s = app.add_subcommand("solve", "Run a solver against a simulated oracle");
  s->add_option("--data", sol.data, "Dataset CSV")->required();
  s->add_option("--label-column", sol.label_column, "Label column to exclude (default: label)");
  s->add_option("--target", sol.target, "Target clustering JSON")->required();
  s->add_option("--solver", sol.solver, "two_phase, sequential or two_cluster")
      ->check(CLI::IsMember({"two_phase", "sequential", "two_cluster"}));
  s->add_option("--config", sol.config, "Solver configuration JSON");
  s->add_option("--m", sol.m, "Uniform samples per center");
  s->add_option("--r", sol.r, "Samples per bin");
  s->add_option("--eta", sol.eta, "Grid step (sets eta1 and eta2 too)");
  s->add_option("--eta1", sol.eta1, "Bin grid step");
  s->add_option("--eta2", sol.eta2, "Final grid step");
  s->add_option("--alpha", sol.alpha, "Fuzzifier (default: from the target file)");
  s->add_option("--delta", sol.delta, "Failure probability");
  s->add_option("--seed", sol.seed, "Solver seed");
  s->add_option("--noise-sigma", sol.noise_sigma, "Gaussian oracle noise");
  s->add_option("--kappa", sol.kappa, "Denoiser accuracy");
  s->add_flag("--via-similarity", sol.via_similarity,
              "Answer membership queries from pairwise/triplet similarities");
  s->add_flag("--repeated-triplets", sol.repeated_triplets,
              "Let the oracle answer triplets with repeated indices");
  s->add_option("--query-log", sol.query_log, "Write every oracle query as JSONL");
  s->add_option("-o,--out", sol.out, "Output JSON path (default stdout)");

  SweepArgs sw;
  auto* w = app.add_subcommand("sweep", "Run an experiment grid and write JSONL records");
  w->add_option("--config", sw.config, "Sweep configuration JSON")->required();
  w->add_option("--threads", sw.threads, "Worker threads (overrides the file)");
  w->add_option("-o,--out", sw.out, "Output JSONL path (default stdout)");

  std::string agg_in, agg_out;
  auto* ag = app.add_subcommand("aggregate", "Summarise sweep records as CSV");
  ag->add_option("--input", agg_in, "JSONL records")->required();
  ag->add_option("-o,--out", agg_out, "Output CSV path (default stdout)");

  EvaluateArgs ev;
  auto* e = app.add_subcommand("evaluate", "Compare an estimate with a target");
  e->add_option("--target", ev.target, "Target clustering JSON")->required();
  e->add_option("--estimate", ev.estimate, "Estimate clustering or solve result JSON")
      ->required();
  e->add_option("--data", ev.data, "Labelled dataset CSV for argmax accuracy");
  e->add_option("--label-column", ev.label_column, "Label column name (default: label)");
  e->add_option("-o,--out", ev.out, "Output JSON path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*g) return run_generate(gen);
    if (*t) return run_target(tgt);
    if (*s) return run_solve(sol);
    if (*w) return run_sweep_cmd(sw);
    if (*ag) return run_aggregate(agg_in, agg_out);
    if (*e) return run_evaluate(ev);
  } catch (const ConfigError& err) {
    std::cerr << "config error: " << err.what() << '\n';
    return kExitConfig;
  } catch (const ParseError& err) {
    std::cerr << "parse error: " << err.what() << '\n';
    return kExitConfig;
  } catch (const nlohmann::json::exception& err) {
    std::cerr << "config error: " << err.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
