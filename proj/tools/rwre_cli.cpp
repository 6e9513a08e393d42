// SPDX-License-Identifier: Apache-2.0
//
// rwre: command-line front end.
//
// Exit codes: 0 success, 1 validation error, 2 property or acceptance failure.
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rwre/cascade.hpp"
#include "rwre/config.hpp"
#include "rwre/environment.hpp"
#include "rwre/error.hpp"
#include "rwre/exponents.hpp"
#include "rwre/harness.hpp"
#include "rwre/propcheck.hpp"
#include "rwre/quenched.hpp"
#include "rwre/rng.hpp"
#include "rwre/walk.hpp"

namespace {

using nlohmann::json;

constexpr int kExitValidation = 1;
constexpr int kExitPropertyFailure = 2;

struct GlobalOptions {
  std::string config_path;
  std::uint64_t seed = 1;
  std::string out;
  std::string report;
  unsigned workers = 1;
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw rwre::Error(rwre::ErrorCode::kConfig, "cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

json load(const GlobalOptions& g) {
  return g.config_path.empty() ? json::object() : rwre::load_config(g.config_path);
}

template <class T>
T setting(const json& config, const char* section, const char* key, T fallback) {
  if (config.contains(section) && config.at(section).contains(key)) {
    try {
      return config.at(section).at(key).get<T>();
    } catch (const json::exception& e) {
      throw rwre::Error(rwre::ErrorCode::kConfig,
                        std::string("[") + section + "] " + key + ": " + e.what());
    }
  }
  return fallback;
}

void write_json(const GlobalOptions& g, const json& body) {
  Output out(g.out);
  out.stream() << body.dump(2) << "\n";
}

// Side-car report for commands whose main output is CSV.
void write_report(const GlobalOptions& g, const json& body) {
  std::string path = g.report;
  if (path.empty() && !g.out.empty()) path = g.out + ".json";
  if (path.empty()) return;
  std::ofstream f(path);
  if (!f) throw rwre::Error(rwre::ErrorCode::kConfig, "cannot write '" + path + "'");
  f << body.dump(2) << "\n";
}

json run_header(const GlobalOptions& g, const std::string& command, const json& config) {
  return json{{"command", command}, {"seed", g.seed}, {"config", config}, {"workers", g.workers}};
}

int cmd_classify(const GlobalOptions& g) {
  const json config = load(g);
  const rwre::EnvSpec spec = rwre::env_from_config(config);
  json body = rwre::classify_regime(spec);
  write_json(g, body);
  return 0;
}

struct SimulateOptions {
  std::optional<std::uint64_t> steps;
  std::optional<std::uint64_t> replicas;
};

int cmd_simulate(const GlobalOptions& g, const SimulateOptions& o) {
  json config = load(g);
  const rwre::EnvSpec spec = rwre::env_from_config(config);
  const auto steps = o.steps.value_or(setting<std::uint64_t>(config, "experiment", "steps", 1000000));
  const auto replicas = o.replicas.value_or(setting<std::uint64_t>(config, "experiment", "replicas", 1));
  config["experiment"]["steps"] = steps;
  config["experiment"]["replicas"] = replicas;

  Output out(g.out);
  out.stream() << "replica,step,max_depth,returns\n";
  json per_replica = json::array();
  for (std::uint64_t r = 0; r < replicas; ++r) {
    const auto [env_seed, walk_seed] = rwre::replica_seeds(g.seed, r);
    const rwre::WalkStats stats = rwre::simulate_walk(spec, env_seed, walk_seed, steps);
    for (const auto& cp : stats.max_depth_checkpoints) {
      out.stream() << r << "," << cp.step << "," << cp.max_depth << "," << cp.returns << "\n";
    }
    per_replica.push_back({{"replica", r},
                           {"env_seed", env_seed},
                           {"walk_seed", walk_seed},
                           {"final_depth", stats.final_depth},
                           {"returns_to_root", stats.returns_to_root}});
  }
  json report = run_header(g, "simulate", config);
  report["replicas"] = per_replica;
  write_report(g, report);
  return 0;
}

struct QuenchedOptions {
  int depth = 8;
  std::vector<double> lambdas{0.0, 0.1};
  std::optional<std::uint64_t> env_seed;
};

int cmd_quenched(const GlobalOptions& g, const QuenchedOptions& o) {
  const json config = load(g);
  const rwre::EnvSpec spec = rwre::env_from_config(config);
  const std::uint64_t env_seed = o.env_seed.value_or(g.seed);
  const rwre::QuenchedTree tree = rwre::materialize_tree(spec, env_seed, o.depth);
  const double mean_tau = rwre::expected_tau(tree);
  json rows = json::array();
  for (double lambda : o.lambdas) {
    rows.push_back({{"lambda", lambda},
                    {"laplace", rwre::laplace_tau(tree, lambda)},
                    {"expected_tau", mean_tau}});
  }
  json body = run_header(g, "quenched", config);
  body["depth"] = o.depth;
  body["env_seed"] = env_seed;
  body["results"] = rows;
  write_json(g, body);
  return 0;
}

void write_stats_row(std::ostream& os, int generation, const rwre::PoolStats& s) {
  os << generation << "," << s.mean << "," << s.se << "," << s.q90 << "," << s.q99 << "\n";
}

struct CascadeOptions {
  int depth = 8;
  std::size_t samples = 1000;
};

int cmd_cascade(const GlobalOptions& g, const CascadeOptions& o) {
  const json config = load(g);
  const rwre::EnvSpec spec = rwre::env_from_config(config);
  Output out(g.out);
  out.stream().precision(12);
  out.stream() << "generation,mean,se,q90,q99\n";
  for (int n = 1; n <= o.depth; ++n) {
    std::vector<double> values(o.samples);
    for (std::size_t s = 0; s < o.samples; ++s) {
      values[s] = rwre::cascade_sample(spec, rwre::derive_key(g.seed, s), n).value;
    }
    write_stats_row(out.stream(), n, rwre::pool_stats(values));
  }
  json report = run_header(g, "cascade", config);
  report["depth"] = o.depth;
  report["samples"] = o.samples;
  write_report(g, report);
  return 0;
}

struct RdeOptions {
  std::optional<double> theta;
  std::optional<std::size_t> pool_size;
  std::optional<int> generations;
};

int cmd_rde(const GlobalOptions& g, const RdeOptions& o) {
  json config = load(g);
  const rwre::EnvSpec spec = rwre::env_from_config(config);
  const double theta = o.theta.value_or(setting<double>(config, "rde", "theta", 0.0));
  const std::size_t pool = o.pool_size.value_or(setting<std::size_t>(config, "rde", "pool_size", 100000));
  const int gens = o.generations.value_or(setting<int>(config, "rde", "generations", 100));
  config["rde"]["theta"] = theta;
  config["rde"]["pool_size"] = pool;
  config["rde"]["generations"] = gens;

  const auto traj = rwre::rde_trajectory(spec, theta, pool, gens, g.seed, g.workers);
  Output out(g.out);
  out.stream().precision(12);
  out.stream() << "generation,mean,se,q90,q99\n";
  for (std::size_t j = 0; j < traj.size(); ++j) {
    write_stats_row(out.stream(), static_cast<int>(j + 1), traj[j]);
  }
  write_report(g, run_header(g, "rde", config));
  return 0;
}

int cmd_propcheck(const GlobalOptions& g, std::uint64_t cases) {
  const rwre::PropcheckReport rep = rwre::run_propcheck_suite(g.seed, cases);
  json body = run_header(g, "propcheck", json::object());
  body["report"] = rep;
  write_json(g, body);
  return rep.all_pass() ? 0 : kExitPropertyFailure;
}

struct ExperimentOptions {
  std::optional<std::size_t> replicas;
  std::optional<double> tolerance;
};

int cmd_experiment(const GlobalOptions& g, const ExperimentOptions& o) {
  json config = load(g);
  const rwre::EnvSpec spec = rwre::env_from_config(config);
  const auto grid =
      setting<std::vector<std::uint64_t>>(config, "experiment", "n_grid", rwre::default_n_grid());
  const std::size_t replicas =
      o.replicas.value_or(setting<std::size_t>(config, "experiment", "replicas", 64));
  std::optional<double> tolerance = o.tolerance;
  if (!tolerance && config.contains("experiment") && config["experiment"].contains("tolerance")) {
    tolerance = config["experiment"]["tolerance"].get<double>();
  }
  config["experiment"]["n_grid"] = grid;
  config["experiment"]["replicas"] = replicas;

  const rwre::ScalingReport rep = rwre::run_scaling_experiment(spec, grid, replicas, g.seed, g.workers);
  json body = run_header(g, "experiment", config);
  body["report"] = rep;
  bool ok = true;
  if (tolerance) {
    ok = std::abs(rep.fit.slope - rep.target) <= *tolerance;
    body["tolerance"] = *tolerance;
    body["within_tolerance"] = ok;
  }
  write_json(g, body);
  return ok ? 0 : kExitPropertyFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random walk in random environment on b-ary trees"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--config", g.config_path, "Run configuration ([env], [experiment], [rde])");
  app.add_option("--seed", g.seed, "Master seed");
  app.add_option("--out", g.out, "Output path (stdout when omitted)");
  app.add_option("--report", g.report, "JSON report path for CSV commands (default <out>.json)");
  app.add_option("--workers", g.workers, "Worker threads")->check(CLI::PositiveNumber);

  auto* classify = app.add_subcommand("classify", "Exponents and regime of the [env] law");

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Walk max-depth and root-return checkpoints (CSV)");
  simulate->add_option("--steps", sim.steps, "Steps per walk");
  simulate->add_option("--replicas", sim.replicas, "Independent environment/walk pairs");

  QuenchedOptions qo;
  auto* quenched = app.add_subcommand("quenched", "Exact Laplace transform and mean of tau_n");
  quenched->add_option("--depth", qo.depth, "Boundary level n")->check(CLI::PositiveNumber);
  quenched->add_option("--lambda", qo.lambdas, "Laplace parameters")->expected(1, -1);
  quenched->add_option("--env-seed", qo.env_seed, "Environment seed (default --seed)");

  CascadeOptions co;
  auto* cascade = app.add_subcommand("cascade", "Moments of M_n per depth (CSV)");
  cascade->add_option("--depth", co.depth, "Largest depth")->check(CLI::PositiveNumber);
  cascade->add_option("--samples", co.samples, "Environments per depth")->check(CLI::PositiveNumber);

  RdeOptions ro;
  auto* rde = app.add_subcommand("rde", "Population dynamics for Z_{j,theta} (CSV)");
  rde->add_option("--theta", ro.theta, "theta in [0, 1]");
  rde->add_option("--pool-size", ro.pool_size, "Pool size");
  rde->add_option("--generations", ro.generations, "Number of generations");

  std::uint64_t cases = 10000;
  auto* propcheck = app.add_subcommand("propcheck", "Randomized inequality sweeps (JSON)");
  propcheck->add_option("--cases", cases, "Cases per sweep");

  ExperimentOptions eo;
  auto* experiment = app.add_subcommand("experiment", "Max-depth scaling experiment (JSON)");
  experiment->add_option("--replicas", eo.replicas, "Replicas");
  experiment->add_option("--tolerance", eo.tolerance, "Exit 2 if |slope - target| exceeds this");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitValidation;
  }

  try {
    if (*classify) return cmd_classify(g);
    if (*simulate) return cmd_simulate(g, sim);
    if (*quenched) return cmd_quenched(g, qo);
    if (*cascade) return cmd_cascade(g, co);
    if (*rde) return cmd_rde(g, ro);
    if (*propcheck) return cmd_propcheck(g, cases);
    if (*experiment) return cmd_experiment(g, eo);
  } catch (const rwre::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}
