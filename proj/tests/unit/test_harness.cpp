// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "doctest.h"
#include "errors.hpp"
#include "oracles.hpp"
#include "rwre/config.hpp"
#include "rwre/harness.hpp"
#include "rwre/walk.hpp"

using namespace rwre;
using namespace rwre::testing;
namespace fs = std::filesystem;

namespace {

std::vector<std::pair<double, double>> power_points(double exponent, double noise, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> e(-noise, noise);
  std::vector<std::pair<double, double>> pts;
  for (int k = 0; k < 12; ++k) {
    const double x = std::pow(10.0, 1.0 + 0.5 * k);
    pts.emplace_back(x, std::pow(x, exponent) * (1.0 + e(rng)));
  }
  return pts;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("rwre_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return path / name;
  }
};

int run_cli(const std::string& args) {
  const std::string cmd = std::string(RWRE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kF1Config =
    "[env]\n"
    "b = 2\n"
    "atoms = [[0.25, 0.5], [0.75, 0.5]]\n"
    "children_model = iid_children\n"
    "\n"
    "[experiment]\n"
    "n_grid = [100, 300, 1000, 3000, 10000]\n"
    "replicas = 8\n";

}  // namespace

TEST_CASE("fit_loglog_slope examples") {
  std::vector<std::pair<double, double>> sq;
  for (double x : {1.0, 2.0, 5.0, 10.0, 30.0}) sq.emplace_back(x, x * x);
  const LineFit f = fit_loglog_slope(sq);
  CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f.ci_halfwidth < 1e-10);

  std::vector<std::pair<double, double>> flat;
  for (double x : {1.0, 2.0, 5.0, 10.0}) flat.emplace_back(x, 3.0);
  CHECK(std::abs(fit_loglog_slope(flat).slope) < 1e-12);

  const LineFit n = fit_loglog_slope(power_points(0.5, 0.01, 3));
  CHECK(std::abs(n.slope - 0.5) < 0.01);
  CHECK(n.ci_halfwidth > 0.0);
  CHECK(n.ci_halfwidth < 0.01);
  CHECK(std::abs(n.slope - 0.5) <= n.ci_halfwidth * 3);
}

TEST_CASE("fit_line against closed-form OLS with a t interval") {
  const std::vector<double> x = {1, 2, 3, 4, 5};
  const std::vector<double> y = {1.1, 1.9, 3.2, 3.9, 5.1};
  const LineFit f = fit_line(x, y);
  // slope = Sxy / Sxx with Sxx = 10, Sxy = 10
  CHECK(f.slope == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(0.04).epsilon(1e-12));
  double sse = 0.0;
  for (int i = 0; i < 5; ++i) sse += std::pow(y[i] - f.intercept - f.slope * x[i], 2);
  const double se = std::sqrt(sse / 3.0 / 10.0);
  CHECK(f.ci_halfwidth == doctest::Approx(3.182446305 * se).epsilon(1e-8));
}

TEST_CASE("fit errors") {
  const std::vector<std::pair<double, double>> two = {{1, 1}, {2, 2}};
  CHECK(thrown_code([&] { fit_loglog_slope(two); }) == ErrorCode::kDegeneratePoints);
  const std::vector<std::pair<double, double>> neg = {{1, 1}, {2, -2}, {3, 3}};
  CHECK(thrown_code([&] { fit_loglog_slope(neg); }) == ErrorCode::kDegeneratePoints);
  const std::vector<double> cx = {2, 2, 2};
  const std::vector<double> cy = {1, 2, 3};
  CHECK(thrown_code([&] { fit_line(cx, cy); }) == ErrorCode::kDegeneratePoints);
}

TEST_CASE("default n grid") {
  CHECK(default_n_grid() ==
        std::vector<std::uint64_t>{10000, 31623, 100000, 316228, 1000000, 3162278, 10000000});
}

TEST_CASE("experiment rejects non-recurrent regimes") {
  CHECK(thrown_code([] { run_scaling_experiment(family_f5(), {100, 1000, 10000}, 2, 1); }) ==
        ErrorCode::kWrongRegime);
}

TEST_CASE("small experiment is reproducible and well formed") {
  const std::vector<std::uint64_t> grid = {1000, 3000, 10000, 30000, 100000};
  const ScalingReport a = run_scaling_experiment(family_f1(), grid, 8, 5, 1);
  const ScalingReport b = run_scaling_experiment(family_f1(), grid, 8, 5, 3);
  CHECK(a.transform == Transform::kLogLog);
  CHECK(a.target == 0.5);
  CHECK(a.fit_from == 2);
  REQUIRE(a.grid.size() == grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(a.grid[i].n == grid[i]);
    CHECK(a.grid[i].median == b.grid[i].median);
    CHECK(a.grid[i].iqr >= 0.0);
    if (i > 0) CHECK(a.grid[i].median >= a.grid[i - 1].median);
  }
  CHECK(a.fit.slope == b.fit.slope);
  CHECK(nlohmann::json(a).dump() == nlohmann::json(b).dump());

  const ScalingReport pr = run_scaling_experiment(family_f4(), grid, 4, 5, 1);
  CHECK(pr.transform == Transform::kLinVsLogN);
  CHECK(pr.target == doctest::Approx(1.0 / std::log(1.0 / (2 * compute_q(family_f4())))));
}

TEST_CASE("medians follow the per-replica walks") {
  // Recompute each replica's max depth with the walk module directly.
  const std::vector<std::uint64_t> grid = {500, 5000, 50000};
  const ScalingReport r = run_scaling_experiment(family_f1(), grid, 5, 9, 1);
  std::vector<std::vector<double>> depth(grid.size());
  for (std::uint64_t k = 0; k < 5; ++k) {
    const auto [env, walk] = replica_seeds(9, k);
    const WalkStats st = simulate_walk(family_f1(), env, walk, grid.back(), grid);
    for (std::size_t i = 0; i < grid.size(); ++i) depth[i].push_back(st.max_depth_checkpoints[i].max_depth);
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::sort(depth[i].begin(), depth[i].end());
    CHECK(r.grid[i].median == depth[i][2]);
  }
}

TEST_CASE("config parsing") {
  const nlohmann::json c = parse_config(kF1Config);
  CHECK(c.at("env").at("b") == 2);
  CHECK(c.at("env").at("children_model") == "iid_children");
  CHECK(c.at("experiment").at("n_grid").size() == 5);
  const EnvSpec s = env_from_config(c);
  CHECK(s.mean() == doctest::Approx(0.5));

  CHECK(thrown_code([] { env_from_config(parse_config("[rde]\ntheta = 0\n")); }) == ErrorCode::kConfig);
  CHECK(thrown_code([] { parse_config("b = 2\n"); }) == ErrorCode::kConfig);
  CHECK(thrown_code([] { parse_config("[env\nb = 2\n"); }) == ErrorCode::kConfig);
  CHECK(thrown_code([] { load_config("/nonexistent/rwre.ini"); }) == ErrorCode::kConfig);
  CHECK(thrown_code([] { env_from_config(parse_config("[env]\nb = 1\natoms = [[1, 1]]\n")); }) ==
        ErrorCode::kBadBranching);
}

TEST_CASE("CLI exit codes and outputs") {
  TempDir dir;
  const fs::path cfg = dir.write("f1.ini", kF1Config);
  const fs::path bad = dir.write("bad.ini", "[env]\nb = 2\natoms = [[1.0, 0.5], [-1.0, 0.5]]\n");
  const fs::path f5 = dir.write("f5.ini", "[env]\nb = 2\natoms = [[0.5, 0.5], [2.0, 0.5]]\n");
  const std::string c = "--config " + cfg.string();

  const fs::path cls = dir.path / "classify.json";
  CHECK(run_cli(c + " --out " + cls.string() + " classify") == 0);
  const auto rep = nlohmann::json::parse(slurp(cls));
  CHECK(rep.dump().find("NULL_RECURRENT_SUBDIFFUSIVE") != std::string::npos);

  CHECK(run_cli("--config " + bad.string() + " classify") == 1);
  CHECK(run_cli("--config /nonexistent.ini classify") == 1);
  CHECK(run_cli(c + " --bogus classify") == 1);
  CHECK(run_cli(c + " quenched --depth 40 --lambda 0.1") == 1);
  CHECK(run_cli(c + " rde --theta 2") == 1);
  CHECK(run_cli("--config " + f5.string() + " experiment") == 1);

  const fs::path sim = dir.path / "sim.csv";
  CHECK(run_cli(c + " --seed 3 --out " + sim.string() + " simulate --steps 1000 --replicas 2") == 0);
  const std::string csv = slurp(sim);
  CHECK(csv.rfind("replica,step,max_depth,returns\n", 0) == 0);
  CHECK(fs::exists(dir.path / "sim.csv.json"));

  const fs::path rde = dir.path / "rde.csv";
  CHECK(run_cli(c + " --out " + rde.string() + " rde --theta 0 --pool-size 1000 --generations 3") == 0);
  CHECK(slurp(rde).rfind("generation,mean,se,q90,q99\n", 0) == 0);

  const fs::path q = dir.path / "q.json";
  CHECK(run_cli(c + " --out " + q.string() + " quenched --depth 1 --lambda 0 0.5") == 0);
  const auto qj = nlohmann::json::parse(slurp(q));
  CHECK(qj.dump().find("expected_tau") != std::string::npos);

  CHECK(run_cli(c + " propcheck --cases 200") == 0);
  // A zero tolerance cannot be met by a Monte Carlo slope.
  CHECK(run_cli(c + " experiment --replicas 4 --tolerance 0") == 2);
  CHECK(run_cli(c + " experiment --replicas 4 --tolerance 10") == 0);
}
