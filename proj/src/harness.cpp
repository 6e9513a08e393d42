// SPDX-License-Identifier: Apache-2.0
#include "rwre/harness.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/students_t.hpp>

#include "rwre/error.hpp"
#include "rwre/parallel.hpp"
#include "rwre/rng.hpp"
#include "rwre/walk.hpp"

namespace rwre {

namespace {

double interpolated_quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * (v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - lo) * (v[hi] - v[lo]);
}

}  // namespace

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 3 || y.size() != n) throw Error(ErrorCode::kDegeneratePoints, "need at least 3 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw Error(ErrorCode::kDegeneratePoints, "abscissae are all equal");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    rss += r * r;
  }
  const double dof = static_cast<double>(n - 2);
  const double se = std::sqrt(rss / dof / sxx);
  const boost::math::students_t dist(dof);
  fit.ci_halfwidth = boost::math::quantile(dist, 0.975) * se;
  return fit;
}

LineFit fit_loglog_slope(std::span<const std::pair<double, double>> points) {
  std::vector<double> lx, ly;
  lx.reserve(points.size());
  ly.reserve(points.size());
  for (const auto& [x, y] : points) {
    if (!(x > 0.0 && y > 0.0)) {
      throw Error(ErrorCode::kDegeneratePoints, "log-log fit needs positive coordinates");
    }
    lx.push_back(std::log(x));
    ly.push_back(std::log(y));
  }
  return fit_line(lx, ly);
}

std::string to_string(Transform t) { return t == Transform::kLogLog ? "LOGLOG" : "LIN_VS_LOGN"; }

std::vector<std::uint64_t> default_n_grid() {
  std::vector<std::uint64_t> grid;
  for (int k = 32; k <= 56; k += 4) {
    grid.push_back(static_cast<std::uint64_t>(std::ceil(std::pow(10.0, k / 8.0) * (1.0 - 1e-12))));
  }
  return grid;
}

std::pair<std::uint64_t, std::uint64_t> replica_seeds(std::uint64_t seed, std::uint64_t replica) {
  const std::uint64_t r = derive_key(seed, replica);
  return {derive_key(r, 0), derive_key(r, 1)};
}

ScalingReport run_scaling_experiment(const EnvSpec& spec, const std::vector<std::uint64_t>& n_grid,
                                     std::size_t replicas, std::uint64_t seed, unsigned workers) {
  const ExponentReport exps = classify_regime(spec);
  if (exps.regime != Regime::kPositiveRecurrent &&
      exps.regime != Regime::kNullRecurrentSubdiffusive) {
    throw Error(ErrorCode::kWrongRegime, "scaling experiments need a recurrent regime, got " +
                                             to_string(exps.regime));
  }
  if (replicas < 1) throw Error(ErrorCode::kInvalidArgument, "replicas must be >= 1");
  std::vector<std::uint64_t> grid = n_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.size() < 3 || grid.front() == 0) {
    throw Error(ErrorCode::kDegeneratePoints, "n grid needs at least 3 positive values");
  }

  // depth[r][g]: running max depth of replica r at grid point g
  std::vector<std::vector<double>> depth(replicas, std::vector<double>(grid.size()));
  parallel_for(replicas, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      const auto [env_seed, walk_seed] = replica_seeds(seed, r);
      const WalkStats stats = simulate_walk(spec, env_seed, walk_seed, grid.back(), grid);
      for (std::size_t g = 0; g < grid.size(); ++g) {
        depth[r][g] = stats.max_depth_checkpoints[g].max_depth;
      }
    }
  });

  ScalingReport rep;
  to_json(rep.spec, spec);
  rep.regime = exps.regime;
  rep.seed = seed;
  rep.replicas = replicas;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    std::vector<double> col(replicas);
    for (std::size_t r = 0; r < replicas; ++r) col[r] = depth[r][g];
    rep.grid.push_back({grid[g], interpolated_quantile(col, 0.5),
                        interpolated_quantile(col, 0.75) - interpolated_quantile(col, 0.25)});
  }

  rep.fit_from = std::min(grid.size() / 2, grid.size() - 3);
  std::vector<double> xs, ys;
  for (std::size_t g = rep.fit_from; g < grid.size(); ++g) {
    xs.push_back(std::log(static_cast<double>(rep.grid[g].n)));
    ys.push_back(rep.grid[g].median);
  }
  if (exps.regime == Regime::kNullRecurrentSubdiffusive) {
    rep.transform = Transform::kLogLog;
    for (auto& y : ys) {
      if (!(y > 0.0)) throw Error(ErrorCode::kDegeneratePoints, "zero median depth");
      y = std::log(y);
    }
    rep.target = exps.nu;
  } else {
    rep.transform = Transform::kLinVsLogN;
    rep.target = 1.0 / std::log(1.0 / (exps.q * spec.b()));
  }
  rep.fit = fit_line(xs, ys);
  return rep;
}

void to_json(nlohmann::json& j, const ScalingReport& r) {
  nlohmann::json grid = nlohmann::json::array();
  for (const auto& p : r.grid) grid.push_back({{"n", p.n}, {"median", p.median}, {"iqr", p.iqr}});
  j = nlohmann::json{{"spec", r.spec},
                     {"regime", to_string(r.regime)},
                     {"grid", grid},
                     {"fit_from_n", r.grid.empty() ? 0 : r.grid[r.fit_from].n},
                     {"slope", r.fit.slope},
                     {"intercept", r.fit.intercept},
                     {"ci_halfwidth", r.fit.ci_halfwidth},
                     {"target", r.target},
                     {"transform", to_string(r.transform)},
                     {"seed", r.seed},
                     {"replicas", r.replicas}};
}

}  // namespace rwre
