// SPDX-License-Identifier: Apache-2.0
//
// Desk-scale scaling experiments for max_{0<=i<=n} |X_i| and the regression
// helpers they rely on.
#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "json.hpp"
#include "rwre/environment.hpp"
#include "rwre/exponents.hpp"

namespace rwre {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double ci_halfwidth = 0.0;  ///< 95% Student-t interval on the slope
};

/// Ordinary least squares of y on x. Throws DEGENERATE_POINTS for fewer than
/// three points or constant x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// OLS on (log x, log y). Throws DEGENERATE_POINTS also for non-positive
/// coordinates.
LineFit fit_loglog_slope(std::span<const std::pair<double, double>> points);

enum class Transform { kLogLog, kLinVsLogN };

std::string to_string(Transform t);

struct GridPoint {
  std::uint64_t n = 0;
  double median = 0.0;
  double iqr = 0.0;
};

struct ScalingReport {
  nlohmann::json spec;
  Regime regime = Regime::kCriticalOther;
  std::vector<GridPoint> grid;
  std::size_t fit_from = 0;  ///< first grid index used by the fit
  LineFit fit;
  double target = 0.0;
  Transform transform = Transform::kLogLog;
  std::uint64_t seed = 0;
  std::size_t replicas = 0;
};

/// ceil(10^{k/8}) for k = 32, 36, ..., 56: half-decades from 10^4 to 10^7.
std::vector<std::uint64_t> default_n_grid();

/// Runs `replicas` independent (environment, walk) pairs to max(n_grid) steps,
/// takes the median of the running max depth at each grid point and fits the
/// upper half of the grid. Throws WRONG_REGIME outside the recurrent regimes.
ScalingReport run_scaling_experiment(const EnvSpec& spec, const std::vector<std::uint64_t>& n_grid,
                                     std::size_t replicas, std::uint64_t seed,
                                     unsigned workers = 1);

/// Per-replica environment and walk seeds.
std::pair<std::uint64_t, std::uint64_t> replica_seeds(std::uint64_t seed, std::uint64_t replica);

void to_json(nlohmann::json& j, const ScalingReport& report);

}  // namespace rwre
