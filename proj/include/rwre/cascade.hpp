// SPDX-License-Identifier: Apache-2.0
//
// Mandelbrot cascade sums over the lazy environment, the population-dynamics
// solver for the recursive distributional equation
//   Z_{j+1} = sum_i A_i (theta + Z_j^{(i)}) / (1 + Z_j^{(i)}),
// and tail-index estimation.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rwre/environment.hpp"

namespace rwre {

inline constexpr std::uint64_t kMaxCascadeLeaves = std::uint64_t{1} << 32;

struct CascadeSample {
  int depth = 0;
  double value = 0.0;  ///< M_n
};

/// Sum over the descendants y of `path` at relative depth `depth` of the
/// product of A along ]]path, y]]. Streams depth-first in O(depth) memory.
/// Throws DEPTH_TOO_LARGE beyond kMaxCascadeLeaves leaves.
double cascade_subtree(const EnvSpec& spec, std::uint64_t env_seed, const VertexPath& path,
                       int depth);

/// M_n = sum_{|x| = n} prod_{y in ]]e, x]]} A(y) on the environment `seed`.
CascadeSample cascade_sample(const EnvSpec& spec, std::uint64_t seed, int depth);

struct SamplePool {
  double theta = 0.0;
  int generation = 1;
  std::vector<double> values;
};

struct PoolStats {
  double mean = 0.0;
  double se = 0.0;
  double q90 = 0.0;
  double q99 = 0.0;
};

PoolStats pool_stats(std::span<const double> values);

/// N i.i.d. draws of Z_1 = sum_i A_i. Throws BAD_THETA and BAD_POOL_SIZE
/// (pool_size < 1000).
SamplePool rde_init(const EnvSpec& spec, std::uint64_t seed, std::size_t pool_size, double theta);

/// One generation of the map. Output slot k draws a fresh A-vector and b
/// resampled inputs from a stream keyed by (seed, generation, k), so the
/// result does not depend on `workers`.
SamplePool rde_iterate(const EnvSpec& spec, const SamplePool& pool, std::uint64_t seed,
                       unsigned workers = 1);

/// Run `generations` pools from rde_init and report stats after each.
std::vector<PoolStats> rde_trajectory(const EnvSpec& spec, double theta, std::size_t pool_size,
                                      int generations, std::uint64_t seed, unsigned workers = 1,
                                      SamplePool* final_pool = nullptr);

struct MeanEstimate {
  double mean = 0.0;
  double se = 0.0;
};

/// E[beta_{n,lambda}(e_i)] = E[Z_{n,theta}] / (b E A) with theta = 1 - e^{-2 lambda};
/// standard error by jackknife. n = 1 is the boundary value 1.
MeanEstimate estimate_mean_beta(const EnvSpec& spec, int n, double lambda, std::size_t pool_size,
                                std::uint64_t seed, unsigned workers = 1);

/// Jackknife mean and standard error of a ratio-free statistic: the sample mean.
MeanEstimate jackknife_mean(std::span<const double> values);

/// Hill estimator of the tail index over the top-k order statistics.
/// Throws K_TOO_LARGE (k == 0 or k >= N), NONPOSITIVE_SAMPLE, DEGENERATE_TAIL.
double hill_tail_index(std::span<const double> samples, std::size_t k);

/// ceil(N^{2/3})
std::size_t default_hill_k(std::size_t n);

}  // namespace rwre
