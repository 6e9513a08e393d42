// SPDX-License-Identifier: Apache-2.0
#include "rwre/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "rwre/error.hpp"
#include "rwre/parallel.hpp"
#include "rwre/rng.hpp"

namespace rwre {

double cascade_subtree(const EnvSpec& spec, std::uint64_t env_seed, const VertexPath& path,
                       int depth) {
  if (depth < 1) throw Error(ErrorCode::kInvalidArgument, "depth must be >= 1");
  const auto b = static_cast<std::uint64_t>(spec.b());
  std::uint64_t leaves = 1;
  for (int d = 0; d < depth; ++d) {
    leaves *= b;
    if (leaves > kMaxCascadeLeaves) {
      throw Error(ErrorCode::kDepthTooLarge, "more than 2^32 leaves at depth " + std::to_string(depth));
    }
  }

  struct Frame {
    std::uint64_t key;
    double product;
    int level;
  };
  std::vector<Frame> stack{{vertex_key(env_seed, path), 1.0, 0}};
  std::vector<double> buf(b);
  double total = 0.0;
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    const double sum = spec.sample_children(f.key, buf);
    if (f.level + 1 == depth) {
      total += f.product * sum;
      continue;
    }
    for (std::uint64_t i = b; i-- > 0;) {
      stack.push_back({child_key(f.key, static_cast<std::uint32_t>(i)), f.product * buf[i],
                       f.level + 1});
    }
  }
  return total;
}

CascadeSample cascade_sample(const EnvSpec& spec, std::uint64_t seed, int depth) {
  return {depth, cascade_subtree(spec, seed, VertexPath{}, depth)};
}

PoolStats pool_stats(std::span<const double> values) {
  PoolStats s;
  const MeanEstimate m = jackknife_mean(values);
  s.mean = m.mean;
  s.se = m.se;
  if (values.empty()) return s;
  // Linear interpolation between order statistics, found by selection
  // rather than a full sort since this runs once per generation.
  std::vector<double> work(values.begin(), values.end());
  auto quantile = [&](double q) {
    const double pos = q * (work.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    std::nth_element(work.begin(), work.begin() + lo, work.end());
    const double v_lo = work[lo];
    if (lo + 1 >= work.size()) return v_lo;
    const double v_hi = *std::min_element(work.begin() + lo + 1, work.end());
    return v_lo + (pos - lo) * (v_hi - v_lo);
  };
  s.q90 = quantile(0.90);
  s.q99 = quantile(0.99);
  return s;
}

SamplePool rde_init(const EnvSpec& spec, std::uint64_t seed, std::size_t pool_size, double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw Error(ErrorCode::kBadTheta, "theta must lie in [0, 1]");
  if (pool_size < 1000) throw Error(ErrorCode::kBadPoolSize, "pool_size must be >= 1000");
  SamplePool pool;
  pool.theta = theta;
  pool.generation = 1;
  pool.values.resize(pool_size);
  const std::uint64_t base = derive_key(derive_key(seed, kPoolDomain), 1);
  std::vector<double> buf(spec.b());
  for (std::size_t k = 0; k < pool_size; ++k) {
    pool.values[k] = spec.sample_children(derive_key(base, k), buf);
  }
  return pool;
}

SamplePool rde_iterate(const EnvSpec& spec, const SamplePool& pool, std::uint64_t seed,
                       unsigned workers) {
  const std::size_t n = pool.values.size();
  const int b = spec.b();
  const double theta = pool.theta;
  SamplePool out;
  out.theta = theta;
  out.generation = pool.generation + 1;
  out.values.resize(n);
  const std::uint64_t base =
      derive_key(derive_key(seed, kPoolDomain), static_cast<std::uint64_t>(out.generation));
  const std::vector<double>& in = pool.values;
  parallel_for(n, workers, [&](std::size_t begin, std::size_t end) {
    std::vector<double> a(b);
    for (std::size_t k = begin; k < end; ++k) {
      SplitMix64 stream(derive_key(base, k));
      spec.sample_children(stream, a);
      double z = 0.0;
      for (int i = 0; i < b; ++i) {
        const double prev = in[stream.below(n)];
        z += a[i] * ((theta + prev) / (1.0 + prev));
      }
      out.values[k] = z;
    }
  });
  return out;
}

std::vector<PoolStats> rde_trajectory(const EnvSpec& spec, double theta, std::size_t pool_size,
                                      int generations, std::uint64_t seed, unsigned workers,
                                      SamplePool* final_pool) {
  if (generations < 1) throw Error(ErrorCode::kInvalidArgument, "generations must be >= 1");
  std::vector<PoolStats> out;
  out.reserve(generations);
  SamplePool pool = rde_init(spec, seed, pool_size, theta);
  out.push_back(pool_stats(pool.values));
  for (int j = 1; j < generations; ++j) {
    pool = rde_iterate(spec, pool, seed, workers);
    out.push_back(pool_stats(pool.values));
  }
  if (final_pool != nullptr) *final_pool = std::move(pool);
  return out;
}

MeanEstimate jackknife_mean(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n == 0) return {};
  double total = 0.0;
  for (double v : values) total += v;
  const double mean = total / n;
  if (n == 1) return {mean, 0.0};
  // Leave-one-out means (total - x_i) / (n - 1); the jackknife variance is
  // (n - 1)/n * sum (loo_i - mean_loo)^2.
  double loo_mean = 0.0;
  for (double v : values) loo_mean += (total - v) / (n - 1);
  loo_mean /= n;
  double ss = 0.0;
  for (double v : values) {
    const double d = (total - v) / (n - 1) - loo_mean;
    ss += d * d;
  }
  return {mean, std::sqrt(ss * (n - 1) / n)};
}

MeanEstimate estimate_mean_beta(const EnvSpec& spec, int n, double lambda, std::size_t pool_size,
                                std::uint64_t seed, unsigned workers) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "n must be >= 1");
  if (lambda < 0.0) throw Error(ErrorCode::kInvalidArgument, "lambda must be >= 0");
  if (n == 1) return {1.0, 0.0};
  const double theta = -std::expm1(-2.0 * lambda);
  SamplePool pool = rde_init(spec, seed, pool_size, theta);
  for (int j = 1; j < n; ++j) pool = rde_iterate(spec, pool, seed, workers);
  const MeanEstimate z = jackknife_mean(pool.values);
  const double scale = spec.b() * spec.mean();
  return {z.mean / scale, z.se / scale};
}

double hill_tail_index(std::span<const double> samples, std::size_t k) {
  if (k == 0 || k >= samples.size()) {
    throw Error(ErrorCode::kKTooLarge, "k must lie in [1, N)");
  }
  std::vector<double> top(samples.begin(), samples.end());
  for (double v : top) {
    if (!(v > 0.0)) throw Error(ErrorCode::kNonpositiveSample, "samples must be positive");
  }
  std::nth_element(top.begin(), top.begin() + k, top.end(), std::greater<>());
  const double threshold = top[k];
  double h = 0.0;
  for (std::size_t i = 0; i < k; ++i) h += std::log(top[i] / threshold);
  h /= k;
  if (!(h > 0.0)) throw Error(ErrorCode::kDegenerateTail, "top order statistics are tied");
  return 1.0 / h;
}

std::size_t default_hill_k(std::size_t n) {
  return static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(n), 2.0 / 3.0)));
}

}  // namespace rwre
