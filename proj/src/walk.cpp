// SPDX-License-Identifier: Apache-2.0
#include "rwre/walk.hpp"

#include <algorithm>
#include <cmath>

#include "rwre/error.hpp"
#include "rwre/rng.hpp"

namespace rwre {

LazyWalker::LazyWalker(const EnvSpec& spec, std::uint64_t env_seed)
    : spec_(&spec), b_(static_cast<std::size_t>(spec.b())), env_seed_(env_seed) {
  reset();
}

void LazyWalker::reset() {
  path_.clear();
  keys_.assign(1, root_key(env_seed_));
  prefix_.resize(b_);
  load_top();
}

void LazyWalker::reset_to(const VertexPath& path) {
  reset();
  for (auto i : path.indices) descend(i);
}

void LazyWalker::load_top() {
  double* row = prefix_.data() + path_.size() * b_;
  spec_->sample_children(keys_.back(), std::span<double>(row, b_));
  for (std::size_t i = 1; i < b_; ++i) row[i] += row[i - 1];
}

void LazyWalker::descend(std::uint32_t child) {
  keys_.push_back(child_key(keys_.back(), child));
  path_.push_back(child);
  prefix_.resize((path_.size() + 1) * b_);
  load_top();
}

void LazyWalker::step(double u) {
  const double* row = prefix_.data() + path_.size() * b_;
  const double total = row[b_ - 1];
  double x;
  if (path_.empty()) {
    x = u * total;
  } else {
    x = u * (1.0 + total);
    if (x < 1.0) {
      path_.pop_back();
      keys_.pop_back();
      prefix_.resize((path_.size() + 1) * b_);
      return;
    }
    x -= 1.0;
  }
  std::uint32_t child = static_cast<std::uint32_t>(b_ - 1);
  for (std::size_t i = 0; i + 1 < b_; ++i) {
    if (x < row[i]) {
      child = static_cast<std::uint32_t>(i);
      break;
    }
  }
  descend(child);
}

std::uint64_t walk_stream_key(std::uint64_t walk_seed) noexcept {
  return derive_key(walk_seed, kWalkDomain);
}

std::vector<std::uint64_t> default_checkpoints(std::uint64_t n_steps) {
  std::vector<std::uint64_t> out;
  for (int k = 0;; ++k) {
    const double v = std::pow(10.0, k / 8.0);
    const auto n = static_cast<std::uint64_t>(std::ceil(v * (1.0 - 1e-12)));
    if (n > n_steps) break;
    if (out.empty() || n > out.back()) out.push_back(n);
  }
  if (out.empty() || out.back() != n_steps) out.push_back(n_steps);
  return out;
}

WalkStats simulate_walk(const EnvSpec& spec, std::uint64_t env_seed, std::uint64_t walk_seed,
                        std::uint64_t n_steps) {
  const auto cps = default_checkpoints(n_steps);
  return simulate_walk(spec, env_seed, walk_seed, n_steps, cps);
}

WalkStats simulate_walk(const EnvSpec& spec, std::uint64_t env_seed, std::uint64_t walk_seed,
                        std::uint64_t n_steps, std::span<const std::uint64_t> checkpoints) {
  if (n_steps < 1) throw Error(ErrorCode::kInvalidArgument, "n_steps must be >= 1");
  std::vector<std::uint64_t> marks(checkpoints.begin(), checkpoints.end());
  std::sort(marks.begin(), marks.end());
  marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
  std::erase_if(marks, [&](std::uint64_t n) { return n == 0 || n > n_steps; });
  if (marks.empty() || marks.back() != n_steps) marks.push_back(n_steps);

  LazyWalker walker(spec, env_seed);
  SplitMix64 rng(walk_stream_key(walk_seed));
  WalkStats stats;
  stats.max_depth_checkpoints.reserve(marks.size());
  std::uint32_t max_depth = 0;
  std::size_t next_mark = 0;
  for (std::uint64_t i = 1; i <= n_steps; ++i) {
    walker.step(rng.uniform());
    const auto d = static_cast<std::uint32_t>(walker.depth());
    if (d > max_depth) max_depth = d;
    if (d == 0) ++stats.returns_to_root;
    if (next_mark < marks.size() && marks[next_mark] == i) {
      stats.max_depth_checkpoints.push_back({i, max_depth, stats.returns_to_root});
      ++next_mark;
    }
  }
  stats.steps = n_steps;
  stats.final_depth = static_cast<std::uint32_t>(walker.depth());
  return stats;
}

HittingResult hitting_time(const EnvSpec& spec, std::uint64_t env_seed, std::uint64_t walk_seed,
                           std::uint32_t level, std::uint64_t cap) {
  if (level < 1 || cap < 1) throw Error(ErrorCode::kInvalidArgument, "level and cap must be >= 1");
  LazyWalker walker(spec, env_seed);
  SplitMix64 rng(walk_stream_key(walk_seed));
  for (std::uint64_t i = 1; i <= cap; ++i) {
    walker.step(rng.uniform());
    if (walker.depth() == level) return {HitOutcome::kHit, i, cap};
  }
  return {HitOutcome::kCensored, 0, cap};
}

std::optional<std::uint64_t> first_return_time(const EnvSpec& spec, std::uint64_t env_seed,
                                               std::uint64_t walk_seed, std::uint64_t cap) {
  LazyWalker walker(spec, env_seed);
  SplitMix64 rng(walk_stream_key(walk_seed));
  for (std::uint64_t i = 1; i <= cap; ++i) {
    walker.step(rng.uniform());
    if (walker.depth() == 0) return i;
  }
  return std::nullopt;
}

}  // namespace rwre
