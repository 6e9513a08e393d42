// SPDX-License-Identifier: Apache-2.0
//
// Quenched simulation of the walk on the lazily sampled environment.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rwre/environment.hpp"

namespace rwre {

/// Nearest-neighbour walker holding only the current root-to-vertex path.
///
/// Each level of the path stack caches the prefix sums of that vertex's
/// children A-values, so moving to the parent is free and moving to a child
/// costs one keyed draw of b values.
class LazyWalker {
 public:
  LazyWalker(const EnvSpec& spec, std::uint64_t env_seed);

  std::size_t depth() const noexcept { return path_.size(); }
  const std::vector<std::uint32_t>& path() const noexcept { return path_; }

  /// Back to the root.
  void reset();
  /// Jump to `path`, deriving every ancestor's environment.
  void reset_to(const VertexPath& path);

  /// One transition driven by the uniform `u` in [0, 1).
  void step(double u);

 private:
  void descend(std::uint32_t child);
  void load_top();

  const EnvSpec* spec_;
  std::size_t b_;
  std::uint64_t env_seed_;
  std::vector<std::uint64_t> keys_;
  std::vector<double> prefix_;  // b entries per level
  std::vector<std::uint32_t> path_;
};

std::uint64_t walk_stream_key(std::uint64_t walk_seed) noexcept;

struct Checkpoint {
  std::uint64_t step = 0;
  std::uint32_t max_depth = 0;  ///< max_{0 <= i <= step} |X_i|
  std::uint64_t returns = 0;    ///< #{1 <= i <= step : X_i = e}
};

struct WalkStats {
  std::uint64_t steps = 0;
  std::vector<Checkpoint> max_depth_checkpoints;
  std::uint64_t returns_to_root = 0;
  std::uint32_t final_depth = 0;
};

/// Distinct values ceil(10^{k/8}) for k = 0, 1, ... up to n_steps, with
/// n_steps itself appended.
std::vector<std::uint64_t> default_checkpoints(std::uint64_t n_steps);

WalkStats simulate_walk(const EnvSpec& spec, std::uint64_t env_seed, std::uint64_t walk_seed,
                        std::uint64_t n_steps);
/// As above with caller-chosen checkpoint steps. They are sorted and
/// deduplicated, values past n_steps are dropped and n_steps is always last.
WalkStats simulate_walk(const EnvSpec& spec, std::uint64_t env_seed, std::uint64_t walk_seed,
                        std::uint64_t n_steps, std::span<const std::uint64_t> checkpoints);

enum class HitOutcome { kHit, kCensored };

struct HittingResult {
  HitOutcome outcome = HitOutcome::kCensored;
  std::uint64_t tau = 0;  ///< valid when outcome == kHit
  std::uint64_t cap = 0;
};

/// tau_level = inf{ i >= 1 : |X_i| = level }, censored after `cap` steps.
HittingResult hitting_time(const EnvSpec& spec, std::uint64_t env_seed, std::uint64_t walk_seed,
                           std::uint32_t level, std::uint64_t cap);

/// First i >= 1 with X_i = e, if it happens within `cap` steps.
std::optional<std::uint64_t> first_return_time(const EnvSpec& spec, std::uint64_t env_seed,
                                               std::uint64_t walk_seed, std::uint64_t cap);

}  // namespace rwre
