// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <limits>

namespace rwre {

/// SplitMix64 output finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Combine a key with a tag into a new, well-mixed key.
constexpr std::uint64_t derive_key(std::uint64_t key, std::uint64_t tag) noexcept {
  return mix64(key ^ mix64(tag + 0x9E3779B97F4A7C15ULL));
}

/// Map a 64-bit word to [0, 1) using its top 53 bits.
constexpr double to_unit(std::uint64_t x) noexcept {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

/// Counter-based stream: the j-th output is mix64(key + (j+1)·γ).
///
/// Satisfies UniformRandomBitGenerator. Uniform doubles and bounded integers
/// are produced by hand rather than through <random> distributions so that
/// every platform reproduces the same bit patterns.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t key) noexcept : state_(key) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  constexpr result_type operator()() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

  constexpr double uniform() noexcept { return to_unit((*this)()); }

  /// Integer in [0, n) by multiply-high; bias is below n / 2^64.
  std::uint64_t below(std::uint64_t n) noexcept {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>((*this)()) * n) >> 64);
  }

 private:
  std::uint64_t state_;
};

// Domain tags keep the environment, walk, cascade and pool streams disjoint.
inline constexpr std::uint64_t kEnvDomain = 0x656E7669726F6E31ULL;
inline constexpr std::uint64_t kWalkDomain = 0x77616C6B65723031ULL;
inline constexpr std::uint64_t kPoolDomain = 0x706F6F6C73303031ULL;

}  // namespace rwre
