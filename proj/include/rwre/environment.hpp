// SPDX-License-Identifier: Apache-2.0
//
// Environment laws and lazy per-vertex sampling on the infinite b-ary tree.
//
// A vertex x carries the vector (A(x_1), ..., A(x_b)) of its children's
// ratios. Its transition probabilities are
//   omega(x, parent)  = 1 / (1 + S),   omega(x, x_i) = A(x_i) / (1 + S)
// with S = sum_i A(x_i); at the root omega(e, e_i) = A(e_i) / S.
// Nothing is stored: the vector is re-derived from a 64-bit vertex key that
// is itself a chained hash of (seed, path).
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "rwre/rng.hpp"

namespace rwre {

enum class ChildrenModel {
  kIidChildren,  ///< the b children draw independent A-values
  kCommonChild,  ///< all b children share one draw
};

std::string to_string(ChildrenModel model);
ChildrenModel children_model_from_string(const std::string& name);

struct Atom {
  double value;
  double prob;
};

class EnvSpec {
 public:
  int b() const noexcept { return b_; }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  ChildrenModel children_model() const noexcept { return model_; }

  /// Fewer than two distinct atom values.
  bool degenerate() const noexcept { return degenerate_; }
  /// Built by make_critical_spec: E(A) = 1/b and psi'(1) < 0 by construction.
  bool exact_critical() const noexcept { return exact_critical_; }

  double a_min() const noexcept { return a_min_; }
  double a_max() const noexcept { return a_max_; }
  double mean() const noexcept { return mean_; }
  /// Smallest transition probability over all reachable configurations.
  double eps0() const noexcept { return eps0_; }

  /// Inverse-CDF lookup of one A-value from a uniform in [0, 1).
  double draw_atom(double u) const noexcept {
    for (std::size_t i = 0; i + 1 < cdf_.size(); ++i) {
      if (u < cdf_[i]) return atoms_[i].value;
    }
    return atoms_.back().value;
  }

  /// Fill `out` (size b) with one vertex's children A-values; returns their sum.
  double sample_children(SplitMix64& stream, std::span<double> out) const noexcept {
    double sum = 0.0;
    if (model_ == ChildrenModel::kCommonChild) {
      const double a = draw_atom(stream.uniform());
      for (auto& v : out) {
        v = a;
        sum += a;
      }
    } else {
      for (auto& v : out) {
        v = draw_atom(stream.uniform());
        sum += v;
      }
    }
    return sum;
  }

  /// Same as above, keyed by a vertex key.
  double sample_children(std::uint64_t vertex_key, std::span<double> out) const noexcept {
    SplitMix64 stream(vertex_key);
    return sample_children(stream, out);
  }

 private:
  friend EnvSpec make_env_spec(int, std::vector<Atom>, ChildrenModel, bool);
  friend EnvSpec make_critical_spec(int, std::vector<Atom>, ChildrenModel);

  int b_ = 2;
  std::vector<Atom> atoms_;
  std::vector<double> cdf_;
  ChildrenModel model_ = ChildrenModel::kIidChildren;
  bool degenerate_ = false;
  bool exact_critical_ = false;
  double a_min_ = 0.0;
  double a_max_ = 0.0;
  double mean_ = 0.0;
  double eps0_ = 0.0;
};

/// Validate and build a spec. Throws NONPOSITIVE_ATOM, PROB_SUM, BAD_BRANCHING,
/// and DEGENERATE when `require_nondegenerate` is set.
EnvSpec make_env_spec(int b, std::vector<Atom> atoms,
                      ChildrenModel model = ChildrenModel::kIidChildren,
                      bool require_nondegenerate = false);

/// Rescale the atom values so that E(A) = 1/b exactly (up to one rounding per
/// atom) and mark the spec critical. Throws NOT_CRITICAL when the rescaled law
/// has psi'(1) >= 0, since then inf_{t in [0,1]} E(A^t) < E(A).
EnvSpec make_critical_spec(int b, std::vector<Atom> atoms,
                           ChildrenModel model = ChildrenModel::kIidChildren);

/// Address of a vertex: child indices from the root. Empty means the root.
struct VertexPath {
  std::vector<std::uint32_t> indices;

  std::size_t depth() const noexcept { return indices.size(); }
  bool is_root() const noexcept { return indices.empty(); }
};

std::uint64_t root_key(std::uint64_t seed) noexcept;
inline std::uint64_t child_key(std::uint64_t parent_key, std::uint32_t index) noexcept {
  return derive_key(parent_key, index);
}
std::uint64_t vertex_key(std::uint64_t seed, const VertexPath& path) noexcept;

struct VertexEnv {
  std::vector<double> a_children;
  double omega_parent = 0.0;  ///< 0 at the root
  std::vector<double> omega_children;
};

VertexEnv vertex_env(const EnvSpec& spec, std::uint64_t seed, const VertexPath& path);

/// Probabilities over {parent, child_0, ..., child_{b-1}}; parent entry is 0
/// iff `is_root`.
std::vector<double> transition_probs(const VertexEnv& env, bool is_root);

void to_json(nlohmann::json& j, const EnvSpec& spec);
/// Reads keys `b`, `atoms` ([[value, prob], ...]) and `children_model`.
EnvSpec env_spec_from_json(const nlohmann::json& j);

}  // namespace rwre
