// SPDX-License-Identifier: Apache-2.0
//
// Exact quenched computations on a finite-depth materialization of the
// environment: the boundary functions alpha/beta/gamma, the Laplace transform
// and mean of the level hitting time tau_n, and the reversible measure.
#pragma once

#include <cstdint>
#include <vector>

#include "rwre/environment.hpp"

namespace rwre {

inline constexpr std::uint64_t kTreeNodeBudget = std::uint64_t{1} << 26;

/// Complete b-ary tree of depth n in level order: the root is 0 and the
/// children of v are b*v + 1, ..., b*v + b.
class QuenchedTree {
 public:
  int b() const noexcept { return b_; }
  int depth() const noexcept { return depth_; }
  std::size_t size() const noexcept { return a_.size(); }

  /// First index of level d.
  std::size_t level_begin(int d) const noexcept { return level_begin_[d]; }
  std::size_t level_end(int d) const noexcept { return level_begin_[d + 1]; }
  int depth_of(std::size_t v) const noexcept;

  std::size_t child(std::size_t v, int i) const noexcept { return b_ * v + 1 + i; }
  std::size_t parent(std::size_t v) const noexcept { return (v - 1) / b_; }

  /// A(v) for v != root.
  double a(std::size_t v) const noexcept { return a_[v]; }
  /// Sum of A over the children of v, including for leaves whose children are
  /// outside the tree.
  double child_sum(std::size_t v) const noexcept { return child_sum_[v]; }

  double omega_parent(std::size_t v) const noexcept { return 1.0 / (1.0 + child_sum_[v]); }
  double omega_child(std::size_t v, int i) const noexcept;

  /// Level-order index of a path of length <= depth.
  std::size_t index_of(const VertexPath& path) const noexcept;
  VertexPath path_of(std::size_t v) const;

 private:
  friend QuenchedTree materialize_tree(const EnvSpec&, std::uint64_t, int);

  int b_ = 2;
  int depth_ = 0;
  std::vector<std::size_t> level_begin_;
  std::vector<double> a_;
  std::vector<double> child_sum_;
};

/// Throws TREE_TOO_LARGE when b^depth exceeds kTreeNodeBudget.
QuenchedTree materialize_tree(const EnvSpec& spec, std::uint64_t env_seed, int depth);

/// alpha_{n,lambda}, beta_{n,lambda} and gamma_n (the latter built on
/// beta_n = beta_{n,0}) indexed like the tree. Root entries are NaN: the
/// functions are defined for 1 <= |x| <= n only.
struct BoundaryFunctions {
  double lambda = 0.0;
  std::vector<double> alpha;
  std::vector<double> beta;
  std::vector<double> beta0;
  std::vector<double> gamma;
};

BoundaryFunctions solve_boundary_functions(const QuenchedTree& tree, double lambda);

/// Largest relative residual of the three recursions over 1 <= |x| < n.
double max_recursion_residual(const QuenchedTree& tree, const BoundaryFunctions& f);

/// E_omega(exp(-lambda tau_n)) from the root.
double laplace_tau(const QuenchedTree& tree, double lambda);
double laplace_tau(const QuenchedTree& tree, const BoundaryFunctions& f);

/// E_omega(tau_n) from the root.
double expected_tau(const QuenchedTree& tree);
double expected_tau(const QuenchedTree& tree, const BoundaryFunctions& f);

/// pi(x) = pi(parent) * omega(parent, x) / omega(x, parent), pi(e) = pi_root.
std::vector<double> invariant_measure(const QuenchedTree& tree, double pi_root);

/// Environment-independent root mass for which
///   c0 * prod A(z) <= pi(x) <= prod A(z)   along ]]e, x]]
/// holds for every x != e, together with that c0.
struct SandwichConstants {
  double pi_root;
  double c0;
};
SandwichConstants sandwich_constants(const EnvSpec& spec);

}  // namespace rwre
