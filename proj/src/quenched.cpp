// SPDX-License-Identifier: Apache-2.0
#include "rwre/quenched.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rwre/error.hpp"

namespace rwre {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

int QuenchedTree::depth_of(std::size_t v) const noexcept {
  const auto it = std::upper_bound(level_begin_.begin(), level_begin_.end(), v);
  return static_cast<int>(it - level_begin_.begin()) - 1;
}

double QuenchedTree::omega_child(std::size_t v, int i) const noexcept {
  const double a = a_[child(v, i)];
  return v == 0 ? a / child_sum_[0] : a / (1.0 + child_sum_[v]);
}

std::size_t QuenchedTree::index_of(const VertexPath& path) const noexcept {
  std::size_t v = 0;
  for (auto i : path.indices) v = child(v, static_cast<int>(i));
  return v;
}

VertexPath QuenchedTree::path_of(std::size_t v) const {
  VertexPath path;
  while (v != 0) {
    const std::size_t p = parent(v);
    path.indices.push_back(static_cast<std::uint32_t>(v - 1 - b_ * p));
    v = p;
  }
  std::reverse(path.indices.begin(), path.indices.end());
  return path;
}

QuenchedTree materialize_tree(const EnvSpec& spec, std::uint64_t env_seed, int depth) {
  if (depth < 1) throw Error(ErrorCode::kInvalidArgument, "depth must be >= 1");
  const auto b = static_cast<std::uint64_t>(spec.b());
  std::uint64_t leaves = 1;
  for (int d = 0; d < depth; ++d) {
    leaves *= b;
    if (leaves > kTreeNodeBudget) {
      throw Error(ErrorCode::kTreeTooLarge,
                  "b^depth exceeds the node budget for depth " + std::to_string(depth));
    }
  }

  QuenchedTree tree;
  tree.b_ = spec.b();
  tree.depth_ = depth;
  tree.level_begin_.resize(depth + 2);
  tree.level_begin_[0] = 0;
  std::uint64_t width = 1;
  for (int d = 0; d <= depth; ++d) {
    tree.level_begin_[d + 1] = tree.level_begin_[d] + width;
    width *= b;
  }
  const std::size_t n = tree.level_begin_[depth + 1];
  tree.a_.assign(n, kNaN);
  tree.child_sum_.assign(n, 0.0);

  std::vector<std::uint64_t> keys{root_key(env_seed)};
  std::vector<std::uint64_t> next;
  std::vector<double> buf(b);
  for (int d = 0; d <= depth; ++d) {
    const std::size_t begin = tree.level_begin_[d];
    if (d < depth) next.resize(keys.size() * b);
    for (std::size_t k = 0; k < keys.size(); ++k) {
      const std::size_t v = begin + k;
      tree.child_sum_[v] = spec.sample_children(keys[k], buf);
      if (d == depth) continue;
      for (std::uint64_t i = 0; i < b; ++i) {
        tree.a_[tree.child(v, static_cast<int>(i))] = buf[i];
        next[k * b + i] = child_key(keys[k], static_cast<std::uint32_t>(i));
      }
    }
    keys.swap(next);
  }
  return tree;
}

BoundaryFunctions solve_boundary_functions(const QuenchedTree& tree, double lambda) {
  if (lambda < 0.0) throw Error(ErrorCode::kInvalidArgument, "lambda must be >= 0");
  const std::size_t n = tree.size();
  const int depth = tree.depth();
  const int b = tree.b();
  BoundaryFunctions f;
  f.lambda = lambda;
  f.alpha.assign(n, kNaN);
  f.beta.assign(n, kNaN);
  f.beta0.assign(n, kNaN);
  f.gamma.assign(n, kNaN);

  for (std::size_t v = tree.level_begin(depth); v < tree.level_end(depth); ++v) {
    f.alpha[v] = f.beta[v] = f.beta0[v] = 1.0;
    f.gamma[v] = 0.0;
  }
  const double damp = std::exp(-lambda);
  const double offset = -std::expm1(-2.0 * lambda);
  // Children have larger level-order indices, so a reverse sweep over the
  // interior levels visits every vertex after all of its children.
  for (int d = depth - 1; d >= 1; --d) {
    for (std::size_t v = tree.level_end(d); v-- > tree.level_begin(d);) {
      double s_alpha = 0.0, s_beta = 0.0, s_beta0 = 0.0, s_gamma = 0.0;
      for (int i = 0; i < b; ++i) {
        const std::size_t c = tree.child(v, i);
        const double a = tree.a(c);
        s_alpha += a * f.alpha[c];
        s_beta += a * f.beta[c];
        s_beta0 += a * f.beta0[c];
        s_gamma += a * f.gamma[c];
      }
      f.alpha[v] = damp * s_alpha / (1.0 + s_beta);
      f.beta[v] = (offset + s_beta) / (1.0 + s_beta);
      f.beta0[v] = s_beta0 / (1.0 + s_beta0);
      f.gamma[v] = ((1.0 + tree.child_sum(v)) + s_gamma) / (1.0 + s_beta0);
    }
  }
  return f;
}

double max_recursion_residual(const QuenchedTree& tree, const BoundaryFunctions& f) {
  const double damp = std::exp(-f.lambda);
  const double offset = -std::expm1(-2.0 * f.lambda);
  auto rel = [](double lhs, double rhs) {
    return std::abs(lhs - rhs) / std::max(std::abs(rhs), std::numeric_limits<double>::min());
  };
  double worst = 0.0;
  for (int d = 1; d < tree.depth(); ++d) {
    for (std::size_t v = tree.level_begin(d); v < tree.level_end(d); ++v) {
      double num_a = 0.0, den = 1.0, num_b = offset, den0 = 1.0, num_g = 1.0 / tree.omega_parent(v);
      for (int i = 0; i < tree.b(); ++i) {
        const std::size_t c = tree.child(v, i);
        num_a += tree.a(c) * f.alpha[c];
        den += tree.a(c) * f.beta[c];
        num_b += tree.a(c) * f.beta[c];
        den0 += tree.a(c) * f.beta0[c];
        num_g += tree.a(c) * f.gamma[c];
      }
      worst = std::max({worst, rel(f.alpha[v], damp * num_a / den), rel(f.beta[v], num_b / den),
                        rel(f.gamma[v], num_g / den0)});
    }
  }
  return worst;
}

double laplace_tau(const QuenchedTree& tree, double lambda) {
  return laplace_tau(tree, solve_boundary_functions(tree, lambda));
}

double laplace_tau(const QuenchedTree& tree, const BoundaryFunctions& f) {
  // omega(e, e_i) is proportional to A(e_i); the normalization cancels.
  double num = 0.0;
  double den = 0.0;
  for (int i = 0; i < tree.b(); ++i) {
    const std::size_t c = tree.child(0, i);
    num += tree.a(c) * f.alpha[c];
    den += tree.a(c) * f.beta[c];
  }
  return std::exp(-f.lambda) * num / den;
}

double expected_tau(const QuenchedTree& tree) {
  return expected_tau(tree, solve_boundary_functions(tree, 0.0));
}

double expected_tau(const QuenchedTree& tree, const BoundaryFunctions& f) {
  double num = 0.0;
  double den = 0.0;
  double weight = 0.0;
  for (int i = 0; i < tree.b(); ++i) {
    const std::size_t c = tree.child(0, i);
    weight += tree.a(c);
    num += tree.a(c) * f.gamma[c];
    den += tree.a(c) * f.beta0[c];
  }
  return (weight + num) / den;
}

std::vector<double> invariant_measure(const QuenchedTree& tree, double pi_root) {
  if (!(pi_root > 0.0)) throw Error(ErrorCode::kInvalidArgument, "pi_root must be > 0");
  std::vector<double> pi(tree.size());
  pi[0] = pi_root;
  for (std::size_t v = 0; v < tree.level_begin(tree.depth()); ++v) {
    for (int i = 0; i < tree.b(); ++i) {
      const std::size_t c = tree.child(v, i);
      pi[c] = pi[v] * tree.omega_child(v, i) / tree.omega_parent(c);
    }
  }
  return pi;
}

SandwichConstants sandwich_constants(const EnvSpec& spec) {
  // pi(x) / prod A(z) = pi(e) (1 + S(x)) / S(e) with S in [b a_min, b a_max].
  const double lo = spec.b() * spec.a_min();
  const double hi = spec.b() * spec.a_max();
  return {lo / (1.0 + hi), lo * (1.0 + lo) / ((1.0 + hi) * hi)};
}

}  // namespace rwre
