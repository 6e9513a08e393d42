// SPDX-License-Identifier: Apache-2.0
//
// Exact finite-sum checks of the elementary moment and Laplace inequalities
// used by the null-recurrent analysis, plus the extremal sequence recursion.
#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace rwre {

/// Finite law of a real random variable: (value, probability) pairs.
struct TestDistribution {
  std::vector<std::pair<double, double>> atoms;

  double mean() const noexcept;
  /// E f(xi)
  template <class F>
  double expect(F f) const {
    double s = 0.0;
    for (const auto& [v, p] : atoms) s += p * f(v);
    return s;
  }
};

struct CheckResult {
  bool pass = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio() const noexcept { return rhs != 0.0 ? lhs / rhs : (lhs == 0.0 ? 1.0 : INFINITY); }
};

/// lhs <= rhs up to 1e-12 relative to max(1, |rhs|).
bool within_bound(double lhs, double rhs) noexcept;

/// E[(xi/(x+xi))^a] / [E(xi/(x+xi))]^a  <=  E(xi^a) / [E xi]^a.   Throws ZERO_MEAN.
CheckResult check_rsd(const TestDistribution& dist, double a, double x);

/// E exp(-t h/E h)  <=  E exp(-t xi/E xi)   with h = (lambda + xi)/(1 + xi).
CheckResult check_exp_inequality(const TestDistribution& dist, double lambda, double t);

/// E[(sum xi_i)^a] <= sum E(xi_i^a) + (k-1)(sum E xi_i)^a for independent
/// xi_i >= 0, a in [1, 2]. Throws TOO_MANY_COMPONENTS (k > 6 or > 5 atoms).
CheckResult check_moment_sum(const std::vector<TestDistribution>& dists, double a);

/// E|sum xi_i|^a <= 2 sum E|xi_i|^a for independent centered xi_i, a in [1, 2].
/// Throws NOT_CENTERED.
CheckResult check_von_bahr_esseen(const std::vector<TestDistribution>& dists, double a);

enum class SequenceBranch { kUpper, kLower };

struct SequenceCase {
  double a = 2.0;
  double c_drift = 0.5;
  /// lambda_n = lambda_coeff * n^{-lambda_power}
  double lambda_coeff = 0.0;
  double lambda_power = 1.0;
  SequenceBranch branch = SequenceBranch::kUpper;
  /// c12 in the lower recursion u_{j+1} = lambda_n + (1 - c12 lambda_n) u_j - c u_j^a
  double c12 = 1.0;
};

struct SequenceResult {
  bool pass = false;
  std::vector<std::uint64_t> n;
  std::vector<double> u_n;
  std::vector<double> fitted_constant;  ///< u_n / (lambda_n^{1/a} + n^{-1/(a-1)})
  double constant_spread = 0.0;         ///< max / min of fitted_constant
  double fitted_exponent = 0.0;         ///< log-log slope of u_n against n
};

/// Iterate the equality case of the recursion from u_1 = 1 up to each n in
/// `n_grid`. Throws DIVERGED if the iterate leaves (0, inf).
SequenceResult check_sequence_lemma(const SequenceCase& c,
                                    const std::vector<std::uint64_t>& n_grid = {100, 1000, 10000,
                                                                                100000, 1000000});

double sequence_iterate(const SequenceCase& c, std::uint64_t n);

struct SweepSummary {
  std::string name;
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
  double max_ratio = 0.0;  ///< largest lhs/rhs observed
  std::uint64_t first_failure_seed = 0;
};

struct PropcheckReport {
  std::uint64_t seed = 0;
  std::vector<SweepSummary> sweeps;
  std::vector<std::pair<std::string, SequenceResult>> sequences;
  bool all_pass() const noexcept;
};

/// Randomized sweeps of every inequality, `cases` cases each, plus the fixed
/// sequence-recursion table. Each case's seed is derived from (seed, index)
/// and reported on failure.
PropcheckReport run_propcheck_suite(std::uint64_t seed, std::uint64_t cases = 10000);

void to_json(nlohmann::json& j, const PropcheckReport& report);

}  // namespace rwre
