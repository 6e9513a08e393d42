// SPDX-License-Identifier: Apache-2.0
#include "rwre/propcheck.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "rwre/error.hpp"
#include "rwre/harness.hpp"
#include "rwre/rng.hpp"

namespace rwre {

namespace {

constexpr std::size_t kMaxComponents = 6;
constexpr std::size_t kMaxAtoms = 5;

double require_positive_mean(const TestDistribution& dist) {
  const double m = dist.mean();
  if (!(m > 0.0)) throw Error(ErrorCode::kZeroMean, "E xi must be > 0");
  return m;
}

// E f(xi_1 + ... + xi_k) over the product measure.
double expect_sum(const std::vector<TestDistribution>& dists,
                  const std::function<double(double)>& f) {
  double total = 0.0;
  std::vector<std::size_t> idx(dists.size(), 0);
  while (true) {
    double value = 0.0;
    double prob = 1.0;
    for (std::size_t i = 0; i < dists.size(); ++i) {
      value += dists[i].atoms[idx[i]].first;
      prob *= dists[i].atoms[idx[i]].second;
    }
    total += prob * f(value);
    std::size_t i = 0;
    for (; i < dists.size(); ++i) {
      if (++idx[i] < dists[i].atoms.size()) break;
      idx[i] = 0;
    }
    if (i == dists.size()) break;
  }
  return total;
}

void check_component_limits(const std::vector<TestDistribution>& dists) {
  if (dists.empty()) throw Error(ErrorCode::kInvalidArgument, "need k >= 1 components");
  if (dists.size() > kMaxComponents) {
    throw Error(ErrorCode::kTooManyComponents, "at most 6 components");
  }
  for (const auto& d : dists) {
    if (d.atoms.empty() || d.atoms.size() > kMaxAtoms) {
      throw Error(ErrorCode::kTooManyComponents, "each component needs 1 to 5 atoms");
    }
  }
}

void check_exponent(double a) {
  if (!(a >= 1.0 && a <= 2.0)) throw Error(ErrorCode::kInvalidArgument, "a must lie in [1, 2]");
}

// Random finite law on [0, inf): log-uniform magnitudes, occasional zero atom.
TestDistribution random_nonnegative(SplitMix64& rng, std::size_t max_atoms) {
  TestDistribution d;
  const std::size_t k = 1 + rng.below(max_atoms);
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double v = rng.uniform() < 0.1 ? 0.0 : std::exp(-6.0 + 12.0 * rng.uniform());
    const double w = 0.05 + rng.uniform();
    d.atoms.emplace_back(v, w);
    total += w;
  }
  for (auto& atom : d.atoms) atom.second /= total;
  if (!(d.mean() > 0.0)) d.atoms.front().first = 1.0;
  return d;
}

TestDistribution random_centered(SplitMix64& rng, std::size_t max_atoms) {
  TestDistribution d;
  const std::size_t k = 1 + rng.below(max_atoms);
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double v = (rng.uniform() - 0.5) * std::exp(-3.0 + 6.0 * rng.uniform());
    const double w = 0.05 + rng.uniform();
    d.atoms.emplace_back(v, w);
    total += w;
  }
  for (auto& atom : d.atoms) atom.second /= total;
  const double m = d.mean();
  for (auto& atom : d.atoms) atom.first -= m;
  return d;
}

template <class Case>
SweepSummary sweep(const std::string& name, std::uint64_t tag, std::uint64_t seed,
                   std::uint64_t cases, Case run) {
  SweepSummary s;
  s.name = name;
  s.cases = cases;
  const std::uint64_t base = derive_key(seed, tag);
  for (std::uint64_t i = 0; i < cases; ++i) {
    const std::uint64_t case_seed = derive_key(base, i);
    SplitMix64 rng(case_seed);
    const CheckResult r = run(rng);
    s.max_ratio = std::max(s.max_ratio, r.ratio());
    if (!r.pass) {
      if (s.failures == 0) s.first_failure_seed = case_seed;
      ++s.failures;
    }
  }
  return s;
}

}  // namespace

double TestDistribution::mean() const noexcept {
  double s = 0.0;
  for (const auto& [v, p] : atoms) s += p * v;
  return s;
}

bool within_bound(double lhs, double rhs) noexcept {
  return lhs <= rhs + 1e-12 * std::max(1.0, std::abs(rhs));
}

CheckResult check_rsd(const TestDistribution& dist, double a, double x) {
  if (!(a > 1.0)) throw Error(ErrorCode::kInvalidArgument, "a must be > 1");
  if (!(x >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "x must be >= 0");
  const double m = require_positive_mean(dist);
  auto ratio = [x](double v) { return v > 0.0 ? v / (x + v) : 0.0; };
  const double m_ratio = dist.expect(ratio);
  CheckResult r;
  r.lhs = dist.expect([&](double v) { return std::pow(ratio(v), a); }) / std::pow(m_ratio, a);
  r.rhs = dist.expect([a](double v) { return std::pow(v, a); }) / std::pow(m, a);
  r.pass = within_bound(r.lhs, r.rhs);
  return r;
}

CheckResult check_exp_inequality(const TestDistribution& dist, double lambda, double t) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "lambda must lie in [0, 1]");
  }
  if (!(t >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "t must be >= 0");
  const double m = require_positive_mean(dist);
  auto h = [lambda](double v) { return (lambda + v) / (1.0 + v); };
  const double m_h = dist.expect(h);
  CheckResult r;
  r.lhs = dist.expect([&](double v) { return std::exp(-t * h(v) / m_h); });
  r.rhs = dist.expect([&](double v) { return std::exp(-t * v / m); });
  r.pass = within_bound(r.lhs, r.rhs);
  return r;
}

CheckResult check_moment_sum(const std::vector<TestDistribution>& dists, double a) {
  check_component_limits(dists);
  check_exponent(a);
  double sum_moments = 0.0;
  double sum_means = 0.0;
  for (const auto& d : dists) {
    for (const auto& [v, p] : d.atoms) {
      if (v < 0.0) throw Error(ErrorCode::kInvalidArgument, "components must be non-negative");
    }
    sum_moments += d.expect([a](double v) { return std::pow(v, a); });
    sum_means += d.mean();
  }
  CheckResult r;
  r.lhs = expect_sum(dists, [a](double s) { return std::pow(s, a); });
  r.rhs = sum_moments + static_cast<double>(dists.size() - 1) * std::pow(sum_means, a);
  r.pass = within_bound(r.lhs, r.rhs);
  return r;
}

CheckResult check_von_bahr_esseen(const std::vector<TestDistribution>& dists, double a) {
  check_component_limits(dists);
  check_exponent(a);
  double sum_abs = 0.0;
  for (const auto& d : dists) {
    double scale = 0.0;
    for (const auto& [v, p] : d.atoms) scale = std::max(scale, std::abs(v));
    if (std::abs(d.mean()) > 1e-12 * std::max(1.0, scale)) {
      throw Error(ErrorCode::kNotCentered, "component has non-zero mean");
    }
    sum_abs += d.expect([a](double v) { return std::pow(std::abs(v), a); });
  }
  CheckResult r;
  r.lhs = expect_sum(dists, [a](double s) { return std::pow(std::abs(s), a); });
  r.rhs = 2.0 * sum_abs;
  r.pass = within_bound(r.lhs, r.rhs);
  return r;
}

double sequence_iterate(const SequenceCase& c, std::uint64_t n) {
  const double lambda = c.lambda_coeff * std::pow(static_cast<double>(n), -c.lambda_power);
  double u = 1.0;
  for (std::uint64_t j = 1; j < n; ++j) {
    if (c.branch == SequenceBranch::kUpper) {
      u = lambda + u - c.c_drift * std::pow(u, c.a);
    } else {
      u = lambda + (1.0 - c.c12 * lambda) * u - c.c_drift * std::pow(u, c.a);
    }
    if (!(u > 0.0) || !std::isfinite(u)) {
      throw Error(ErrorCode::kDiverged, "iterate left (0, inf) at j = " + std::to_string(j + 1));
    }
  }
  return u;
}

SequenceResult check_sequence_lemma(const SequenceCase& c, const std::vector<std::uint64_t>& n_grid) {
  if (!(c.a > 1.0) || !(c.c_drift > 0.0) || c.lambda_coeff < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "need a > 1, c > 0, lambda >= 0");
  }
  SequenceResult res;
  std::vector<std::pair<double, double>> points;
  for (std::uint64_t n : n_grid) {
    const double nd = static_cast<double>(n);
    const double lambda = c.lambda_coeff * std::pow(nd, -c.lambda_power);
    const double u = sequence_iterate(c, n);
    const double scale = std::pow(lambda, 1.0 / c.a) + std::pow(nd, -1.0 / (c.a - 1.0));
    res.n.push_back(n);
    res.u_n.push_back(u);
    res.fitted_constant.push_back(u / scale);
    points.emplace_back(nd, u);
  }
  const auto [lo, hi] = std::minmax_element(res.fitted_constant.begin(), res.fitted_constant.end());
  res.constant_spread = *hi / *lo;
  res.pass = res.constant_spread < 10.0;
  if (points.size() >= 3) res.fitted_exponent = fit_loglog_slope(points).slope;
  return res;
}

bool PropcheckReport::all_pass() const noexcept {
  for (const auto& s : sweeps) {
    if (s.failures != 0) return false;
  }
  for (const auto& [name, r] : sequences) {
    if (!r.pass) return false;
  }
  return true;
}

PropcheckReport run_propcheck_suite(std::uint64_t seed, std::uint64_t cases) {
  PropcheckReport rep;
  rep.seed = seed;
  rep.sweeps.push_back(sweep("check_rsd", 1, seed, cases, [](SplitMix64& rng) {
    const TestDistribution d = random_nonnegative(rng, kMaxAtoms);
    const double a = 1.0 + 3.0 * rng.uniform() + 1e-9;
    const double x = rng.uniform() < 0.1 ? 0.0 : std::exp(-5.0 + 10.0 * rng.uniform());
    return check_rsd(d, a, x);
  }));
  rep.sweeps.push_back(sweep("check_exp_inequality", 2, seed, cases, [](SplitMix64& rng) {
    const TestDistribution d = random_nonnegative(rng, kMaxAtoms);
    const double lambda = rng.uniform() < 0.1 ? 1.0 : rng.uniform();
    const double t = 50.0 * rng.uniform();
    return check_exp_inequality(d, lambda, t);
  }));
  rep.sweeps.push_back(sweep("check_moment_sum", 3, seed, cases, [](SplitMix64& rng) {
    std::vector<TestDistribution> ds(1 + rng.below(4));
    for (auto& d : ds) d = random_nonnegative(rng, kMaxAtoms);
    return check_moment_sum(ds, 1.0 + rng.uniform());
  }));
  rep.sweeps.push_back(sweep("check_von_bahr_esseen", 4, seed, cases, [](SplitMix64& rng) {
    std::vector<TestDistribution> ds(1 + rng.below(4));
    for (auto& d : ds) d = random_centered(rng, kMaxAtoms);
    return check_von_bahr_esseen(ds, 1.0 + rng.uniform());
  }));

  const std::vector<std::pair<std::string, SequenceCase>> table = {
      {"upper a=2 lambda=0", {2.0, 0.5, 0.0, 1.0, SequenceBranch::kUpper, 1.0}},
      {"upper a=2 lambda=1/n", {2.0, 0.5, 1.0, 1.0, SequenceBranch::kUpper, 1.0}},
      {"upper a=1.5 lambda=1/n", {1.5, 0.5, 1.0, 1.0, SequenceBranch::kUpper, 1.0}},
      {"lower a=2 lambda=1/n", {2.0, 0.5, 1.0, 1.0, SequenceBranch::kLower, 1.0}},
      {"lower a=1.5 lambda=2/n", {1.5, 0.5, 2.0, 1.0, SequenceBranch::kLower, 1.0}},
  };
  for (const auto& [name, c] : table) rep.sequences.emplace_back(name, check_sequence_lemma(c));
  return rep;
}

void to_json(nlohmann::json& j, const PropcheckReport& report) {
  nlohmann::json sweeps = nlohmann::json::array();
  for (const auto& s : report.sweeps) {
    sweeps.push_back({{"name", s.name},
                      {"cases", s.cases},
                      {"failures", s.failures},
                      {"max_ratio", s.max_ratio},
                      {"first_failure_seed", s.first_failure_seed}});
  }
  nlohmann::json seqs = nlohmann::json::array();
  for (const auto& [name, r] : report.sequences) {
    seqs.push_back({{"name", name},
                    {"pass", r.pass},
                    {"n", r.n},
                    {"fitted_constant", r.fitted_constant},
                    {"constant_spread", r.constant_spread},
                    {"fitted_exponent", r.fitted_exponent}});
  }
  j = nlohmann::json{{"seed", report.seed},
                     {"all_pass", report.all_pass()},
                     {"sweeps", sweeps},
                     {"sequences", seqs}};
}

}  // namespace rwre
