// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "doctest.h"
#include "errors.hpp"
#include "rwre/propcheck.hpp"

using namespace rwre;
using rwre::testing::thrown_code;

TEST_CASE("within_bound tolerance") {
  CHECK(within_bound(1.0, 1.0));
  CHECK(within_bound(1.0 + 5e-13, 1.0));
  CHECK_FALSE(within_bound(1.0 + 1e-11, 1.0));
  CHECK(within_bound(1e6 * (1 + 5e-13), 1e6));
  CHECK_FALSE(within_bound(1e6 * (1 + 1e-11), 1e6));
  CHECK(within_bound(1e-13, 0.0));
}

TEST_CASE("check_rsd examples") {
  const CheckResult c = check_rsd({{{2.0, 1.0}}}, 1.7, 0.3);
  CHECK(c.pass);
  CHECK(c.lhs == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(c.rhs == doctest::Approx(1.0).epsilon(1e-15));

  const CheckResult r = check_rsd({{{1.0, 0.5}, {3.0, 0.5}}}, 2.0, 1.0);
  CHECK(r.pass);
  CHECK(r.lhs == doctest::Approx(26.0 / 25.0).epsilon(1e-15));
  CHECK(r.rhs == doctest::Approx(1.25).epsilon(1e-15));

  CHECK(thrown_code([] { check_rsd({{{0.0, 1.0}}}, 2.0, 1.0); }) == ErrorCode::kZeroMean);
}

TEST_CASE("check_exp_inequality examples") {
  const TestDistribution d{{{0.0, 0.3}, {1.0, 0.3}, {5.0, 0.4}}};
  const CheckResult zero = check_exp_inequality(d, 0.4, 0.0);
  CHECK(zero.pass);
  CHECK(zero.lhs == 1.0);
  CHECK(zero.rhs == 1.0);

  const CheckResult one = check_exp_inequality(d, 1.0, 2.5);
  CHECK(one.pass);
  CHECK(one.lhs == doctest::Approx(std::exp(-2.5)).epsilon(1e-14));
  CHECK(one.rhs >= std::exp(-2.5));

  CHECK(thrown_code([] { check_exp_inequality({{{0.0, 1.0}}}, 0.5, 1.0); }) == ErrorCode::kZeroMean);
}

TEST_CASE("check_moment_sum examples") {
  const TestDistribution d{{{0.5, 0.5}, {2.0, 0.5}}};
  const CheckResult k1 = check_moment_sum({d}, 1.5);
  CHECK(k1.pass);
  CHECK(k1.lhs == doctest::Approx(k1.rhs).epsilon(1e-15));

  const double c1 = 0.7, c2 = 2.2, a = 1.3;
  const CheckResult k2 = check_moment_sum({{{{c1, 1.0}}}, {{{c2, 1.0}}}}, a);
  CHECK(k2.pass);
  CHECK(k2.lhs == doctest::Approx(std::pow(c1 + c2, a)).epsilon(1e-15));
  CHECK(k2.rhs ==
        doctest::Approx(std::pow(c1, a) + std::pow(c2, a) + std::pow(c1 + c2, a)).epsilon(1e-15));

  // Three components enumerated by hand.
  const TestDistribution x{{{0.0, 0.5}, {1.0, 0.5}}};
  const TestDistribution y{{{1.0, 0.25}, {3.0, 0.75}}};
  const TestDistribution z{{{2.0, 1.0}}};
  double lhs = 0.0;
  for (const auto& [xv, xp] : x.atoms)
    for (const auto& [yv, yp] : y.atoms) lhs += xp * yp * std::pow(xv + yv + 2.0, 1.5);
  CHECK(check_moment_sum({x, y, z}, 1.5).lhs == doctest::Approx(lhs).epsilon(1e-14));

  CHECK(thrown_code([&] { check_moment_sum(std::vector<TestDistribution>(7, d), 1.5); }) ==
        ErrorCode::kTooManyComponents);
  const TestDistribution six{{{1, 0.2}, {2, 0.2}, {3, 0.2}, {4, 0.1}, {5, 0.1}, {6, 0.2}}};
  CHECK(thrown_code([&] { check_moment_sum({six}, 1.5); }) == ErrorCode::kTooManyComponents);
}

TEST_CASE("check_von_bahr_esseen examples") {
  const TestDistribution rad{{{-1.0, 0.5}, {1.0, 0.5}}};
  const CheckResult k1 = check_von_bahr_esseen({rad}, 1.5);
  CHECK(k1.pass);
  CHECK(k1.lhs == doctest::Approx(1.0));
  CHECK(k1.rhs == doctest::Approx(2.0));

  const CheckResult k2 = check_von_bahr_esseen({rad, rad}, 2.0);
  CHECK(k2.pass);
  CHECK(k2.lhs == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(k2.rhs == doctest::Approx(4.0).epsilon(1e-15));

  CHECK(thrown_code([] { check_von_bahr_esseen({{{{1.0, 0.5}, {2.0, 0.5}}}}, 1.5); }) ==
        ErrorCode::kNotCentered);
}

TEST_CASE("sequence recursion without drift input") {
  const SequenceCase c{2.0, 0.5, 0.0, 1.0, SequenceBranch::kUpper, 1.0};
  const SequenceResult r = check_sequence_lemma(c);
  CHECK(r.pass);
  // u_{j+1} = u_j - c u_j^2 gives n u_n -> 1/c.
  CHECK(r.u_n.back() * r.n.back() == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(r.fitted_exponent == doctest::Approx(-1.0).epsilon(1e-2));
}

TEST_CASE("sequence recursion with lambda_n = 1/n") {
  const SequenceResult r = check_sequence_lemma({2.0, 0.5, 1.0, 1.0, SequenceBranch::kUpper, 1.0});
  CHECK(r.pass);
  CHECK(r.fitted_exponent >= -0.55);
  CHECK(r.fitted_exponent <= -0.45);
  const SequenceResult low = check_sequence_lemma({2.0, 0.5, 1.0, 1.0, SequenceBranch::kLower, 1.0});
  CHECK(low.pass);
  CHECK(low.constant_spread < 10.0);
  for (double cst : low.fitted_constant) CHECK(cst > 0.0);
}

TEST_CASE("sequence recursion divergence") {
  const SequenceCase c{2.0, 5.0, 0.0, 1.0, SequenceBranch::kUpper, 1.0};
  CHECK(thrown_code([&] { sequence_iterate(c, 10); }) == ErrorCode::kDiverged);
  CHECK(sequence_iterate({2.0, 0.5, 0.0, 1.0, SequenceBranch::kUpper, 1.0}, 1) == 1.0);
}

TEST_CASE("randomized suite passes and is reproducible") {
  const PropcheckReport a = run_propcheck_suite(42, 2000);
  CHECK(a.all_pass());
  REQUIRE(a.sweeps.size() == 4);
  for (const auto& s : a.sweeps) {
    CHECK(s.cases == 2000);
    CHECK(s.failures == 0);
    CHECK(s.max_ratio <= 1.0 + 1e-12);
  }
  CHECK(a.sequences.size() == 5);
  const PropcheckReport b = run_propcheck_suite(42, 2000);
  for (std::size_t i = 0; i < a.sweeps.size(); ++i) CHECK(a.sweeps[i].max_ratio == b.sweeps[i].max_ratio);
  nlohmann::json j = a;
  CHECK(j.at("all_pass") == true);
  CHECK(j.at("sweeps").size() == 4);
}
