// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <random>

#include "doctest.h"
#include "errors.hpp"
#include "oracles.hpp"
#include "rwre/exponents.hpp"

using namespace rwre;
using namespace rwre::testing;

namespace {

/// Random law with 2..4 atoms in [0.05, 3] and b in {2, 3}.
EnvSpec random_spec(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> val(0.05, 3.0);
  std::uniform_real_distribution<double> w(0.05, 1.0);
  const int b = 2 + static_cast<int>(rng() % 2);
  const int k = 2 + static_cast<int>(rng() % 3);
  std::vector<Atom> atoms(k);
  double total = 0.0;
  for (auto& at : atoms) {
    at.value = val(rng);
    at.prob = w(rng);
    total += at.prob;
  }
  for (auto& at : atoms) at.prob /= total;
  double acc = 0.0;
  for (int i = 0; i + 1 < k; ++i) acc += atoms[i].prob;
  atoms.back().prob = 1.0 - acc;
  return make_env_spec(b, atoms);
}

/// Two-atom b=2 law with E A = E A^2 = 1/2; the small atom is y in (0, 1/2).
EnvSpec kappa_two_spec(double y) {
  const double x = (0.5 - y * y) / (0.5 - y) - y;
  const double p = (0.5 - y) / (x - y);
  return make_env_spec(2, {{x, p}, {y, 1.0 - p}});
}

int sign_tol(double v, double tol) { return v > tol ? 1 : (v < -tol ? -1 : 0); }

}  // namespace

TEST_CASE("moment_transform examples") {
  CHECK(moment_transform(family_f1(), 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(moment_transform(family_f3(), 0.0) == 1.0);
  CHECK(moment_transform(family_f2(), 2.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(thrown_code([] { moment_transform(family_f1(), -0.1); }) == ErrorCode::kNegativeT);
  // Large t must not overflow through the log-sum-exp path.
  CHECK(std::isfinite(log_moment(family_f5(), 5000.0)));
  CHECK(log_moment(family_f5(), 5000.0) == doctest::Approx(5000 * std::log(2.0) + std::log(0.5)));
}

TEST_CASE("psi'(1) examples") {
  CHECK(psi_prime_at_one(family_f1()) == doctest::Approx(-0.5623).epsilon(1e-4));
  CHECK(psi_prime_at_one(make_env_spec(2, {{1.0, 1.0}})) == 0.0);
  const double f5 = std::log(2.0) * (2.0 - 0.5) / 2.0 / 1.25;
  CHECK(psi_prime_at_one(family_f5()) == doctest::Approx(f5).epsilon(1e-14));
}

TEST_CASE("compute_p examples") {
  CHECK(compute_p(family_f1()) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(compute_p(family_f5()) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(compute_p(family_f4()) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("compute_p agrees with a dense grid") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 100; ++k) {
    const EnvSpec s = random_spec(rng);
    CHECK(std::abs(compute_p(s) - grid_min_moment(s, 0.0, 1.0, 100'001)) < 1e-8);
  }
}

TEST_CASE("psi is convex") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> t(0.0, 20.0);
  for (int k = 0; k < 200; ++k) {
    const EnvSpec s = random_spec(rng);
    for (int j = 0; j < 20; ++j) {
      double t1 = t(rng), t2 = t(rng), t3 = t(rng);
      if (t1 > t2) std::swap(t1, t2);
      if (t2 > t3) std::swap(t2, t3);
      if (t1 > t2) std::swap(t1, t2);
      if (t3 - t1 < 1e-9) continue;
      const double w = (t3 - t2) / (t3 - t1);
      const double chord = w * log_moment(s, t1) + (1 - w) * log_moment(s, t3);
      CHECK(log_moment(s, t2) <= chord + 1e-9);
    }
  }
}

TEST_CASE("rho examples") {
  const EnvSpec f1 = family_f1();
  const RBounds rb = compute_r_bounds(f1);
  CHECK(rho(f1, rb.r_lo) == 1.0);
  CHECK(rho(f1, 0.3) == 1.0);
  CHECK(rho(f1, 0.75) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(rho(f1, 0.8) == 0.0);
  const double v = rho(f1, 0.6);
  CHECK(v > 0.5);
  CHECK(v < 1.0);
  const double grid = grid_rho(f1, 0.6, 200.0, 200'001);
  CHECK(v <= grid + 1e-12);
  CHECK(v >= grid - 1e-8);
  CHECK(thrown_code([&] { rho(f1, 0.0); }) == ErrorCode::kNonpositiveR);
  CHECK(thrown_code([&] { rho(f1, -1.0); }) == ErrorCode::kNonpositiveR);
}

TEST_CASE("rho is non-increasing and 1 below r_lo") {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 50; ++k) {
    const EnvSpec s = random_spec(rng);
    const RBounds rb = compute_r_bounds(s);
    double prev = 1.0;
    for (int i = 1; i <= 400; ++i) {
      const double r = rb.theta_ess * 1.05 * i / 400.0;
      const double v = rho(s, r);
      if (r <= rb.r_lo) CHECK(v == 1.0);
      CHECK(v <= prev + 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("r bounds examples") {
  const RBounds f1 = compute_r_bounds(family_f1());
  CHECK(f1.r_lo == doctest::Approx(std::sqrt(3.0) / 4.0).epsilon(1e-14));
  CHECK(f1.theta_ess == 0.75);

  const RBounds one = compute_r_bounds(make_env_spec(2, {{0.3, 1.0}}));
  CHECK(one.r_lo == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(one.theta_ess == 0.3);

  const EnvSpec f4 = family_f4();
  const RBounds rb = compute_r_bounds(f4);
  CHECK(rb.r_lo == doctest::Approx(std::sqrt(0.08)).epsilon(1e-14));
  CHECK_FALSE(rb.r_hi_at_theta);
  // Bisection of the grid oracle for rho <= 1/2.
  double lo = rb.r_lo, hi = rb.theta_ess;
  for (int it = 0; it < 40; ++it) {
    const double mid = 0.5 * (lo + hi);
    (grid_rho(f4, mid, 200.0, 20'001) <= 0.5 ? hi : lo) = mid;
  }
  CHECK(rb.r_hi == doctest::Approx(hi).epsilon(1e-6));
  CHECK(rho(f4, rb.r_hi) == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("heavy top atom puts r_hi at Theta with a flag") {
  const EnvSpec s = make_env_spec(2, {{0.2, 0.4}, {0.9, 0.6}});
  const RBounds rb = compute_r_bounds(s);
  CHECK(rb.r_hi_at_theta);
  CHECK(rb.r_hi == 0.9);
  CHECK(classify_regime(s).r_hi_at_theta);
}

TEST_CASE("compute_q examples") {
  CHECK(compute_q(family_f1()) == doctest::Approx(0.5).epsilon(1e-8));
  const EnvSpec f4 = family_f4();
  const double q = compute_q(f4);
  const RBounds rb = compute_r_bounds(f4);
  CHECK(q > rb.r_lo);
  CHECK(q < 0.5);
  CHECK(q * f4.b() < 1.0);
  CHECK(compute_q(make_env_spec(2, {{0.3, 1.0}})) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("compute_q is the supremum of r rho(r) on a grid") {
  std::mt19937_64 rng(14);
  for (int k = 0; k < 30; ++k) {
    const EnvSpec s = random_spec(rng);
    const RBounds rb = compute_r_bounds(s);
    const double q = compute_q(s, rb);
    double best = 0.0;
    for (int i = 0; i <= 2000; ++i) {
      const double r = rb.r_lo + (rb.r_hi - rb.r_lo) * i / 2000.0;
      best = std::max(best, r * rho(s, r));
    }
    CHECK(q >= best - 1e-9);
    CHECK(q <= best + 1e-3 * std::max(1.0, q));
  }
}

TEST_CASE("compute_kappa examples") {
  CHECK(compute_kappa(family_f1()).infinite());
  CHECK(compute_kappa(family_f4()).infinite());
  CHECK(compute_kappa(family_f2()).value == doctest::Approx(2.0).epsilon(1e-9));
  const double k3 = compute_kappa(family_f3()).value;
  CHECK(k3 > 1.0);
  CHECK(k3 < 2.0);
  CHECK(std::abs(k3 - bisection_kappa(family_f3())) < 1e-8);
  CHECK(moment_transform(family_f3(), 2.0) == doctest::Approx(0.647).epsilon(1e-3));
}

TEST_CASE("constructed laws with E A^2 = 1/b have kappa 2") {
  for (double y : {0.05, 0.1, 0.2, 1.0 / 3.0, 0.4, 0.45}) {
    const EnvSpec s = kappa_two_spec(y);
    CHECK(s.mean() == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(std::abs(compute_kappa(s).value - 2.0) < 1e-8);
  }
}

TEST_CASE("kappa > 2 iff E A^2 < 1/b on critical laws") {
  std::mt19937_64 rng(15);
  int checked = 0;
  for (int k = 0; k < 400 && checked < 150; ++k) {
    const EnvSpec raw = random_spec(rng);
    std::vector<Atom> atoms = raw.atoms();
    EnvSpec s = raw;
    try {
      s = make_critical_spec(raw.b(), atoms);
    } catch (const Error&) {
      continue;
    }
    const double m2 = moment_transform(s, 2.0);
    if (std::abs(m2 - 1.0 / s.b()) < 1e-9) continue;
    const KappaResult kr = compute_kappa(s);
    CHECK((kr.value > 2.0) == (m2 < 1.0 / s.b()));
    if (!kr.infinite()) CHECK(std::abs(kr.value - bisection_kappa(s, 600.0)) < 1e-7);
    ++checked;
  }
  CHECK(checked >= 50);
}

TEST_CASE("compute_nu") {
  CHECK(compute_nu(INFINITY) == 0.5);
  CHECK(compute_nu(2.0) == 0.5);
  CHECK(compute_nu(1.5) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(compute_nu(7.0) == 0.5);
  CHECK(thrown_code([] { compute_nu(1.0); }) == ErrorCode::kKappaOutOfRange);
  CHECK(thrown_code([] { compute_nu(0.5); }) == ErrorCode::kKappaOutOfRange);
}

TEST_CASE("classify_regime on the reference families") {
  const auto f1 = classify_regime(family_f1());
  CHECK(f1.regime == Regime::kNullRecurrentSubdiffusive);
  CHECK(f1.nu == 0.5);
  CHECK(std::isinf(f1.kappa));
  CHECK(classify_regime(family_f2()).regime == Regime::kNullRecurrentSubdiffusive);
  const auto f3 = classify_regime(family_f3());
  CHECK(f3.regime == Regime::kNullRecurrentSubdiffusive);
  CHECK(f3.nu == doctest::Approx((f3.kappa - 1) / f3.kappa));
  CHECK(classify_regime(family_f4()).regime == Regime::kPositiveRecurrent);
  CHECK(classify_regime(family_f5()).regime == Regime::kTransient);
}

TEST_CASE("critical law with psi'(1) > 0 is CRITICAL_OTHER") {
  // A = c B with B in {0.1 (0.7), 10 (0.3)}; bisect c until inf_{[0,1]} E(A^t) = 1/2.
  auto spec = [](double c) { return make_env_spec(2, {{0.1 * c, 0.7}, {10.0 * c, 0.3}}); };
  double lo = 0.01, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (compute_p(spec(mid)) < 0.5 ? lo : hi) = mid;
  }
  const EnvSpec s = spec(hi);
  CHECK(std::abs(grid_min_moment(s, 0.0, 1.0, 100'001) - 0.5) < 1e-8);
  CHECK(psi_prime_at_one(s) > 0.0);
  const ExponentReport r = classify_regime(s);
  CHECK(std::abs(r.p - 0.5) < 1e-9);
  CHECK(r.regime == Regime::kCriticalOther);
}

TEST_CASE("report invariants and the p/q trichotomy") {
  std::mt19937_64 rng(16);
  for (int k = 0; k < 200; ++k) {
    const EnvSpec s = random_spec(rng);
    const ExponentReport r = classify_regime(s);
    CHECK(r.p > 0.0);
    CHECK(r.p <= 1.0 + 1e-15);
    CHECK(r.r_lo <= r.r_hi);
    CHECK(r.q >= r.r_lo - 1e-12);
    const double inv_b = 1.0 / s.b();
    CHECK(sign_tol(r.q - inv_b, 1e-7) == sign_tol(r.p - inv_b, 1e-7));
  }
}

TEST_CASE("report JSON") {
  nlohmann::json j = classify_regime(family_f1());
  CHECK(j.at("kappa") == "inf");
  CHECK(j.at("regime") == "NULL_RECURRENT_SUBDIFFUSIVE");
  for (const char* key : {"p", "kappa", "nu", "psi1_prime", "r_lo", "r_hi", "theta_ess", "q", "regime"}) {
    CHECK(j.contains(key));
  }
  nlohmann::json j2 = classify_regime(family_f2());
  CHECK(j2.at("kappa").get<double>() == doctest::Approx(2.0));
}
