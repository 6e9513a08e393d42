// SPDX-License-Identifier: Apache-2.0
#include "rwre/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "rwre/error.hpp"

namespace rwre {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// psi and its first two derivatives at t, from exponentially tilted weights.
struct PsiJet {
  double value;
  double d1;
  double d2;
};

PsiJet psi_jet(const EnvSpec& spec, double t) {
  double top = -kInf;
  for (const auto& atom : spec.atoms()) top = std::max(top, t * std::log(atom.value));
  double w_sum = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  for (const auto& atom : spec.atoms()) {
    const double l = std::log(atom.value);
    const double w = atom.prob * std::exp(t * l - top);
    w_sum += w;
    m1 += w * l;
    m2 += w * l * l;
  }
  m1 /= w_sum;
  m2 /= w_sum;
  return {top + std::log(w_sum), m1, std::max(0.0, m2 - m1 * m1)};
}

// Root of the increasing function psi'(t) - slope on [lo, hi], given a sign
// change. Newton steps are kept inside the shrinking bracket.
double tilted_root(const EnvSpec& spec, double slope, double lo, double hi) {
  double t = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const PsiJet jet = psi_jet(spec, t);
    const double g = jet.d1 - slope;
    if (g == 0.0) return t;
    if (g < 0.0) {
      lo = t;
    } else {
      hi = t;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, hi)) break;
    double next = jet.d2 > 0.0 ? t - g / jet.d2 : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    t = next;
  }
  return t;
}

double top_atom_mass(const EnvSpec& spec) {
  double mass = 0.0;
  for (const auto& atom : spec.atoms()) {
    if (atom.value == spec.a_max()) mass += atom.prob;
  }
  return mass;
}

double log_r_lo(const EnvSpec& spec) {
  double s = 0.0;
  for (const auto& atom : spec.atoms()) s += atom.prob * std::log(atom.value);
  return s;
}

// Root of the monotone function f - level on [lo, hi] by bisection.
template <class F>
double bisect(F f, double level, double lo, double hi, bool increasing) {
  for (int iter = 0; iter < 400; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const bool above = f(mid) >= level;
    if (above == increasing) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::kTransient: return "TRANSIENT";
    case Regime::kPositiveRecurrent: return "POSITIVE_RECURRENT";
    case Regime::kNullRecurrentSubdiffusive: return "NULL_RECURRENT_SUBDIFFUSIVE";
    case Regime::kCriticalOther: return "CRITICAL_OTHER";
  }
  return "UNKNOWN";
}

double moment_transform(const EnvSpec& spec, double t) {
  if (t < 0.0) throw Error(ErrorCode::kNegativeT, "t must be >= 0");
  double s = 0.0;
  for (const auto& atom : spec.atoms()) s += atom.prob * std::pow(atom.value, t);
  return s;
}

double log_moment(const EnvSpec& spec, double t) {
  if (t < 0.0) throw Error(ErrorCode::kNegativeT, "t must be >= 0");
  return psi_jet(spec, t).value;
}

double log_moment_derivative(const EnvSpec& spec, double t) {
  if (t < 0.0) throw Error(ErrorCode::kNegativeT, "t must be >= 0");
  return psi_jet(spec, t).d1;
}

double psi_prime_at_one(const EnvSpec& spec) {
  double num = 0.0;
  double den = 0.0;
  for (const auto& atom : spec.atoms()) {
    num += atom.prob * atom.value * std::log(atom.value);
    den += atom.prob * atom.value;
  }
  return num / den;
}

double compute_p(const EnvSpec& spec) {
  if (log_r_lo(spec) >= 0.0) return 1.0;  // psi'(0) >= 0: infimum at t = 0
  if (psi_prime_at_one(spec) <= 0.0) return moment_transform(spec, 1.0);
  const double t = tilted_root(spec, 0.0, 0.0, 1.0);
  return std::exp(psi_jet(spec, t).value);
}

double rho(const EnvSpec& spec, double r) {
  if (!(r > 0.0)) throw Error(ErrorCode::kNonpositiveR, "r must be > 0");
  const double log_r = std::log(r);
  if (r > spec.a_max()) return 0.0;
  if (r == spec.a_max()) return top_atom_mass(spec);
  if (log_r <= log_r_lo(spec)) return 1.0;
  double hi = 1.0;
  while (psi_jet(spec, hi).d1 <= log_r && hi < 1e12) hi *= 2.0;
  const double t = tilted_root(spec, log_r, 0.0, hi);
  return std::min(1.0, std::exp(psi_jet(spec, t).value - t * log_r));
}

RBounds compute_r_bounds(const EnvSpec& spec) {
  RBounds out;
  out.r_lo = std::exp(log_r_lo(spec));
  out.theta_ess = spec.a_max();
  const double level = 1.0 / spec.b();
  if (top_atom_mass(spec) > level || out.r_lo >= out.theta_ess) {
    out.r_hi = out.theta_ess;
    out.r_hi_at_theta = true;
    return out;
  }
  // rho is continuous and strictly decreasing on [r_lo, Theta) and reaches
  // P(A = Theta) <= 1/b at Theta.
  out.r_hi = bisect([&](double r) { return rho(spec, r); }, level,
                    std::min(out.r_lo, out.theta_ess), out.theta_ess, false);
  return out;
}

double compute_q(const EnvSpec& spec) { return compute_q(spec, compute_r_bounds(spec)); }

double compute_q(const EnvSpec& spec, const RBounds& bounds) {
  if (!(bounds.r_hi > bounds.r_lo)) return bounds.r_lo * rho(spec, bounds.r_lo);

  // log(r rho(r)) is concave in log r, but we still scan a dense grid before
  // refining so that a flat or kinked objective cannot mislead the search.
  constexpr int kGrid = 10001;
  const double s_lo = std::log(bounds.r_lo);
  const double s_hi = std::log(bounds.r_hi);
  auto objective = [&](double s) {
    const double r = std::clamp(std::exp(s), bounds.r_lo, bounds.r_hi);
    return r * rho(spec, r);
  };
  std::vector<double> grid(kGrid);
  int best = 0;
  double best_val = -1.0;
  for (int i = 0; i < kGrid; ++i) {
    grid[i] = s_lo + (s_hi - s_lo) * i / (kGrid - 1);
    if (i == kGrid - 1) grid[i] = s_hi;
    const double v = objective(grid[i]);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  double a = grid[std::max(0, best - 1)];
  double d = grid[std::min(kGrid - 1, best + 1)];
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double b = d - inv_phi * (d - a);
  double c = a + inv_phi * (d - a);
  double fb = objective(b);
  double fc = objective(c);
  for (int iter = 0; iter < 200 && d - a > 1e-14; ++iter) {
    if (fb >= fc) {
      d = c;
      c = b;
      fc = fb;
      b = d - inv_phi * (d - a);
      fb = objective(b);
    } else {
      a = b;
      b = c;
      fb = fc;
      c = a + inv_phi * (d - a);
      fc = objective(c);
    }
  }
  return std::max({best_val, fb, fc});
}

bool KappaResult::infinite() const noexcept { return std::isinf(value); }

KappaResult compute_kappa(const EnvSpec& spec) {
  const double level = -std::log(static_cast<double>(spec.b()));
  auto psi = [&](double t) { return psi_jet(spec, t).value; };

  const PsiJet at_one = psi_jet(spec, 1.0);
  double t_min = 1.0;
  if (at_one.d1 < 0.0) {
    t_min = psi_jet(spec, kKappaCap).d1 <= 0.0 ? kKappaCap
                                                : tilted_root(spec, 0.0, 1.0, kKappaCap);
  }
  const double psi_min = psi(t_min);
  const bool critical_at_one = spec.exact_critical() || std::abs(at_one.value - level) <= 1e-12;

  // First crossing on the decreasing branch (1, t_min].
  if (!critical_at_one && at_one.value > level && t_min > 1.0 && psi_min <= level) {
    return {bisect(psi, level, 1.0, t_min, false), false};
  }
  // Otherwise the first crossing, if any, is on the increasing branch.
  if (psi_min < level) {
    if (spec.a_max() <= 1.0) return {kInf, false};
    if (psi(kKappaCap) < level) return {kInf, true};
    return {bisect(psi, level, t_min, kKappaCap, true), false};
  }
  return {kInf, false};
}

double compute_nu(double kappa) {
  if (!(kappa > 1.0)) throw Error(ErrorCode::kKappaOutOfRange, "kappa must be > 1");
  if (kappa >= 2.0) return 0.5;
  return (kappa - 1.0) / kappa;
}

ExponentReport classify_regime(const EnvSpec& spec) {
  ExponentReport rep;
  rep.p = compute_p(spec);
  rep.psi1_prime = psi_prime_at_one(spec);
  const RBounds bounds = compute_r_bounds(spec);
  rep.r_lo = bounds.r_lo;
  rep.r_hi = bounds.r_hi;
  rep.theta_ess = bounds.theta_ess;
  rep.r_hi_at_theta = bounds.r_hi_at_theta;
  rep.q = compute_q(spec, bounds);
  const KappaResult kappa = compute_kappa(spec);
  rep.kappa = kappa.value;
  rep.kappa_capped = kappa.capped;
  rep.nu = compute_nu(kappa.value);

  const double inv_b = 1.0 / spec.b();
  if (spec.exact_critical() || std::abs(rep.p - inv_b) <= kCriticalTol) {
    rep.regime = rep.psi1_prime < 0.0 ? Regime::kNullRecurrentSubdiffusive : Regime::kCriticalOther;
  } else if (rep.p > inv_b) {
    rep.regime = Regime::kTransient;
  } else {
    rep.regime = Regime::kPositiveRecurrent;
  }
  return rep;
}

void to_json(nlohmann::json& j, const ExponentReport& r) {
  j = nlohmann::json{{"p", r.p},
                     {"kappa", std::isinf(r.kappa) ? nlohmann::json("inf") : nlohmann::json(r.kappa)},
                     {"nu", r.nu},
                     {"psi1_prime", r.psi1_prime},
                     {"r_lo", r.r_lo},
                     {"r_hi", r.r_hi},
                     {"theta_ess", r.theta_ess},
                     {"q", r.q},
                     {"regime", to_string(r.regime)},
                     {"r_hi_at_theta", r.r_hi_at_theta},
                     {"kappa_capped", r.kappa_capped}};
}

}  // namespace rwre
