// SPDX-License-Identifier: Apache-2.0
//
// Regime exponents of the environment law, all computed from the exact
// moment transform t -> E(A^t) of a finite atom law.
#pragma once

#include <string>

#include "json.hpp"
#include "rwre/environment.hpp"

namespace rwre {

enum class Regime {
  kTransient,
  kPositiveRecurrent,
  kNullRecurrentSubdiffusive,
  kCriticalOther,
};

std::string to_string(Regime regime);

inline constexpr double kCriticalTol = 1e-9;
inline constexpr double kKappaCap = 512.0;

/// E(A^t). Throws NEGATIVE_T for t < 0.
double moment_transform(const EnvSpec& spec, double t);
/// psi(t) = log E(A^t), evaluated by log-sum-exp so large t cannot overflow.
double log_moment(const EnvSpec& spec, double t);
/// psi'(t) = E(A^t log A) / E(A^t).
double log_moment_derivative(const EnvSpec& spec, double t);

double psi_prime_at_one(const EnvSpec& spec);

/// p = inf_{t in [0,1]} E(A^t).
double compute_p(const EnvSpec& spec);

/// rho(r) = inf_{t >= 0} r^{-t} E(A^t). Throws NONPOSITIVE_R for r <= 0.
double rho(const EnvSpec& spec, double r);

struct RBounds {
  double r_lo = 0.0;       ///< log r_lo = E log A
  double r_hi = 0.0;       ///< inf{ r : rho(r) <= 1/b }
  double theta_ess = 0.0;  ///< ess sup A
  /// rho stays above 1/b on (0, Theta]: r_hi is Theta as an unattained infimum.
  bool r_hi_at_theta = false;
};

RBounds compute_r_bounds(const EnvSpec& spec);

/// q = sup_{r in [r_lo, r_hi]} r rho(r).
double compute_q(const EnvSpec& spec);
double compute_q(const EnvSpec& spec, const RBounds& bounds);

struct KappaResult {
  double value = 0.0;   ///< +inf when no root exists
  bool capped = false;  ///< no sign change found below kKappaCap
  bool infinite() const noexcept;
};

/// kappa = inf{ t > 1 : E(A^t) = 1/b }.
KappaResult compute_kappa(const EnvSpec& spec);

/// nu = 1 - 1/min(kappa, 2). Throws KAPPA_OUT_OF_RANGE for kappa <= 1.
double compute_nu(double kappa);

struct ExponentReport {
  double p = 0.0;
  double kappa = 0.0;
  double nu = 0.0;
  double psi1_prime = 0.0;
  double r_lo = 0.0;
  double r_hi = 0.0;
  double theta_ess = 0.0;
  double q = 0.0;
  Regime regime = Regime::kCriticalOther;
  bool r_hi_at_theta = false;
  bool kappa_capped = false;
};

ExponentReport classify_regime(const EnvSpec& spec);

/// Flat object with the report's field names; an infinite kappa is "inf".
void to_json(nlohmann::json& j, const ExponentReport& report);

}  // namespace rwre
