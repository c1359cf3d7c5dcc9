#pragma once

// Analytical engine: per-tier and overall coverage probability and average
// ergodic rate, with the fully-loaded (no idle mode) variant as a baseline.
//
// Both integrals are evaluated after the substitution u = pi * S_dep * r^2
// with S_dep = sum_j lambda_j C_j^2, which turns the serving-distance weight
// into a unit-rate exponential:
//
//   coverage_i(tau) = int_0^inf exp(-cn u^{alpha/2} - (1 + rho Z(tau)) u) du,
//
// where rho = sum_j lambda~_j C_j^2 / S_dep and
// cn = tau sigma^2 / (P_i (pi S_dep)^{alpha/2}). Deployed densities shape the
// serving-distance law while only the activated densities enter the
// interference exponent; that asymmetry is the whole point of the model.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "hcn/model.hpp"
#include "hcn/quadrature.hpp"

namespace hcn {

struct CoverageReport {
  std::vector<double> per_tier_conditional;  // E_r{P[SINR_i > tau]}
  std::vector<double> per_tier_weighted;     // A_i * conditional
  double overall = 0.0;                      // sum of weighted entries
};

struct RateReport {
  std::vector<double> per_tier_rate;        // bps/Hz, conditional on tier
  std::vector<bool> per_tier_truncated;     // hit the spectral-efficiency cap
  double mean_ue_rate = 0.0;                // bps/Hz, sum A_i R_i
  double area_rate_density = 0.0;           // bps/Hz/km^2, sum lambda~_i R_i
};

struct RateEval {
  double value = 0.0;
  bool truncated = false;  // outer integral stopped at the hard cap
};

// Hard cap on the outer spectral-efficiency integral; far beyond anything a
// single link achieves, and reported via RateEval::truncated when binding.
inline constexpr double kRateTformMax = 40.0;

namespace detail {

struct TierGeometry {
  double s_dep = 0.0;  // sum_j lambda_j C_j^2
  double rho = 0.0;    // sum_j lambda~_j C_j^2 / s_dep
  double cn_scale = 0.0;  // sigma^2 / (P_i (pi s_dep)^{alpha/2})
};

inline TierGeometry tier_geometry(const NetworkParams& p,
                                  const std::vector<TierDerived>& derived,
                                  std::size_t i) {
  check_tier_index(p, i);
  if (derived.size() != p.tiers.size()) {
    throw std::invalid_argument("derived tier list does not match network");
  }
  TierGeometry g;
  double s_act = 0.0;
  for (std::size_t j = 0; j < p.tiers.size(); ++j) {
    const double cj = power_ratio(p, i, j);
    g.s_dep += p.tiers[j].density * cj * cj;
    s_act += derived[j].active_density * cj * cj;
  }
  g.rho = s_act / g.s_dep;
  const double pi = std::numbers::pi;
  g.cn_scale = p.noise_power_mw /
               (p.tiers[i].tx_power_mw * std::pow(pi * g.s_dep, 0.5 * p.alpha));
  return g;
}

// int_0^inf exp(-cn u^{half_alpha} - k u) du, truncated where the exponential
// tail bound exp(-k u)/k drops below the absolute tolerance.
inline double interference_kernel_integral(double cn, double k, double half_alpha,
                                           const QuadratureSpec& quad) {
  const double tail_tol = std::max(quad.absolute_tolerance, 1e-300) * 0.25;
  double upper = -std::log(tail_tol * k) / k;
  upper = std::max(upper, 1e-3 / k);
  const auto integrand = [cn, k, half_alpha](double u) {
    return std::exp(-cn * std::pow(u, half_alpha) - k * u);
  };
  return integrate(integrand, 0.0, upper, quad).value;
}

}  // namespace detail

// Coverage probability of a UE served by tier i at linear SINR threshold tau.
inline double coverage_tier(const NetworkParams& p,
                            const std::vector<TierDerived>& derived,
                            std::size_t i, double tau,
                            const QuadratureSpec& quad = {}) {
  if (!(tau > 0.0)) {
    throw std::domain_error("coverage_tier: threshold must be positive");
  }
  const detail::TierGeometry g = detail::tier_geometry(p, derived, i);
  const double k = 1.0 + g.rho * z_kernel(tau, p.alpha);
  const double cn = tau * g.cn_scale;
  const double v =
      detail::interference_kernel_integral(cn, k, 0.5 * p.alpha, quad);
  return std::clamp(v, 0.0, 1.0);
}

// Coverage assembled over all tiers with the association-probability weights.
inline CoverageReport coverage_overall(const NetworkParams& p,
                                       const std::vector<TierDerived>& derived,
                                       double tau,
                                       const QuadratureSpec& quad = {}) {
  CoverageReport report;
  report.per_tier_conditional.resize(p.tiers.size());
  report.per_tier_weighted.resize(p.tiers.size());
  for (std::size_t i = 0; i < p.tiers.size(); ++i) {
    report.per_tier_conditional[i] = coverage_tier(p, derived, i, tau, quad);
    report.per_tier_weighted[i] =
        derived[i].association_prob * report.per_tier_conditional[i];
    report.overall += report.per_tier_weighted[i];
  }
  return report;
}

// Average ergodic rate (bps/Hz) of a UE served by tier i:
//   R_i = int_0^Tmax inner(t) dt,  inner(t) = coverage kernel at tau = 2^t - 1.
// With sigma^2 = 0 the inner integral collapses to 1 / (1 + rho Z(2^t - 1)).
inline RateEval rate_tier_eval(const NetworkParams& p,
                               const std::vector<TierDerived>& derived,
                               std::size_t i, const QuadratureSpec& quad = {}) {
  const detail::TierGeometry g = detail::tier_geometry(p, derived, i);
  const double half_alpha = 0.5 * p.alpha;
  const bool noiseless = p.noise_power_mw == 0.0;

  const auto inner = [&](double t) {
    const double tau = std::exp2(t) - 1.0;
    const double k = 1.0 + g.rho * z_kernel(tau, p.alpha);
    if (noiseless) {
      return 1.0 / k;
    }
    return detail::interference_kernel_integral(tau * g.cn_scale, k, half_alpha,
                                                quad);
  };

  // The integrand decreases in t; stop where it falls below the cutoff and
  // report when the hard cap binds instead.
  const double cutoff = std::max(quad.absolute_tolerance, 1e-13);
  double t_end = kRateTformMax;
  bool truncated = true;
  for (double t = 5.0; t <= kRateTformMax; t += 5.0) {
    if (inner(t) < cutoff) {
      t_end = t;
      truncated = false;
      break;
    }
  }

  RateEval eval;
  eval.value = integrate(inner, 0.0, t_end, quad).value;
  eval.truncated = truncated;
  return eval;
}

inline double rate_tier(const NetworkParams& p,
                        const std::vector<TierDerived>& derived, std::size_t i,
                        const QuadratureSpec& quad = {}) {
  return rate_tier_eval(p, derived, i, quad).value;
}

// Mean UE rate (association-weighted) and area rate density
// (activated-density weighted aggregate).
inline RateReport rate_overall(const NetworkParams& p,
                               const std::vector<TierDerived>& derived,
                               const QuadratureSpec& quad = {}) {
  RateReport report;
  report.per_tier_rate.resize(p.tiers.size());
  report.per_tier_truncated.resize(p.tiers.size());
  for (std::size_t i = 0; i < p.tiers.size(); ++i) {
    const RateEval eval = rate_tier_eval(p, derived, i, quad);
    report.per_tier_rate[i] = eval.value;
    report.per_tier_truncated[i] = eval.truncated;
    report.mean_ue_rate += derived[i].association_prob * eval.value;
    report.area_rate_density += derived[i].active_density * eval.value;
  }
  return report;
}

// Fully-loaded baselines: identical computation with every BS transmitting.
inline CoverageReport baseline_coverage(const NetworkParams& p, double tau,
                                        const QuadratureSpec& quad = {}) {
  return coverage_overall(p, fully_loaded_tiers(p), tau, quad);
}

inline RateReport baseline_rate(const NetworkParams& p,
                                const QuadratureSpec& quad = {}) {
  return rate_overall(p, fully_loaded_tiers(p), quad);
}

}  // namespace hcn
