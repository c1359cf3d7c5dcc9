#pragma once

// Scenario parameters and the per-tier load model: Voronoi cell-size PDF,
// per-cell UE-count PMF (Poisson mixed over a gamma cell size, i.e. negative
// binomial), tier association probability, idle probability and the density
// of base stations that remain active.
//
// Units: distances in km, densities per km^2, powers in linear milliwatts.
// The pathloss r^{-alpha} takes r in km with no reference-distance constant,
// so a nonzero noise power is only meaningful relative to that convention.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "hcn/specfun.hpp"

namespace hcn {

struct TierParams {
  double tx_power_mw = 0.0;  // linear milliwatts
  double density = 0.0;      // BSs per km^2
  std::string label;
};

struct NetworkParams {
  std::vector<TierParams> tiers;
  double alpha = 3.75;         // path loss exponent, must exceed 2
  double ue_density = 0.0;     // UEs per km^2
  double noise_power_mw = 0.0; // sigma^2; zero = interference-limited
  double shape_q = 3.5;        // cell-size gamma shape
  double rate_b = 3.5;         // cell-size gamma rate constant

  std::size_t tier_count() const { return tiers.size(); }

  void validate() const {
    if (tiers.empty()) {
      throw std::invalid_argument("network: at least one tier is required");
    }
    for (std::size_t i = 0; i < tiers.size(); ++i) {
      if (!(tiers[i].tx_power_mw > 0.0)) {
        throw std::invalid_argument("network: tier " + std::to_string(i + 1) +
                                    " transmit power must be positive");
      }
      if (!(tiers[i].density > 0.0)) {
        throw std::invalid_argument("network: tier " + std::to_string(i + 1) +
                                    " density must be positive");
      }
    }
    if (!(alpha > 2.0)) {
      throw std::invalid_argument("network: path loss exponent must exceed 2");
    }
    if (!(ue_density > 0.0)) {
      throw std::invalid_argument("network: UE density must be positive");
    }
    if (!(noise_power_mw >= 0.0)) {
      throw std::invalid_argument("network: noise power must be nonnegative");
    }
    if (!(shape_q > 0.0) || !(rate_b > 0.0)) {
      throw std::invalid_argument("network: load-model constants must be positive");
    }
  }
};

// Per-tier derived quantities.
struct TierDerived {
  double association_prob = 0.0;  // A_i
  double idle_prob = 0.0;         // probability a tier-i BS serves no UE
  double active_density = 0.0;    // density of BSs with at least one UE
};

namespace detail {

inline void check_tier_index(const NetworkParams& p, std::size_t i) {
  if (i >= p.tiers.size()) {
    throw std::out_of_range("tier index " + std::to_string(i) + " out of range");
  }
}

}  // namespace detail

// C_j = (P_j / P_i)^{1/alpha}; equals 1 exactly for j == i.
inline double power_ratio(const NetworkParams& p, std::size_t i, std::size_t j) {
  detail::check_tier_index(p, i);
  detail::check_tier_index(p, j);
  return std::pow(p.tiers[j].tx_power_mw / p.tiers[i].tx_power_mw, 1.0 / p.alpha);
}

// sum_j lambda_j C_j^2 with C_j taken relative to tier i.
inline double weighted_density_sum(const NetworkParams& p, std::size_t i) {
  double sum = 0.0;
  for (std::size_t j = 0; j < p.tiers.size(); ++j) {
    const double cj = power_ratio(p, i, j);
    sum += p.tiers[j].density * cj * cj;
  }
  return sum;
}

// Probability that the strongest-average-power server of a random UE belongs
// to tier i: A_i = lambda_i / sum_j lambda_j C_j^2.
inline double association_probability(const NetworkParams& p, std::size_t i) {
  detail::check_tier_index(p, i);
  return p.tiers[i].density / weighted_density_sum(p, i);
}

// Gamma approximation of the Voronoi cell area for tier i:
// f(x) = (b lambda_i)^q x^{q-1} exp(-b lambda_i x) / Gamma(q).
inline double cell_size_pdf(const NetworkParams& p, std::size_t i, double x) {
  detail::check_tier_index(p, i);
  if (!(x > 0.0)) {
    throw std::domain_error("cell_size_pdf: cell area must be positive");
  }
  const double rate = p.rate_b * p.tiers[i].density;
  const double q = p.shape_q;
  return std::exp(q * std::log(rate) + (q - 1.0) * std::log(x) - rate * x -
                  log_gamma(q));
}

// P[N_i = n]: negative binomial obtained by mixing a Poisson(lambda_u x) count
// over the gamma cell size. Evaluated in log space; Gamma(n + q) would
// overflow for n around 170.
inline double ue_count_pmf(const NetworkParams& p, std::size_t i, long long n) {
  detail::check_tier_index(p, i);
  if (n < 0) {
    throw std::domain_error("ue_count_pmf: count must be nonnegative");
  }
  const double q = p.shape_q;
  const double blam = p.rate_b * p.tiers[i].density;
  const double total = p.ue_density + blam;
  const double nd = static_cast<double>(n);
  const double log_pmf = log_gamma(nd + q) - log_gamma(nd + 1.0) - log_gamma(q) +
                         nd * std::log(p.ue_density / total) +
                         q * std::log(blam / total);
  return std::exp(log_pmf);
}

// Closed form of sum_n P[N_i = n] (1 - A_i)^n: the negative-binomial
// probability generating function evaluated at 1 - A_i, which collapses to
// [b lambda_i / (b lambda_i + lambda_u A_i)]^q.
inline double idle_probability(const NetworkParams& p, std::size_t i) {
  detail::check_tier_index(p, i);
  const double a = association_probability(p, i);
  const double blam = p.rate_b * p.tiers[i].density;
  return std::pow(blam / (blam + p.ue_density * a), p.shape_q);
}

// Same quantity by direct series summation; the cross-check route for the
// closed form. Terms follow the recurrence
//   t_0 = (b lambda_i / (lambda_u + b lambda_i))^q,
//   t_{n+1} = t_n * (n + q) / (n + 1) * s,  s = (1 - A_i) lambda_u / (lambda_u + b lambda_i),
// and summation stops once the geometric tail bound drops below tail_tol.
inline double idle_probability_series(const NetworkParams& p, std::size_t i,
                                      double tail_tol = 1e-12) {
  detail::check_tier_index(p, i);
  const double a = association_probability(p, i);
  const double q = p.shape_q;
  const double blam = p.rate_b * p.tiers[i].density;
  const double total = p.ue_density + blam;
  const double s = (1.0 - a) * p.ue_density / total;

  double term = std::pow(blam / total, q);
  double sum = 0.0;
  for (long long n = 0;; ++n) {
    sum += term;
    const double ratio = (static_cast<double>(n) + q) / (static_cast<double>(n) + 1.0) * s;
    if (ratio < 1.0) {
      const double tail_bound = term * ratio / (1.0 - ratio);
      if (tail_bound < tail_tol) {
        break;
      }
    }
    if (n > 100000000LL) {
      throw NumericalError("idle_probability_series: tail bound not reached", term);
    }
    term *= ratio;
  }
  return sum;
}

// Density of tier-i BSs with at least one associated UE.
inline double active_density(const NetworkParams& p, std::size_t i) {
  detail::check_tier_index(p, i);
  return p.tiers[i].density * (1.0 - idle_probability(p, i));
}

// PDF of the distance between a random UE and its serving tier-i BS:
// f(r) = (2 pi lambda_i r / A_i) exp(-pi sum_j lambda_j C_j^2 r^2).
inline double serving_distance_pdf(const NetworkParams& p, std::size_t i, double r) {
  detail::check_tier_index(p, i);
  if (!(r >= 0.0)) {
    throw std::domain_error("serving_distance_pdf: distance must be nonnegative");
  }
  const double pi = std::numbers::pi;
  const double sdep = weighted_density_sum(p, i);
  const double a = p.tiers[i].density / sdep;
  return 2.0 * pi * p.tiers[i].density * r / a * std::exp(-pi * sdep * r * r);
}

// All per-tier derived quantities for a scenario.
inline std::vector<TierDerived> derive_tiers(const NetworkParams& p) {
  p.validate();
  std::vector<TierDerived> out(p.tiers.size());
  for (std::size_t i = 0; i < p.tiers.size(); ++i) {
    out[i].association_prob = association_probability(p, i);
    out[i].idle_prob = idle_probability(p, i);
    out[i].active_density = p.tiers[i].density * (1.0 - out[i].idle_prob);
  }
  return out;
}

// Derived quantities with idle mode disabled: every BS transmits. This is the
// infinite-UE baseline used for comparison runs.
inline std::vector<TierDerived> fully_loaded_tiers(const NetworkParams& p) {
  p.validate();
  std::vector<TierDerived> out(p.tiers.size());
  for (std::size_t i = 0; i < p.tiers.size(); ++i) {
    out[i].association_prob = association_probability(p, i);
    out[i].idle_prob = 0.0;
    out[i].active_density = p.tiers[i].density;
  }
  return out;
}

}  // namespace hcn
