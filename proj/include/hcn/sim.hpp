#pragma once

// Monte Carlo stochastic-geometry simulator: samples BS/UE Poisson point
// processes on a square window, performs max-average-power association,
// switches off BSs with no associated UE, draws Rayleigh fading, and
// estimates association fractions, idle-mode statistics, coverage and rate.
//
// Determinism contract: all randomness derives from RngStream(seed, trial
// key, role) substreams and per-trial results are reduced in trial order, so
// estimates are bit-identical for any worker count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "hcn/model.hpp"
#include "hcn/rng.hpp"
#include "hcn/spatial.hpp"

namespace hcn {

struct SimConfig {
  double window_side = 4.0;  // km
  int trials = 200;
  int fading_draws = 20;
  std::uint64_t seed = 1;
  BoundaryMode boundary = BoundaryMode::torus;
  double guard_width = 0.5;   // km, used in guard_zone mode
  double probe_margin = 0.0;  // extra edge margin for the probe UE
};

struct EstimateWithCI {
  double mean = std::numeric_limits<double>::quiet_NaN();
  double half_width_95 = 0.0;
  long long samples = 0;
};

struct BsRef {
  int tier = -1;   // 0-based
  int index = -1;  // 0-based within tier
};

struct Deployment {
  double window_side = 0.0;
  BoundaryMode boundary = BoundaryMode::torus;
  std::vector<std::vector<Point2>> bs_positions;  // [tier][k]
  std::vector<Point2> ue_positions;
  std::vector<BsRef> association;             // per UE
  std::vector<std::vector<char>> active_mask; // [tier][k], 1 = serving >= 1 UE
};

// A UE exactly on top of a BS would see infinite received power; distances
// are floored at 1 mm.
inline constexpr double kMinLinkDistanceKm = 1e-9;

inline bool wrap_distances(BoundaryMode mode) {
  return mode == BoundaryMode::torus;
}

// Homogeneous PPP on the window: Poisson count, uniform positions.
inline std::vector<Point2> sample_ppp(double density, double window_side,
                                      RngStream& rng) {
  if (density < 0.0 || !(window_side > 0.0)) {
    throw std::invalid_argument("sample_ppp: invalid density or window");
  }
  const long long count = rng.poisson(density * window_side * window_side);
  std::vector<Point2> points(static_cast<std::size_t>(count));
  for (auto& pt : points) {
    pt.x = rng.uniform(0.0, window_side);
    pt.y = rng.uniform(0.0, window_side);
  }
  return points;
}

// Max-average-power association: P_j d^{-alpha} is maximized by minimizing
// d * P_j^{-1/alpha} over the per-tier nearest BSs. Marks a BS active iff at
// least one UE associates to it.
inline void associate(Deployment& d, const NetworkParams& p) {
  const std::size_t tiers = p.tiers.size();
  if (d.bs_positions.size() != tiers) {
    throw std::invalid_argument("associate: deployment does not match network");
  }
  std::size_t total_bs = 0;
  for (const auto& tier : d.bs_positions) {
    total_bs += tier.size();
  }
  if (total_bs == 0) {
    throw std::invalid_argument("associate: no base stations in any tier");
  }

  const bool wrap = wrap_distances(d.boundary);
  std::vector<NearestGrid> grids;
  grids.reserve(tiers);
  std::vector<double> inv_weight(tiers);  // P_j^{-1/alpha}
  for (std::size_t t = 0; t < tiers; ++t) {
    grids.emplace_back(d.bs_positions[t], d.window_side, wrap);
    inv_weight[t] = std::pow(p.tiers[t].tx_power_mw, -1.0 / p.alpha);
  }

  d.active_mask.assign(tiers, {});
  for (std::size_t t = 0; t < tiers; ++t) {
    d.active_mask[t].assign(d.bs_positions[t].size(), 0);
  }

  d.association.assign(d.ue_positions.size(), BsRef{});
  for (std::size_t u = 0; u < d.ue_positions.size(); ++u) {
    double best_score = std::numeric_limits<double>::infinity();
    BsRef best;
    for (std::size_t t = 0; t < tiers; ++t) {
      if (grids[t].empty()) {
        continue;
      }
      const NearestGrid::Hit hit = grids[t].nearest(d.ue_positions[u]);
      const double score = std::sqrt(hit.dist_sq) * inv_weight[t];
      if (score < best_score) {
        best_score = score;
        best.tier = static_cast<int>(t);
        best.index = hit.index;
      }
    }
    d.association[u] = best;
    d.active_mask[static_cast<std::size_t>(best.tier)]
                 [static_cast<std::size_t>(best.index)] = 1;
  }
}

// Geometry of the probe UE's link: serving power plus the mean received
// power from every interfering BS, in (tier, index) order.
struct ServingLink {
  int serving_tier = -1;
  int serving_index = -1;
  double serving_distance = 0.0;           // km
  double serving_power = 0.0;              // P_i r^{-alpha}
  std::vector<double> interferer_power;    // P_j d^{-alpha}
  std::vector<BsRef> interferer_ids;
};

inline ServingLink build_link(const Deployment& d, const NetworkParams& p,
                              std::size_t ue, bool apply_idle_mask = true) {
  if (ue >= d.ue_positions.size() || d.association.size() != d.ue_positions.size()) {
    throw std::invalid_argument("build_link: UE index out of range");
  }
  const BsRef serving = d.association[ue];
  if (serving.tier < 0) {
    throw std::invalid_argument("build_link: UE has no serving BS");
  }
  const bool wrap = wrap_distances(d.boundary);
  const Point2& upos = d.ue_positions[ue];

  ServingLink link;
  link.serving_tier = serving.tier;
  link.serving_index = serving.index;

  for (std::size_t t = 0; t < d.bs_positions.size(); ++t) {
    const double power = p.tiers[t].tx_power_mw;
    for (std::size_t k = 0; k < d.bs_positions[t].size(); ++k) {
      const bool is_serving =
          static_cast<int>(t) == serving.tier && static_cast<int>(k) == serving.index;
      if (!is_serving && apply_idle_mask && !d.active_mask[t][k]) {
        continue;
      }
      double dist = std::sqrt(distance_sq(upos, d.bs_positions[t][k],
                                          d.window_side, wrap));
      dist = std::max(dist, kMinLinkDistanceKm);
      const double rx = power * std::pow(dist, -p.alpha);
      if (is_serving) {
        link.serving_distance = dist;
        link.serving_power = rx;
      } else {
        link.interferer_power.push_back(rx);
        link.interferer_ids.push_back(
            BsRef{static_cast<int>(t), static_cast<int>(k)});
      }
    }
  }
  return link;
}

// One SINR sample: fresh unit-mean exponential fading on the serving link and
// on every interferer.
inline double sinr_draw(const ServingLink& link, double noise_mw,
                        RngStream& fading) {
  const double signal = link.serving_power * fading.exponential();
  double interference = 0.0;
  for (const double w : link.interferer_power) {
    interference += w * fading.exponential();
  }
  return signal / (interference + noise_mw);
}

inline double measure_sinr(const Deployment& d, const NetworkParams& p,
                           std::size_t ue, RngStream& fading,
                           bool apply_idle_mask = true) {
  return sinr_draw(build_link(d, p, ue, apply_idle_mask), p.noise_power_mw,
                   fading);
}

// Debug variant with fading pinned to its unit mean on every link; the SINR
// becomes a deterministic function of the geometry.
inline double sinr_no_fading(const ServingLink& link, double noise_mw) {
  double interference = 0.0;
  for (const double w : link.interferer_power) {
    interference += w;
  }
  return link.serving_power / (interference + noise_mw);
}

namespace detail {

inline constexpr int kMaxTrialAttempts = 1024;

inline EstimateWithCI summarize(const std::vector<double>& xs) {
  EstimateWithCI est;
  est.samples = static_cast<long long>(xs.size());
  if (xs.empty()) {
    return est;
  }
  double sum = 0.0;
  for (double x : xs) sum += x;
  est.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - est.mean) * (x - est.mean);
    const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    est.half_width_95 = 1.96 * sd / std::sqrt(static_cast<double>(xs.size()));
  }
  return est;
}

template <class Fn>
void run_trials_parallel(int trials, int threads, Fn&& fn) {
  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
  }
  threads = std::min(threads, trials);
  if (threads <= 1) {
    for (int i = 0; i < trials; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int w = 0; w < threads; ++w) {
    const int lo = static_cast<int>(static_cast<long long>(trials) * w / threads);
    const int hi =
        static_cast<int>(static_cast<long long>(trials) * (w + 1) / threads);
    pool.emplace_back([lo, hi, &fn] {
      for (int i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

struct MetricRequest {
  bool sinr_metrics = true;  // coverage and rate need fading draws
};

// Everything one trial contributes.
struct TrialStats {
  std::vector<double> assoc_fraction;  // per tier, over all UEs in the trial
  std::vector<double> idle_fraction;   // per tier; NaN when the tier is empty
  std::vector<double> active_count;    // per tier
  long long ue_count = 0;
  int serving_tier = -1;
  double serving_distance = 0.0;
  double coverage = std::numeric_limits<double>::quiet_NaN();
  double rate = std::numeric_limits<double>::quiet_NaN();
  int extra_attempts = 0;
};

struct SimulationSummary {
  std::vector<EstimateWithCI> association;
  std::vector<EstimateWithCI> idle;
  std::vector<EstimateWithCI> active_density;
  std::vector<EstimateWithCI> coverage_tier;  // conditional on serving tier
  EstimateWithCI coverage_overall;
  std::vector<EstimateWithCI> rate_tier;
  EstimateWithCI rate_overall;
  std::vector<double> ase_tier;      // active density mean * tier rate mean
  std::vector<double> ase_tier_ci;   // first-order propagated
  double ase_overall = 0.0;
  double ase_overall_ci = 0.0;
  long long resampled_trials = 0;
  std::vector<TrialStats> trials;
};

// Window/trial sanity per the estimator design: small windows bias the
// geometry, tiny trial counts make the CIs meaningless.
inline std::vector<std::string> sim_config_warnings(const NetworkParams& p,
                                                    const SimConfig& sim) {
  std::vector<std::string> warnings;
  const double area = sim.window_side * sim.window_side;
  for (std::size_t t = 0; t < p.tiers.size(); ++t) {
    if (p.tiers[t].density * area < 50.0) {
      warnings.push_back("expected BS count in tier " + std::to_string(t + 1) +
                         " is below 50; enlarge the window");
    }
  }
  if (p.ue_density * area < 100.0) {
    warnings.push_back("expected UE count is below 100; enlarge the window");
  }
  return warnings;
}

namespace detail {

inline double probe_eligibility_margin(const SimConfig& sim) {
  double margin = sim.probe_margin;
  if (sim.boundary == BoundaryMode::guard_zone) {
    margin = std::max(margin, sim.guard_width);
  }
  return margin;
}

inline bool in_probe_region(const Point2& pt, double side, double margin) {
  return pt.x >= margin && pt.y >= margin && pt.x <= side - margin &&
         pt.y <= side - margin;
}

inline TrialStats run_trial(const NetworkParams& p, const SimConfig& sim,
                            double tau_linear, const MetricRequest& request,
                            int trial) {
  const std::size_t tiers = p.tiers.size();
  const double margin = probe_eligibility_margin(sim);

  for (int attempt = 0; attempt < kMaxTrialAttempts; ++attempt) {
    const std::uint64_t tkey =
        static_cast<std::uint64_t>(trial) * kMaxTrialAttempts +
        static_cast<std::uint64_t>(attempt);

    Deployment d;
    d.window_side = sim.window_side;
    d.boundary = sim.boundary;
    d.bs_positions.resize(tiers);
    std::size_t total_bs = 0;
    for (std::size_t t = 0; t < tiers; ++t) {
      RngStream rng(sim.seed, tkey, rng_role::bs_positions(t));
      d.bs_positions[t] = sample_ppp(p.tiers[t].density, sim.window_side, rng);
      total_bs += d.bs_positions[t].size();
    }
    {
      RngStream rng(sim.seed, tkey, rng_role::kUePositions);
      d.ue_positions = sample_ppp(p.ue_density, sim.window_side, rng);
    }

    std::vector<std::size_t> eligible;
    eligible.reserve(d.ue_positions.size());
    for (std::size_t u = 0; u < d.ue_positions.size(); ++u) {
      if (in_probe_region(d.ue_positions[u], sim.window_side, margin)) {
        eligible.push_back(u);
      }
    }
    if (total_bs == 0 || d.ue_positions.empty() || eligible.empty()) {
      continue;  // resample this trial
    }

    associate(d, p);

    TrialStats stats;
    stats.extra_attempts = attempt;
    stats.ue_count = static_cast<long long>(d.ue_positions.size());
    stats.assoc_fraction.assign(tiers, 0.0);
    stats.idle_fraction.assign(tiers,
                               std::numeric_limits<double>::quiet_NaN());
    stats.active_count.assign(tiers, 0.0);

    for (const BsRef& ref : d.association) {
      stats.assoc_fraction[static_cast<std::size_t>(ref.tier)] += 1.0;
    }
    for (std::size_t t = 0; t < tiers; ++t) {
      stats.assoc_fraction[t] /= static_cast<double>(d.ue_positions.size());
      const std::size_t n_bs = d.bs_positions[t].size();
      double active = 0.0;
      for (char flag : d.active_mask[t]) active += flag;
      stats.active_count[t] = active;
      if (n_bs > 0) {
        stats.idle_fraction[t] = 1.0 - active / static_cast<double>(n_bs);
      }
    }

    RngStream pick(sim.seed, tkey, rng_role::kTypicalPick);
    const std::size_t typical =
        eligible[pick.uniform_index(eligible.size())];
    const BsRef serving = d.association[typical];
    stats.serving_tier = serving.tier;
    stats.serving_distance = std::sqrt(distance_sq(
        d.ue_positions[typical],
        d.bs_positions[static_cast<std::size_t>(serving.tier)]
                      [static_cast<std::size_t>(serving.index)],
        d.window_side, wrap_distances(d.boundary)));

    if (request.sinr_metrics) {
      const ServingLink link = build_link(d, p, typical);
      RngStream fading(sim.seed, tkey, rng_role::kFading);
      double covered = 0.0;
      double rate_sum = 0.0;
      for (int f = 0; f < sim.fading_draws; ++f) {
        const double sinr = sinr_draw(link, p.noise_power_mw, fading);
        if (sinr > tau_linear) covered += 1.0;
        rate_sum += std::log2(1.0 + sinr);
      }
      stats.coverage = covered / sim.fading_draws;
      stats.rate = rate_sum / sim.fading_draws;
    }
    return stats;
  }
  throw NumericalError("run_trial: no usable realization after " +
                           std::to_string(kMaxTrialAttempts) + " attempts",
                       static_cast<double>(kMaxTrialAttempts));
}

}  // namespace detail

inline SimulationSummary simulate_metrics(const NetworkParams& p,
                                          const SimConfig& sim,
                                          double tau_linear,
                                          const MetricRequest& request = {},
                                          int threads = 1) {
  p.validate();
  if (sim.trials < 1 || sim.fading_draws < 1 || !(sim.window_side > 0.0)) {
    throw std::invalid_argument("simulate_metrics: invalid simulation config");
  }

  const std::size_t tiers = p.tiers.size();
  SimulationSummary out;
  out.trials.resize(static_cast<std::size_t>(sim.trials));

  detail::run_trials_parallel(sim.trials, threads, [&](int trial) {
    out.trials[static_cast<std::size_t>(trial)] =
        detail::run_trial(p, sim, tau_linear, request, trial);
  });

  const double area = sim.window_side * sim.window_side;
  std::vector<std::vector<double>> assoc(tiers), idle(tiers), active(tiers),
      cov_tier(tiers), rate_tier(tiers);
  std::vector<double> cov_all, rate_all;
  for (const TrialStats& ts : out.trials) {
    out.resampled_trials += ts.extra_attempts;
    for (std::size_t t = 0; t < tiers; ++t) {
      assoc[t].push_back(ts.assoc_fraction[t]);
      if (!std::isnan(ts.idle_fraction[t])) {
        idle[t].push_back(ts.idle_fraction[t]);
      }
      active[t].push_back(ts.active_count[t] / area);
    }
    if (!std::isnan(ts.coverage)) {
      cov_all.push_back(ts.coverage);
      cov_tier[static_cast<std::size_t>(ts.serving_tier)].push_back(ts.coverage);
    }
    if (!std::isnan(ts.rate)) {
      rate_all.push_back(ts.rate);
      rate_tier[static_cast<std::size_t>(ts.serving_tier)].push_back(ts.rate);
    }
  }

  out.association.resize(tiers);
  out.idle.resize(tiers);
  out.active_density.resize(tiers);
  out.coverage_tier.resize(tiers);
  out.rate_tier.resize(tiers);
  out.ase_tier.assign(tiers, 0.0);
  out.ase_tier_ci.assign(tiers, 0.0);
  for (std::size_t t = 0; t < tiers; ++t) {
    out.association[t] = detail::summarize(assoc[t]);
    out.idle[t] = detail::summarize(idle[t]);
    out.active_density[t] = detail::summarize(active[t]);
    out.coverage_tier[t] = detail::summarize(cov_tier[t]);
    out.rate_tier[t] = detail::summarize(rate_tier[t]);

    const double lam = out.active_density[t].mean;
    const double rate = out.rate_tier[t].mean;
    out.ase_tier[t] = lam * rate;
    if (lam > 0.0 && rate > 0.0) {
      const double rel_lam = out.active_density[t].half_width_95 / lam;
      const double rel_rate = out.rate_tier[t].half_width_95 / rate;
      out.ase_tier_ci[t] =
          out.ase_tier[t] * std::sqrt(rel_lam * rel_lam + rel_rate * rel_rate);
    }
    if (!std::isnan(out.ase_tier[t])) {
      out.ase_overall += out.ase_tier[t];
      out.ase_overall_ci += out.ase_tier_ci[t] * out.ase_tier_ci[t];
    }
  }
  out.ase_overall_ci = std::sqrt(out.ase_overall_ci);
  out.coverage_overall = detail::summarize(cov_all);
  out.rate_overall = detail::summarize(rate_all);
  return out;
}

// Convenience wrappers for single-metric callers.
inline SimulationSummary estimate_coverage(const NetworkParams& p,
                                           const SimConfig& sim, double tau,
                                           int threads = 1) {
  return simulate_metrics(p, sim, tau, MetricRequest{true}, threads);
}

inline SimulationSummary estimate_idle_fraction(const NetworkParams& p,
                                                const SimConfig& sim,
                                                int threads = 1) {
  return simulate_metrics(p, sim, 1.0, MetricRequest{false}, threads);
}

inline SimulationSummary estimate_rate(const NetworkParams& p,
                                       const SimConfig& sim, int threads = 1) {
  return simulate_metrics(p, sim, 1.0, MetricRequest{true}, threads);
}

inline SimulationSummary estimate_association(const NetworkParams& p,
                                              const SimConfig& sim,
                                              int threads = 1) {
  return simulate_metrics(p, sim, 1.0, MetricRequest{false}, threads);
}

// One deployment sampled exactly like the estimator's first attempt of the
// given trial index.
inline Deployment sample_deployment(const NetworkParams& p, const SimConfig& sim,
                                    int trial = 0) {
  p.validate();
  const std::uint64_t tkey =
      static_cast<std::uint64_t>(trial) * detail::kMaxTrialAttempts;
  Deployment d;
  d.window_side = sim.window_side;
  d.boundary = sim.boundary;
  d.bs_positions.resize(p.tiers.size());
  for (std::size_t t = 0; t < p.tiers.size(); ++t) {
    RngStream rng(sim.seed, tkey, rng_role::bs_positions(t));
    d.bs_positions[t] = sample_ppp(p.tiers[t].density, sim.window_side, rng);
  }
  RngStream rng(sim.seed, tkey, rng_role::kUePositions);
  d.ue_positions = sample_ppp(p.ue_density, sim.window_side, rng);
  associate(d, p);
  return d;
}

// Line-oriented realization dump. BS lines: `<tier> <x_km> <y_km> <active>`,
// UE lines: `ue <x_km> <y_km> <serving_tier> <serving_index>`. Tier numbers
// and BS indices are 1-based.
inline void write_realization(std::ostream& os, const Deployment& d) {
  char buf[160];
  for (std::size_t t = 0; t < d.bs_positions.size(); ++t) {
    for (std::size_t k = 0; k < d.bs_positions[t].size(); ++k) {
      std::snprintf(buf, sizeof(buf), "%zu %.17g %.17g %d\n", t + 1,
                    d.bs_positions[t][k].x, d.bs_positions[t][k].y,
                    d.active_mask[t][k] ? 1 : 0);
      os << buf;
    }
  }
  for (std::size_t u = 0; u < d.ue_positions.size(); ++u) {
    const BsRef ref = d.association[u];
    std::snprintf(buf, sizeof(buf), "ue %.17g %.17g %d %d\n",
                  d.ue_positions[u].x, d.ue_positions[u].y, ref.tier + 1,
                  ref.index + 1);
    os << buf;
  }
}

}  // namespace hcn
