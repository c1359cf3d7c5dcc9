#pragma once

// Sweep runner and CSV emission. For each sweep point the requested engines
// produce one row per (engine, metric, tier); rows are buffered and emitted
// in deterministic sweep/engine/metric/tier order with 17-significant-digit
// numbers, so identical configs and seeds yield byte-identical files.

#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hcn/analysis.hpp"
#include "hcn/config.hpp"
#include "hcn/sim.hpp"

namespace hcn {

struct SweepRow {
  std::string sweep_param;
  double swept_value = 0.0;
  std::string engine;
  std::string metric;
  std::string tier;  // tier label or "overall"
  bool failed = false;
  double result = 0.0;
  std::optional<double> ci_half;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  int exit_status = 0;  // 0 ok, 2 when any engine failed numerically
  long long resampled_trials = 0;
};

struct RunOptions {
  int threads = 1;
  std::ostream* progress = nullptr;  // per-point notes, may be null
};

namespace detail {

inline std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::vector<double> sweep_points(const SweepSpec& sweep) {
  std::vector<double> points(static_cast<std::size_t>(sweep.steps));
  for (int k = 0; k < sweep.steps; ++k) {
    points[static_cast<std::size_t>(k)] =
        sweep.start + (sweep.stop - sweep.start) * k / (sweep.steps - 1);
  }
  return points;
}

struct RowSink {
  SweepResult* out;
  const ScenarioConfig* cfg;
  double value;
  const char* engine;

  void push(const std::string& metric, const std::string& tier, double result,
            std::optional<double> ci = std::nullopt) const {
    out->rows.push_back(SweepRow{cfg->sweep.parameter, value, engine, metric,
                                 tier, false, result, ci});
  }
  void push_failed(const std::string& metric, const std::string& tier) const {
    out->rows.push_back(SweepRow{cfg->sweep.parameter, value, engine, metric,
                                 tier, true, 0.0, std::nullopt});
  }
};

// Analytical rows (engine = analysis or baseline; the baseline just swaps in
// the fully-loaded tier state).
inline void analytic_rows(const RowSink& sink, const ScenarioConfig& cfg,
                          const NetworkParams& params, bool fully_loaded) {
  const std::vector<TierDerived> derived =
      fully_loaded ? fully_loaded_tiers(params) : derive_tiers(params);
  const double tau = db_to_linear(cfg.tau_db);
  const QuadratureSpec quad{};

  for (Metric metric : cfg.metrics) {
    switch (metric) {
      case Metric::idle: {
        for (std::size_t t = 0; t < params.tiers.size(); ++t) {
          sink.push("idle", params.tiers[t].label, derived[t].idle_prob);
        }
        break;
      }
      case Metric::coverage: {
        const CoverageReport report = coverage_overall(params, derived, tau, quad);
        for (std::size_t t = 0; t < params.tiers.size(); ++t) {
          sink.push("coverage", params.tiers[t].label,
                    report.per_tier_conditional[t]);
        }
        sink.push("coverage", "overall", report.overall);
        for (std::size_t t = 0; t < params.tiers.size(); ++t) {
          sink.push("coverage_weighted", params.tiers[t].label,
                    report.per_tier_weighted[t]);
        }
        break;
      }
      case Metric::rate: {
        const RateReport report = rate_overall(params, derived, quad);
        for (std::size_t t = 0; t < params.tiers.size(); ++t) {
          sink.push("rate", params.tiers[t].label, report.per_tier_rate[t]);
        }
        sink.push("rate", "overall", report.mean_ue_rate);
        for (std::size_t t = 0; t < params.tiers.size(); ++t) {
          sink.push("ase", params.tiers[t].label,
                    derived[t].active_density * report.per_tier_rate[t]);
        }
        sink.push("ase", "overall", report.area_rate_density);
        break;
      }
    }
  }
}

inline void analytic_rows_failed(const RowSink& sink, const ScenarioConfig& cfg,
                                 const NetworkParams& params) {
  for (Metric metric : cfg.metrics) {
    switch (metric) {
      case Metric::idle:
        for (const TierParams& tier : params.tiers) {
          sink.push_failed("idle", tier.label);
        }
        break;
      case Metric::coverage:
        for (const TierParams& tier : params.tiers) {
          sink.push_failed("coverage", tier.label);
        }
        sink.push_failed("coverage", "overall");
        for (const TierParams& tier : params.tiers) {
          sink.push_failed("coverage_weighted", tier.label);
        }
        break;
      case Metric::rate:
        for (const TierParams& tier : params.tiers) {
          sink.push_failed("rate", tier.label);
        }
        sink.push_failed("rate", "overall");
        for (const TierParams& tier : params.tiers) {
          sink.push_failed("ase", tier.label);
        }
        sink.push_failed("ase", "overall");
        break;
    }
  }
}

inline void sim_rows(const RowSink& sink, const ScenarioConfig& cfg,
                     const SimulationSummary& summary,
                     const NetworkParams& params) {
  for (Metric metric : cfg.metrics) {
    switch (metric) {
      case Metric::idle: {
        for (std::size_t t = 0; t < params.tiers.size(); ++t) {
          sink.push("idle", params.tiers[t].label, summary.idle[t].mean,
                    summary.idle[t].half_width_95);
        }
        break;
      }
      case Metric::coverage: {
        for (std::size_t t = 0; t < params.tiers.size(); ++t) {
          sink.push("coverage", params.tiers[t].label,
                    summary.coverage_tier[t].mean,
                    summary.coverage_tier[t].half_width_95);
        }
        sink.push("coverage", "overall", summary.coverage_overall.mean,
                  summary.coverage_overall.half_width_95);
        for (std::size_t t = 0; t < params.tiers.size(); ++t) {
          // weighted = conditional * empirical association share
          const double weighted =
              summary.coverage_tier[t].mean * summary.association[t].mean;
          sink.push("coverage_weighted", params.tiers[t].label, weighted,
                    summary.coverage_tier[t].half_width_95 *
                        summary.association[t].mean);
        }
        break;
      }
      case Metric::rate: {
        for (std::size_t t = 0; t < params.tiers.size(); ++t) {
          sink.push("rate", params.tiers[t].label, summary.rate_tier[t].mean,
                    summary.rate_tier[t].half_width_95);
        }
        sink.push("rate", "overall", summary.rate_overall.mean,
                  summary.rate_overall.half_width_95);
        for (std::size_t t = 0; t < params.tiers.size(); ++t) {
          sink.push("ase", params.tiers[t].label, summary.ase_tier[t],
                    summary.ase_tier_ci[t]);
        }
        sink.push("ase", "overall", summary.ase_overall, summary.ase_overall_ci);
        break;
      }
    }
  }
}

inline bool engine_requested(const ScenarioConfig& cfg, Engine e) {
  for (Engine have : cfg.engines) {
    if (have == e) return true;
  }
  return false;
}

inline bool metrics_need_sinr(const ScenarioConfig& cfg) {
  for (Metric m : cfg.metrics) {
    if (m == Metric::coverage || m == Metric::rate) return true;
  }
  return false;
}

}  // namespace detail

inline SweepResult run_sweep(const ScenarioConfig& cfg,
                             const RunOptions& options = {}) {
  SweepResult out;
  const std::vector<double> points = detail::sweep_points(cfg.sweep);

  for (std::size_t ip = 0; ip < points.size(); ++ip) {
    const double value = points[ip];
    const NetworkParams params =
        apply_sweep_value(cfg.network, cfg.sweep.parameter, value);

    if (options.progress) {
      *options.progress << "sweep point " << (ip + 1) << "/" << points.size()
                        << ": " << cfg.sweep.parameter << " = " << value
                        << "\n";
    }

    for (Engine engine : cfg.engines) {
      detail::RowSink sink{&out, &cfg, value, engine_name(engine)};
      try {
        if (engine == Engine::analysis || engine == Engine::baseline) {
          detail::analytic_rows(sink, cfg, params, engine == Engine::baseline);
        } else {
          // independent trial keys per sweep point
          SimConfig point_sim = cfg.sim;
          point_sim.seed = detail::mix64(cfg.sim.seed ^ (0x51EE7ull + ip));
          const MetricRequest request{detail::metrics_need_sinr(cfg)};
          const SimulationSummary summary = simulate_metrics(
              params, point_sim, db_to_linear(cfg.tau_db), request,
              options.threads);
          out.resampled_trials += summary.resampled_trials;
          detail::sim_rows(sink, cfg, summary, params);
        }
      } catch (const NumericalError& err) {
        if (options.progress) {
          *options.progress << "engine " << engine_name(engine)
                            << " failed at " << cfg.sweep.parameter << " = "
                            << value << ": " << err.what() << "\n";
        }
        detail::analytic_rows_failed(sink, cfg, params);
        out.exit_status = 2;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV emission (RFC-4180-style quoting, LF line endings, C locale numbers)

inline constexpr const char* kCsvHeader =
    "sweep_param,value,engine,metric,tier,result,ci95";

namespace detail {

inline void csv_field(std::ostream& os, const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) {
    os << field;
    return;
  }
  os << '"';
  for (char c : field) {
    if (c == '"') os << '"';
    os << c;
  }
  os << '"';
}

}  // namespace detail

inline void write_csv(std::ostream& os, const SweepResult& result) {
  os << kCsvHeader << "\n";
  for (const SweepRow& row : result.rows) {
    detail::csv_field(os, row.sweep_param);
    os << ',' << detail::format_full(row.swept_value) << ',';
    detail::csv_field(os, row.engine);
    os << ',';
    detail::csv_field(os, row.metric);
    os << ',';
    detail::csv_field(os, row.tier);
    os << ',';
    if (row.failed) {
      os << "error";
    } else {
      os << detail::format_full(row.result);
    }
    os << ',';
    if (row.ci_half.has_value()) {
      os << detail::format_full(*row.ci_half);
    }
    os << "\n";
  }
}

// Tabular CSV reader (quoting-aware); used by the round-trip checks and the
// comparison harness.
inline std::vector<std::vector<std::string>> parse_csv(std::istream& is) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;

  char c;
  while (is.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (is.peek() == '"') {
          is.get(c);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(field);
      field.clear();
    } else if (c == '\n') {
      row.push_back(field);
      field.clear();
      rows.push_back(row);
      row.clear();
      any = false;
    } else if (c != '\r') {
      field += c;
    }
  }
  if (any) {
    row.push_back(field);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace hcn
