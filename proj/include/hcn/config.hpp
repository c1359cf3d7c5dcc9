#pragma once

// Scenario configuration: a line-based `key = value` format with [section]
// headers and `#` comments. Sections: network, sweep, sim, output. Powers are
// given in dBm and converted to linear milliwatts here; everything downstream
// is linear.

#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hcn/model.hpp"
#include "hcn/sim.hpp"
#include "hcn/units.hpp"

namespace hcn {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what
                                    : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

enum class Engine { analysis, baseline, sim };
enum class Metric { idle, coverage, rate };

inline const char* engine_name(Engine e) {
  switch (e) {
    case Engine::analysis: return "analysis";
    case Engine::baseline: return "baseline";
    case Engine::sim: return "sim";
  }
  return "?";
}

struct SweepSpec {
  std::string parameter;  // tier<k>.density | tier<k>.power_dbm | ue_density | alpha
  double start = 0.0;
  double stop = 0.0;
  int steps = 0;
};

struct ScenarioConfig {
  NetworkParams network;
  SweepSpec sweep;
  std::vector<Metric> metrics{Metric::coverage};
  std::vector<Engine> engines{Engine::analysis};
  double tau_db = 0.0;
  SimConfig sim;
  std::string output_path;  // empty = stdout
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t lo = 0;
  std::size_t hi = s.size();
  while (lo < hi && std::isspace(static_cast<unsigned char>(s[lo]))) ++lo;
  while (hi > lo && std::isspace(static_cast<unsigned char>(s[hi - 1]))) --hi;
  return s.substr(lo, hi - lo);
}

inline std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

inline std::vector<std::string> split_list(const std::string& s) {
  // comma- or whitespace-separated list
  std::string copy = s;
  for (char& c : copy) {
    if (c == ',') c = ' ';
  }
  return split_ws(copy);
}

inline double parse_number(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) {
      throw std::invalid_argument(s);
    }
    return v;
  } catch (const std::exception&) {
    throw ConfigError("expected a number, got '" + s + "'", line);
  }
}

inline long long parse_integer(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) {
      throw std::invalid_argument(s);
    }
    return v;
  } catch (const std::exception&) {
    throw ConfigError("expected an integer, got '" + s + "'", line);
  }
}

// parameter path validation happens once the tier list is known
inline void check_sweep_parameter(const ScenarioConfig& cfg, int line) {
  const std::string& path = cfg.sweep.parameter;
  if (path == "ue_density") return;
  if (path == "alpha") {
    if (!(cfg.sweep.start > 2.0 && cfg.sweep.stop > 2.0)) {
      throw ConfigError("alpha sweep bounds must exceed 2", line);
    }
    return;
  }
  if (path.rfind("tier", 0) == 0) {
    const std::size_t dot = path.find('.');
    if (dot != std::string::npos) {
      const std::string idx = path.substr(4, dot - 4);
      const std::string field = path.substr(dot + 1);
      char* end = nullptr;
      const long k = std::strtol(idx.c_str(), &end, 10);
      if (end && *end == '\0' && k >= 1 &&
          static_cast<std::size_t>(k) <= cfg.network.tiers.size() &&
          (field == "density" || field == "power_dbm")) {
        return;
      }
    }
  }
  throw ConfigError("unknown sweep parameter '" + path +
                        "' (expected tier<k>.density, tier<k>.power_dbm, "
                        "ue_density or alpha)",
                    line);
}

}  // namespace detail

// Applies one sweep value to a copy of the base parameters.
inline NetworkParams apply_sweep_value(const NetworkParams& base,
                                       const std::string& parameter,
                                       double value) {
  NetworkParams p = base;
  if (parameter == "ue_density") {
    p.ue_density = value;
  } else if (parameter == "alpha") {
    p.alpha = value;
  } else {
    const std::size_t dot = parameter.find('.');
    const std::size_t k =
        static_cast<std::size_t>(std::stol(parameter.substr(4, dot - 4))) - 1;
    const std::string field = parameter.substr(dot + 1);
    if (field == "density") {
      p.tiers[k].density = value;
    } else {
      p.tiers[k].tx_power_mw = dbm_to_mw(value);
    }
  }
  return p;
}

inline ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig cfg;
  cfg.network.tiers.clear();

  bool saw_alpha = false, saw_ue_density = false;
  bool saw_parameter = false, saw_start = false, saw_stop = false,
       saw_steps = false;
  bool saw_metrics = false, saw_engines = false;
  int param_line = 0;

  std::istringstream stream(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) {
      raw.erase(hash);
    }
    const std::string line = detail::trim(raw);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("malformed section header", line_no);
      }
      section = detail::trim(line.substr(1, line.size() - 2));
      if (section != "network" && section != "sweep" && section != "sim" &&
          section != "output") {
        throw ConfigError("unknown section [" + section + "]", line_no);
      }
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("expected `key = value`", line_no);
    }
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("expected `key = value`", line_no);
    }
    if (section.empty()) {
      throw ConfigError("key '" + key + "' appears before any [section]",
                        line_no);
    }

    if (section == "network") {
      if (key == "tier") {
        const auto fields = detail::split_ws(value);
        if (fields.size() != 3) {
          throw ConfigError(
              "tier expects `<label> <power_dbm> <density_per_km2>`", line_no);
        }
        TierParams tier;
        tier.label = fields[0];
        tier.tx_power_mw = dbm_to_mw(detail::parse_number(fields[1], line_no));
        tier.density = detail::parse_number(fields[2], line_no);
        if (!(tier.density > 0.0)) {
          throw ConfigError("tier density must be positive", line_no);
        }
        cfg.network.tiers.push_back(tier);
      } else if (key == "alpha") {
        cfg.network.alpha = detail::parse_number(value, line_no);
        if (!(cfg.network.alpha > 2.0)) {
          throw ConfigError("path loss exponent must exceed 2", line_no);
        }
        saw_alpha = true;
      } else if (key == "ue_density") {
        cfg.network.ue_density = detail::parse_number(value, line_no);
        if (!(cfg.network.ue_density > 0.0)) {
          throw ConfigError("UE density must be positive", line_no);
        }
        saw_ue_density = true;
      } else if (key == "noise_dbm") {
        cfg.network.noise_power_mw = dbm_to_mw(detail::parse_number(value, line_no));
      } else if (key == "shape_q") {
        cfg.network.shape_q = detail::parse_number(value, line_no);
      } else if (key == "rate_b") {
        cfg.network.rate_b = detail::parse_number(value, line_no);
      } else {
        throw ConfigError("unknown key '" + key + "' in [network]", line_no);
      }
    } else if (section == "sweep") {
      if (key == "parameter") {
        cfg.sweep.parameter = value;
        saw_parameter = true;
        param_line = line_no;
      } else if (key == "start") {
        cfg.sweep.start = detail::parse_number(value, line_no);
        saw_start = true;
      } else if (key == "stop") {
        cfg.sweep.stop = detail::parse_number(value, line_no);
        saw_stop = true;
      } else if (key == "steps") {
        cfg.sweep.steps = static_cast<int>(detail::parse_integer(value, line_no));
        if (cfg.sweep.steps < 2) {
          throw ConfigError("steps must be at least 2", line_no);
        }
        saw_steps = true;
      } else if (key == "metrics") {
        cfg.metrics.clear();
        for (const std::string& m : detail::split_list(value)) {
          if (m == "idle") cfg.metrics.push_back(Metric::idle);
          else if (m == "coverage") cfg.metrics.push_back(Metric::coverage);
          else if (m == "rate") cfg.metrics.push_back(Metric::rate);
          else throw ConfigError("unknown metric '" + m + "'", line_no);
        }
        saw_metrics = true;
      } else if (key == "engines") {
        cfg.engines.clear();
        for (const std::string& e : detail::split_list(value)) {
          if (e == "analysis") cfg.engines.push_back(Engine::analysis);
          else if (e == "sim") cfg.engines.push_back(Engine::sim);
          else if (e == "baseline") cfg.engines.push_back(Engine::baseline);
          else throw ConfigError("unknown engine '" + e + "'", line_no);
        }
        saw_engines = true;
      } else if (key == "tau_db") {
        cfg.tau_db = detail::parse_number(value, line_no);
        if (!std::isfinite(cfg.tau_db)) {
          throw ConfigError("tau_db must be finite", line_no);
        }
      } else {
        throw ConfigError("unknown key '" + key + "' in [sweep]", line_no);
      }
    } else if (section == "sim") {
      if (key == "window_km") {
        cfg.sim.window_side = detail::parse_number(value, line_no);
        if (!(cfg.sim.window_side > 0.0)) {
          throw ConfigError("window side must be positive", line_no);
        }
      } else if (key == "trials") {
        cfg.sim.trials = static_cast<int>(detail::parse_integer(value, line_no));
        if (cfg.sim.trials < 1) {
          throw ConfigError("trials must be at least 1", line_no);
        }
      } else if (key == "fading_draws") {
        cfg.sim.fading_draws =
            static_cast<int>(detail::parse_integer(value, line_no));
        if (cfg.sim.fading_draws < 1) {
          throw ConfigError("fading_draws must be at least 1", line_no);
        }
      } else if (key == "seed") {
        cfg.sim.seed =
            static_cast<std::uint64_t>(detail::parse_integer(value, line_no));
      } else if (key == "boundary") {
        const auto fields = detail::split_ws(value);
        if (fields.size() == 1 && fields[0] == "torus") {
          cfg.sim.boundary = BoundaryMode::torus;
        } else if (fields.size() == 2 && fields[0] == "guard") {
          cfg.sim.boundary = BoundaryMode::guard_zone;
          cfg.sim.guard_width = detail::parse_number(fields[1], line_no);
          if (!(cfg.sim.guard_width >= 0.0)) {
            throw ConfigError("guard width must be nonnegative", line_no);
          }
        } else {
          throw ConfigError("boundary expects `torus` or `guard <width_km>`",
                            line_no);
        }
      } else {
        throw ConfigError("unknown key '" + key + "' in [sim]", line_no);
      }
    } else {  // output
      if (key == "file") {
        cfg.output_path = value;
      } else {
        throw ConfigError("unknown key '" + key + "' in [output]", line_no);
      }
    }
  }

  if (cfg.network.tiers.empty()) {
    throw ConfigError("[network] must define at least one tier");
  }
  if (!saw_alpha) throw ConfigError("[network] is missing `alpha`");
  if (!saw_ue_density) throw ConfigError("[network] is missing `ue_density`");
  if (!saw_parameter) throw ConfigError("[sweep] is missing `parameter`");
  if (!saw_start) throw ConfigError("[sweep] is missing `start`");
  if (!saw_stop) throw ConfigError("[sweep] is missing `stop`");
  if (!saw_steps) throw ConfigError("[sweep] is missing `steps`");
  if (!(cfg.sweep.start > 0.0) || !(cfg.sweep.stop > 0.0)) {
    throw ConfigError("sweep bounds must be positive");
  }
  if (saw_metrics && cfg.metrics.empty()) {
    throw ConfigError("metrics list must not be empty");
  }
  if (saw_engines && cfg.engines.empty()) {
    throw ConfigError("engines list must not be empty");
  }
  detail::check_sweep_parameter(cfg, param_line);

  // canonical order, duplicates removed
  std::vector<Metric> metrics;
  for (Metric m : {Metric::idle, Metric::coverage, Metric::rate}) {
    for (Metric have : cfg.metrics) {
      if (have == m) {
        metrics.push_back(m);
        break;
      }
    }
  }
  cfg.metrics = metrics;
  std::vector<Engine> engines;
  for (Engine e : {Engine::analysis, Engine::baseline, Engine::sim}) {
    for (Engine have : cfg.engines) {
      if (have == e) {
        engines.push_back(e);
        break;
      }
    }
  }
  cfg.engines = engines;

  cfg.network.validate();
  return cfg;
}

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::ios_base::failure("cannot open config file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace hcn
