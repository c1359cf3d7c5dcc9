// hcn command-line runner: analytical and Monte Carlo sweeps over network
// scenarios, engine comparison, and single-realization dumps.
//
// Exit codes: 0 success, 1 config/usage error, 2 numerical failure, 3 I/O.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hcn/config.hpp"
#include "hcn/sim.hpp"
#include "hcn/sweep.hpp"
#include "hcn/units.hpp"

namespace {

constexpr const char* kUsage =
    "usage: hcn <analyze|simulate|compare|dump> --config <path> [options]\n"
    "\n"
    "subcommands:\n"
    "  analyze    run the analytical engine (plus baseline when configured)\n"
    "  simulate   run the Monte Carlo engine\n"
    "  compare    run analysis and simulation side by side\n"
    "  dump       write one sampled realization as text\n"
    "\n"
    "options:\n"
    "  --config <path>   scenario config file (required)\n"
    "  --seed <u64>      override the configured RNG seed\n"
    "  --out <path>      override the configured output path\n"
    "  --threads <n>     worker threads for simulation trials (default 1)\n"
    "  --quiet           suppress progress and warning output\n";

struct CliOptions {
  std::string subcommand;
  std::string config_path;
  std::string out_path;
  bool has_seed = false;
  std::uint64_t seed = 0;
  int threads = 1;
  bool quiet = false;
};

int parse_cli(int argc, char** argv, CliOptions& opt) {
  if (argc < 2) {
    std::cerr << kUsage;
    return 1;
  }
  opt.subcommand = argv[1];
  if (opt.subcommand != "analyze" && opt.subcommand != "simulate" &&
      opt.subcommand != "compare" && opt.subcommand != "dump") {
    std::cerr << "unknown subcommand '" << opt.subcommand << "'\n" << kUsage;
    return 1;
  }
  for (int i = 2; i < argc; ++i) {
    const std::string arg = argv[i];
    auto need_value = [&](const char* flag) -> const char* {
      if (i + 1 >= argc) {
        std::cerr << flag << " requires a value\n";
        return nullptr;
      }
      return argv[++i];
    };
    if (arg == "--config") {
      const char* v = need_value("--config");
      if (!v) return 1;
      opt.config_path = v;
    } else if (arg == "--seed") {
      const char* v = need_value("--seed");
      if (!v) return 1;
      char* end = nullptr;
      opt.seed = std::strtoull(v, &end, 10);
      if (!end || *end != '\0') {
        std::cerr << "--seed expects an unsigned integer\n";
        return 1;
      }
      opt.has_seed = true;
    } else if (arg == "--out") {
      const char* v = need_value("--out");
      if (!v) return 1;
      opt.out_path = v;
    } else if (arg == "--threads") {
      const char* v = need_value("--threads");
      if (!v) return 1;
      opt.threads = std::atoi(v);
      if (opt.threads < 0) {
        std::cerr << "--threads expects a nonnegative integer\n";
        return 1;
      }
    } else if (arg == "--quiet") {
      opt.quiet = true;
    } else {
      std::cerr << "unknown option '" << arg << "'\n" << kUsage;
      return 1;
    }
  }
  if (opt.config_path.empty()) {
    std::cerr << "--config is required\n" << kUsage;
    return 1;
  }
  return 0;
}

bool has_engine(const std::vector<hcn::Engine>& engines, hcn::Engine e) {
  for (hcn::Engine have : engines) {
    if (have == e) return true;
  }
  return false;
}

// Engine selection per subcommand: `analyze` keeps the analytical engines,
// `simulate` only the Monte Carlo one, `compare` always runs analysis and
// sim together (plus baseline when configured).
void select_engines(const std::string& subcommand, hcn::ScenarioConfig& cfg) {
  using hcn::Engine;
  std::vector<Engine> engines;
  if (subcommand == "analyze") {
    engines.push_back(Engine::analysis);
    if (has_engine(cfg.engines, Engine::baseline)) {
      engines.push_back(Engine::baseline);
    }
  } else if (subcommand == "simulate") {
    engines.push_back(Engine::sim);
  } else if (subcommand == "compare") {
    engines.push_back(Engine::analysis);
    if (has_engine(cfg.engines, Engine::baseline)) {
      engines.push_back(Engine::baseline);
    }
    engines.push_back(Engine::sim);
  }
  cfg.engines = engines;
}

void print_run_header(const hcn::ScenarioConfig& cfg) {
  std::cerr << "scenario: " << cfg.network.tiers.size() << " tier(s), alpha = "
            << cfg.network.alpha << ", ue_density = " << cfg.network.ue_density
            << " /km^2\n";
  if (cfg.network.noise_power_mw == 0.0) {
    std::cerr << "noise: off (interference-limited)\n";
  } else {
    std::cerr << "noise: " << hcn::mw_to_dbm(cfg.network.noise_power_mw)
              << " dBm (r^-alpha with r in km)\n";
  }
  std::cerr << "sim window: " << cfg.sim.window_side << " x "
            << cfg.sim.window_side << " km, trials = " << cfg.sim.trials
            << ", fading draws = " << cfg.sim.fading_draws
            << ", seed = " << cfg.sim.seed << "\n";
}

// Largest |analysis - sim| per metric over sweep points and tiers.
void print_agreement(const hcn::SweepResult& result) {
  struct Key {
    std::string metric, tier;
    double value;
    bool operator<(const Key& o) const {
      if (metric != o.metric) return metric < o.metric;
      if (tier != o.tier) return tier < o.tier;
      return value < o.value;
    }
  };
  std::map<Key, std::pair<double, double>> pairs;  // analysis, sim
  std::map<std::string, double> worst;
  for (const hcn::SweepRow& row : result.rows) {
    if (row.failed) continue;
    if (row.engine != "analysis" && row.engine != "sim") continue;
    Key key{row.metric, row.tier, row.swept_value};
    auto& slot = pairs[key];
    (row.engine == "analysis" ? slot.first : slot.second) = row.result;
  }
  for (const auto& [key, slot] : pairs) {
    const double gap = std::fabs(slot.first - slot.second);
    auto it = worst.find(key.metric);
    if (it == worst.end() || gap > it->second) {
      worst[key.metric] = gap;
    }
  }
  for (const auto& [metric, gap] : worst) {
    std::cerr << "max |analysis - sim| for " << metric << ": " << gap << "\n";
  }
}

int run_dump(const hcn::ScenarioConfig& cfg, const CliOptions& opt) {
  const hcn::Deployment deployment =
      hcn::sample_deployment(cfg.network, cfg.sim);
  const std::string path = !opt.out_path.empty() ? opt.out_path : cfg.output_path;
  if (path.empty()) {
    hcn::write_realization(std::cout, deployment);
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot open output file: " << path << "\n";
    return 3;
  }
  hcn::write_realization(out, deployment);
  if (!out.good()) {
    std::cerr << "write failed: " << path << "\n";
    return 3;
  }
  if (!opt.quiet) {
    std::cerr << "wrote realization to " << path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CliOptions opt;
  if (int rc = parse_cli(argc, argv, opt); rc != 0) {
    return rc;
  }

  hcn::ScenarioConfig cfg;
  try {
    cfg = hcn::load_config(opt.config_path);
  } catch (const hcn::ConfigError& err) {
    std::cerr << opt.config_path << ": " << err.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& err) {
    std::cerr << opt.config_path << ": " << err.what() << "\n";
    return 1;
  } catch (const std::ios_base::failure& err) {
    std::cerr << err.what() << "\n";
    return 3;
  }

  if (opt.has_seed) {
    cfg.sim.seed = opt.seed;
  }
  if (!opt.out_path.empty()) {
    cfg.output_path = opt.out_path;
  }

  try {
    if (opt.subcommand == "dump") {
      return run_dump(cfg, opt);
    }

    select_engines(opt.subcommand, cfg);
    if (!opt.quiet) {
      print_run_header(cfg);
      for (const std::string& warning :
           hcn::sim_config_warnings(cfg.network, cfg.sim)) {
        if (has_engine(cfg.engines, hcn::Engine::sim)) {
          std::cerr << "warning: " << warning << "\n";
        }
      }
    }

    hcn::RunOptions run_options;
    run_options.threads = opt.threads;
    run_options.progress = opt.quiet ? nullptr : &std::cerr;

    const hcn::SweepResult result = hcn::run_sweep(cfg, run_options);

    if (cfg.output_path.empty()) {
      hcn::write_csv(std::cout, result);
    } else {
      std::ofstream out(cfg.output_path, std::ios::binary);
      if (!out) {
        std::cerr << "cannot open output file: " << cfg.output_path << "\n";
        return 3;
      }
      hcn::write_csv(out, result);
      if (!out.good()) {
        std::cerr << "write failed: " << cfg.output_path << "\n";
        return 3;
      }
      if (!opt.quiet) {
        std::cerr << "wrote " << result.rows.size() << " rows to "
                  << cfg.output_path << "\n";
      }
    }

    if (!opt.quiet && result.resampled_trials > 0) {
      std::cerr << "resampled " << result.resampled_trials
                << " empty realizations\n";
    }
    if (!opt.quiet && opt.subcommand == "compare") {
      print_agreement(result);
    }
    return result.exit_status;
  } catch (const hcn::NumericalError& err) {
    std::cerr << "numerical failure: " << err.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& err) {
    std::cerr << "invalid scenario: " << err.what() << "\n";
    return 1;
  } catch (const std::ios_base::failure& err) {
    std::cerr << "I/O failure: " << err.what() << "\n";
    return 3;
  }
}
