// coordbeam command line front end.
//
//   coordbeam simulate --config cfg.json --trials 2000 --out results.csv
//   coordbeam sweep --axis snr --values -10,-5,0,5,10
//   coordbeam verify --budget 1048576
//   coordbeam dump-spectrum --ue 0 --out heatmap.csv
//   coordbeam --dump-config

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coordbeam/config.hpp"
#include "coordbeam/errors.hpp"
#include "coordbeam/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfig = 2;

struct CommonOptions {
  std::string config_path;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::string out;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "JSON configuration file (defaults if absent)");
  cmd->add_option("--trials", opts.trials, "Monte-Carlo trials per point");
  cmd->add_option("--seed", opts.seed, "master seed");
  cmd->add_option("--workers", opts.workers, "worker threads (results do not depend on it)");
  cmd->add_option("--out", opts.out, "output CSV (stdout if absent)");
}

coordbeam::ScenarioConfig resolve(const CommonOptions& opts) {
  coordbeam::ScenarioConfig cfg =
      opts.config_path.empty() ? coordbeam::ScenarioConfig{} : coordbeam::load_config(opts.config_path);
  if (opts.trials) cfg.trials = *opts.trials;
  if (opts.seed) cfg.master_seed = *opts.seed;
  if (opts.workers) cfg.workers = *opts.workers;
  cfg.validate();
  return cfg;
}

template <class Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream file(path);
  if (!file) throw coordbeam::ConfigError("cannot open " + path + " for writing");
  fn(file);
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (item.empty() || used != item.size()) {
      throw coordbeam::ConfigError("bad sweep value '" + item + "'");
    }
    values.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return values;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sub-6 GHz aided mmWave multi-user beam selection simulator"};
  app.require_subcommand(0, 1);

  bool dump_config = false;
  app.add_flag("--dump-config", dump_config, "print the default configuration and exit");

  CommonOptions sim_opts;
  auto* simulate = app.add_subcommand("simulate", "run one configuration");
  add_common(simulate, sim_opts);

  CommonOptions sweep_opts;
  std::string axis_name;
  std::string values_text;
  auto* sweep_cmd = app.add_subcommand("sweep", "run a parameter sweep");
  add_common(sweep_cmd, sweep_opts);
  sweep_cmd->add_option("--axis", axis_name, "snr, radius or distance")->required();
  sweep_cmd->add_option("--values", values_text, "comma separated axis values")->required();

  coordbeam::VerifyOptions verify_opts;
  auto* verify_cmd = app.add_subcommand("verify", "run the brute-force and analytic verifiers");
  verify_cmd->add_option("--budget", verify_opts.budget, "exhaustive search budget");
  verify_cmd->add_option("--seed", verify_opts.seed, "seed of the verifier draws");

  CommonOptions spec_opts;
  int spec_ue = 0;
  std::uint64_t spec_trial = 0;
  auto* spectrum_cmd = app.add_subcommand("dump-spectrum", "write one UE's sub-6 spatial spectrum");
  add_common(spectrum_cmd, spec_opts);
  spectrum_cmd->add_option("--ue", spec_ue, "UE index")->required();
  spectrum_cmd->add_option("--trial", spec_trial, "trial whose drop is used");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (dump_config) {
      std::cout << coordbeam::config_to_json(coordbeam::ScenarioConfig{}) << '\n';
      return kExitOk;
    }
    if (*simulate) {
      const auto cfg = resolve(sim_opts);
      const auto points = coordbeam::sweep(cfg, coordbeam::SweepAxis::snr, {cfg.snr_db});
      with_output(sim_opts.out, [&](std::ostream& os) {
        coordbeam::write_results_csv(os, cfg, coordbeam::SweepAxis::snr, points);
      });
      return kExitOk;
    }
    if (*sweep_cmd) {
      const auto cfg = resolve(sweep_opts);
      const auto axis = coordbeam::sweep_axis_from_string(axis_name);
      const auto points = coordbeam::sweep(cfg, axis, parse_values(values_text));
      with_output(sweep_opts.out, [&](std::ostream& os) {
        coordbeam::write_results_csv(os, cfg, axis, points);
      });
      return kExitOk;
    }
    if (*verify_cmd) {
      const auto report = coordbeam::verify(verify_opts);
      coordbeam::print_report(std::cout, report);
      return report.passed() ? kExitOk : kExitVerifyFailed;
    }
    if (*spectrum_cmd) {
      const auto cfg = resolve(spec_opts);
      if (spec_ue < 0 || spec_ue >= cfg.num_ues) {
        throw coordbeam::ConfigError("--ue must be in [0, num_ues)");
      }
      const coordbeam::SimulationContext ctx(cfg);
      const auto inputs = coordbeam::draw_trial_inputs(ctx, spec_trial);
      with_output(spec_opts.out, [&](std::ostream& os) {
        coordbeam::write_spectrum_csv(os, inputs.spectra[static_cast<std::size_t>(spec_ue)]);
      });
      return kExitOk;
    }
    std::cerr << app.help();
    return kExitConfig;
  } catch (const coordbeam::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const coordbeam::BudgetExceeded& e) {
    std::cerr << "budget error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}
