// cachenet: run one experiment recipe and write CSV + gnuplot files.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cachenet/config.hpp"
#include "cachenet/errors.hpp"
#include "cachenet/experiments.hpp"

namespace {

using cachenet::ExitStatus;

std::string key_reference() {
  const cachenet::ExperimentConfig defaults;
  std::ostringstream os;
  os << "Configuration keys (file format: one 'key = value' per line, '#' starts a comment):\n";
  for (const cachenet::ConfigKeyDoc& k : cachenet::config_keys()) {
    os << "  " << k.key;
    if (!k.units.empty() && k.units != "-") os << " [" << k.units << "]";
    os << "\n      " << k.description << "; default: " << cachenet::config_value(defaults, k.key) << "\n";
  }
  os << "\nExit status: 0 ok, 2 configuration error, 3 infeasible budget, 4 numeric failure,\n"
        "5 validation failure.\n";
  return os.str();
}

int fail(ExitStatus status, const std::string& message) {
  std::cerr << "cachenet: " << message << "\n";
  return static_cast<int>(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cache-aided two-tier network analysis: sweeps, optimization and Monte Carlo validation"};
  app.footer(key_reference());

  std::string experiment;
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  double budget = 0.0;
  bool print_config = false;

  app.add_option("experiment", experiment,
                 "sweep_hit | feasible_set | sweep_density_ase | sweep_density_ee | optimize | validate")
      ->required();
  auto* config_opt = app.add_option("--config", config_path, "configuration file; omitted keys take defaults");
  auto* out_opt = app.add_option("--out", out_dir, "output directory (overrides out_dir)");
  auto* seed_opt = app.add_option("--seed", seed, "Monte Carlo seed (overrides seed)");
  auto* trials_opt = app.add_option("--trials", trials, "Monte Carlo trials per cell (overrides trials)");
  auto* budget_opt = app.add_option("--budget", budget, "single budget in $/m^2 (overrides budget)");
  app.add_flag("--print-config", print_config, "print the effective configuration and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitStatus::config_error);
  }

  cachenet::ExperimentConfig cfg;
  try {
    if (*config_opt) {
      std::ifstream in(config_path, std::ios::binary);
      if (!in) return fail(ExitStatus::config_error, "cannot read config file " + config_path);
      std::ostringstream text;
      text << in.rdbuf();
      cfg = cachenet::parse_config(text.str());
    }
    cfg.experiment = cachenet::parse_experiment(experiment);
    if (*out_opt) cachenet::apply_setting(cfg, "out_dir", out_dir);
    if (*seed_opt) cfg.seed = seed;
    if (*trials_opt) cfg.trials = trials;
    if (*budget_opt) cfg.budgets = {budget};
    cfg.validate();
  } catch (const cachenet::ConfigError& e) {
    return fail(ExitStatus::config_error, e.what());
  }

  if (print_config) {
    std::cout << cachenet::emit_config(cfg);
    return 0;
  }

  cachenet::RunResult result;
  try {
    result = cachenet::run(cfg);
  } catch (const std::exception& e) {
    return fail(ExitStatus::numeric_failure, e.what());
  }
  for (const auto& f : result.files) std::cout << f.string() << "\n";
  if (result.status != ExitStatus::ok) return fail(result.status, result.message);
  std::cerr << "cachenet: " << to_string(cfg.experiment) << ": " << result.message << "\n";
  return 0;
}
