#pragma once

// Line-oriented experiment configuration:
//
//   # comment
//   theta  = 1.0
//   budget = 1, 2.5, 5
//
// Keys are fixed (see config_keys()); anything missing takes the reference
// scenario default. Every value is checked against the invariants of the
// type that owns it before any experiment runs.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cachenet/analytic.hpp"
#include "cachenet/core_model.hpp"
#include "cachenet/montecarlo.hpp"

namespace cachenet {

enum class Experiment { sweep_hit, feasible_set, sweep_density_ase, sweep_density_ee, optimize, validate };
enum class Scale { lin, log };
enum class ProblemSelection { both, p1, p2 };

std::string_view to_string(Experiment e);
Experiment parse_experiment(std::string_view name);  // throws ConfigError

struct ExperimentConfig {
  Experiment experiment = Experiment::sweep_hit;
  NetworkParams::Values network{};
  CacheEconomics::Values economics{};
  std::vector<double> budgets{1.0, 2.5, 5.0};

  // sweep_hit grid over the cache hit probability
  double hit_start = 0.0;
  double hit_stop = 1.0;
  int hit_points = 21;
  Scale hit_scale = Scale::lin;

  // density sweeps and feasible_set sample the budget curve
  int density_points = 64;
  Scale density_scale = Scale::log;

  // Monte Carlo
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 1;
  double truncation_fraction = 1e-4;
  bool correlated_hops = false;
  bool stratified = false;

  // validate campaign
  std::vector<double> validate_lambda{1e-4, 1e-3, 1e-2};
  std::vector<double> validate_p_hit{0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<double> validate_theta{0.5, 1.0, 2.0};
  double validate_sigmas = 3.0;
  double validate_pass_fraction = 0.95;

  // optimize
  ProblemSelection problem = ProblemSelection::both;
  int grid_resolution = 512;

  QuadratureSpec quadrature{};

  std::string out_dir = "out";

  bool operator==(const ExperimentConfig&) const = default;

  NetworkParams network_params() const { return NetworkParams(network); }
  CacheEconomics economics_for(double budget) const;
  SimulationSpec simulation(Policy policy) const;

  /// Checks every invariant; throws ConfigError naming the offending key.
  void validate() const;
};

struct ConfigKeyDoc {
  std::string_view key;
  std::string_view units;
  std::string_view description;
};

/// Every accepted key, in emission order.
std::span<const ConfigKeyDoc> config_keys();

/// Parses and validates. Throws ConfigError on an empty document, unknown or
/// repeated keys, unparseable values and invariant violations.
ExperimentConfig parse_config(std::string_view text);

/// Sets one key on an existing configuration (no cross-field validation).
void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value);

/// Effective configuration with every key; parse_config(emit_config(c)) == c.
std::string emit_config(const ExperimentConfig& cfg);

/// Current value of `key` in config syntax.
std::string config_value(const ExperimentConfig& cfg, std::string_view key);

/// Decimal, at most 12 significant digits, locale independent.
std::string format_number(double x);

}  // namespace cachenet
