#pragma once

// Experiment recipes behind the command-line tool. Every recipe computes its
// full result before touching the output directory, so a failed run leaves
// no files behind.

#include <filesystem>
#include <string>
#include <vector>

#include "cachenet/config.hpp"

namespace cachenet {

enum class ExitStatus : int {
  ok = 0,
  config_error = 2,
  infeasible = 3,
  numeric_failure = 4,
  validation_failure = 5,
};

struct RunResult {
  std::vector<std::filesystem::path> files;  // in the order written
  ExitStatus status = ExitStatus::ok;
  std::string message;
};

/// Runs cfg.experiment and writes CSV + gnuplot script pairs into cfg.out_dir.
/// Never throws for model errors; they are mapped onto the exit status.
RunResult run(const ExperimentConfig& cfg);

/// Sweep abscissae, endpoints exact. Log spacing needs start > 0.
std::vector<double> sweep_points(double start, double stop, int n, Scale scale);

}  // namespace cachenet
