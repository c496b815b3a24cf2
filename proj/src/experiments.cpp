#include "cachenet/experiments.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "cachenet/errors.hpp"
#include "cachenet/optimizer.hpp"
#include "cachenet/rng.hpp"

namespace cachenet {

namespace fs = std::filesystem;

namespace {

struct OutputFile {
  std::string name;
  std::string content;
};

class Csv {
 public:
  explicit Csv(std::vector<std::string> columns) : columns_(std::move(columns)) { row(columns_); }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) text_ += ',';
      text_ += cells[i];
    }
    text_ += '\n';
  }

  const std::string& text() const { return text_; }

 private:
  std::vector<std::string> columns_;
  std::string text_;
};

std::string budget_tag(double c) { return "c" + format_number(c); }

struct PlotSpec {
  std::string xlabel;
  std::string ylabel;
  bool logx = false;
  bool logy = false;
  std::string plot;  // body of the plot command, file name already substituted
};

std::string gnuplot(const std::string& csv_name, const PlotSpec& p) {
  std::string png = csv_name.substr(0, csv_name.size() - 4) + ".png";
  std::ostringstream os;
  os << "set datafile separator ','\n"
     << "set key autotitle columnhead\n"
     << "set terminal pngcairo size 900,600\n"
     << "set output '" << png << "'\n"
     << "set xlabel '" << p.xlabel << "'\n"
     << "set ylabel '" << p.ylabel << "'\n"
     << "set grid\n";
  if (p.logx) os << "set logscale x\n";
  if (p.logy) os << "set logscale y\n";
  os << "plot " << p.plot << "\n";
  return os.str();
}

void add_pair(std::vector<OutputFile>& out, const std::string& csv_name, const Csv& csv, const PlotSpec& plot) {
  out.push_back({csv_name, csv.text()});
  out.push_back({csv_name.substr(0, csv_name.size() - 4) + ".gp", gnuplot(csv_name, plot)});
}

std::string quoted(const std::string& name) { return "'" + name + "'"; }

// ---------------------------------------------------------------- sweep_hit

std::vector<OutputFile> sweep_hit(const ExperimentConfig& cfg, std::string& message) {
  const NetworkParams params = cfg.network_params();
  Csv csv({"p_hit", "ase_static", "ase_dynamic", "ase_dynamic_lb"});
  for (double p : sweep_points(cfg.hit_start, cfg.hit_stop, cfg.hit_points, cfg.hit_scale)) {
    csv.row({format_number(p), format_number(ase(Policy::static_assoc, params, p, cfg.quadrature)),
             format_number(ase(Policy::dynamic_assoc, params, p, cfg.quadrature)),
             format_number(ase(Policy::dynamic_bound, params, p, cfg.quadrature))});
  }
  const std::string name = "sweep_hit.csv";
  std::vector<OutputFile> out;
  add_pair(out, name, csv,
           {"cache hit probability", "ASE [bps/Hz/m^2]", cfg.hit_scale == Scale::log, false,
            quoted(name) + " using 1:2 with linespoints, '' using 1:3 with linespoints, "
                           "'' using 1:4 with linespoints"});
  message = std::to_string(cfg.hit_points) + " hit probabilities";
  return out;
}

// ------------------------------------------------------ budget-curve sweeps

std::vector<CurvePoint> budget_curve(const ExperimentConfig& cfg, const CacheEconomics& econ) {
  const LambdaInterval range = budget_interval(econ);
  std::vector<CurvePoint> pts;
  for (double l : sweep_points(range.low, range.high, cfg.density_points, cfg.density_scale))
    pts.push_back({l, s_on_budget(econ, l)});
  return pts;
}

std::vector<OutputFile> feasible_set(const ExperimentConfig& cfg, std::string& message) {
  std::vector<OutputFile> out;
  for (double c : cfg.budgets) {
    const CacheEconomics econ = cfg.economics_for(c);
    Csv csv({"lambda", "s"});
    for (const CurvePoint& p : budget_curve(cfg, econ)) csv.row({format_number(p.lambda), format_number(p.s)});
    const std::string name = "feasible_set_" + budget_tag(c) + ".csv";
    add_pair(out, name, csv,
             {"SC density [SCs/m^2]", "storage per SC [files]", true, false,
              quoted(name) + " using 1:2 with lines title 'budget " + format_number(c) + "'"});
  }
  message = std::to_string(cfg.budgets.size()) + " budget curves";
  return out;
}

std::vector<OutputFile> sweep_density(const ExperimentConfig& cfg, bool energy, std::string& message) {
  std::vector<OutputFile> out;
  const NetworkParams base = cfg.network_params();
  for (double c : cfg.budgets) {
    const CacheEconomics econ = cfg.economics_for(c);
    Csv csv({"lambda", "s_on_budget", "p_hit", "metric_static", "metric_dynamic"});
    for (const CurvePoint& p : budget_curve(cfg, econ)) {
      const NetworkParams params = base.with_lambda(p.lambda);
      const double hit = hit_probability(p.s, econ.catalog_size());
      double m_static, m_dynamic;
      if (energy) {
        const CacheEconomics at = econ.with_storage(p.s);
        m_static = energy_efficiency(Policy::static_assoc, params, at, cfg.quadrature);
        m_dynamic = energy_efficiency(Policy::dynamic_assoc, params, at, cfg.quadrature);
      } else {
        m_static = ase(Policy::static_assoc, params, hit, cfg.quadrature);
        m_dynamic = ase(Policy::dynamic_assoc, params, hit, cfg.quadrature);
      }
      csv.row({format_number(p.lambda), format_number(p.s), format_number(hit), format_number(m_static),
               format_number(m_dynamic)});
    }
    const std::string name =
        std::string(energy ? "sweep_density_ee_" : "sweep_density_ase_") + budget_tag(c) + ".csv";
    add_pair(out, name, csv,
             {"SC density [SCs/m^2]", energy ? "EE [bit/J]" : "ASE [bps/Hz/m^2]", true, true,
              quoted(name) + " using 1:4 with linespoints, '' using 1:5 with linespoints"});
  }
  message = std::to_string(cfg.budgets.size()) + " budget curves";
  return out;
}

// ----------------------------------------------------------------- optimize

std::vector<OutputFile> optimize(const ExperimentConfig& cfg, std::string& message) {
  std::vector<Problem> problems;
  if (cfg.problem != ProblemSelection::p2) problems.push_back(Problem::p1_ase);
  if (cfg.problem != ProblemSelection::p1) problems.push_back(Problem::p2_ee);

  const NetworkParams params = cfg.network_params();
  std::vector<OutputFile> out;
  for (Problem problem : problems) {
    for (Policy policy : {Policy::static_assoc, Policy::dynamic_assoc}) {
      for (double c : cfg.budgets) {
        const CacheEconomics econ = cfg.economics_for(c);
        const DeploymentSolution sol = solve(problem, econ, params, policy, cfg.quadrature);
        const DeploymentSolution grid =
            grid_verify(objective_for(problem, policy), econ, params, cfg.grid_resolution, cfg.quadrature);
        Csv csv({"problem", "policy", "budget", "lambda_star", "s_star", "objective", "grid_lambda", "grid_s",
                 "grid_objective", "budget_spent", "binding"});
        const std::string label = problem == Problem::p1_ase ? "P1" : "P2";
        csv.row({label, std::string(to_string(policy)), format_number(c), format_number(sol.lambda_star),
                 format_number(sol.s_star), format_number(sol.objective_value), format_number(grid.lambda_star),
                 format_number(grid.s_star), format_number(grid.objective_value), format_number(sol.budget_spent),
                 sol.binding_string()});
        const std::string name =
            "optimize_" + label + "_" + std::string(to_string(policy)) + "_" + budget_tag(c) + ".csv";
        add_pair(out, name, csv,
                 {"SC density [SCs/m^2]", "storage per SC [files]", true, false,
                  quoted(name) + " using 4:5 with points pt 7 ps 2 title 'closed form', '' using 7:8 with "
                                 "points pt 6 ps 3 title 'grid'"});
      }
    }
  }
  message = std::to_string(out.size() / 2) + " optimizations";
  return out;
}

// ----------------------------------------------------------------- validate

struct ValidationOutcome {
  std::vector<OutputFile> files;
  bool passed = true;
};

ValidationOutcome validate(const ExperimentConfig& cfg, std::string& message) {
  const NetworkParams base = cfg.network_params();
  Csv csv({"policy", "lambda", "p_hit", "theta", "analytic", "p_hat", "std_error", "pass"});
  ValidationOutcome outcome;
  std::ostringstream summary;
  std::uint64_t cell = 0;
  for (Policy policy : {Policy::static_assoc, Policy::dynamic_assoc}) {
    std::size_t cells = 0, passes = 0;
    for (double lambda : cfg.validate_lambda) {
      for (double p : cfg.validate_p_hit) {
        for (double theta : cfg.validate_theta) {
          const NetworkParams params = base.with_lambda(lambda).with_theta(theta);
          const double analytic = success_probability(policy, params, p, cfg.quadrature);
          SimulationSpec spec = cfg.simulation(policy);
          spec.seed = CounterRng::key(cfg.seed, cell++, 0xCE11);
          const SuccessEstimate est = estimate_success(params, p, spec);
          const bool pass = std::abs(est.p_hat - analytic) <= cfg.validate_sigmas * est.std_error;
          ++cells;
          passes += pass ? 1 : 0;
          csv.row({std::string(to_string(policy)), format_number(lambda), format_number(p), format_number(theta),
                   format_number(analytic), format_number(est.p_hat), format_number(est.std_error),
                   pass ? "pass" : "fail"});
        }
      }
    }
    const double fraction = static_cast<double>(passes) / static_cast<double>(cells);
    if (fraction < cfg.validate_pass_fraction) outcome.passed = false;
    summary << to_string(policy) << ' ' << passes << '/' << cells << ' ';
  }
  const std::string name = "validate.csv";
  add_pair(outcome.files, name, csv,
           {"analytic success probability", "Monte Carlo estimate", false, false,
            quoted(name) + " using 5:6:(3*$7) with yerrorbars pt 7 title 'p_hat +- 3 SE', x with lines title 'y = x'"});
  message = summary.str() + "cells within band";
  return outcome;
}

// ------------------------------------------------------------------ output

void write_all(const fs::path& dir, const std::vector<OutputFile>& files, std::vector<fs::path>& written) {
  fs::create_directories(dir);
  for (const OutputFile& f : files) {
    const fs::path path = dir / f.name;
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    os << f.content;
    os.close();
    if (!os) throw std::runtime_error("cannot write " + path.string());
    written.push_back(path);
  }
}

}  // namespace

std::vector<double> sweep_points(double start, double stop, int n, Scale scale) {
  if (n < 2) throw DomainError("points must be >= 2");
  if (!(stop >= start)) throw DomainError("sweep stop must be >= start");
  if (scale == Scale::log) {
    if (!(start > 0.0)) throw DomainError("log sweep needs start > 0");
    return log_space(start, stop, n);
  }
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = start + (stop - start) * i / (n - 1);
  xs.back() = stop;
  return xs;
}

RunResult run(const ExperimentConfig& cfg) {
  RunResult result;
  std::vector<OutputFile> files;
  bool validation_ok = true;
  try {
    cfg.validate();
    switch (cfg.experiment) {
      case Experiment::sweep_hit:
        files = sweep_hit(cfg, result.message);
        break;
      case Experiment::feasible_set:
        files = feasible_set(cfg, result.message);
        break;
      case Experiment::sweep_density_ase:
        files = sweep_density(cfg, false, result.message);
        break;
      case Experiment::sweep_density_ee:
        files = sweep_density(cfg, true, result.message);
        break;
      case Experiment::optimize:
        files = optimize(cfg, result.message);
        break;
      case Experiment::validate: {
        ValidationOutcome v = validate(cfg, result.message);
        files = std::move(v.files);
        validation_ok = v.passed;
        break;
      }
    }
    files.push_back({"config.txt", emit_config(cfg)});
  } catch (const ConfigError& e) {
    return {{}, ExitStatus::config_error, e.what()};
  } catch (const InfeasibleError& e) {
    return {{}, ExitStatus::infeasible, e.what()};
  } catch (const ConvergenceError& e) {
    return {{}, ExitStatus::numeric_failure, e.what()};
  } catch (const DomainError& e) {
    return {{}, ExitStatus::config_error, e.what()};
  }

  try {
    write_all(cfg.out_dir, files, result.files);
  } catch (const std::exception& e) {
    return {std::move(result.files), ExitStatus::config_error, std::string("out_dir: ") + e.what()};
  }
  if (!validation_ok) result.status = ExitStatus::validation_failure;
  return result;
}

}  // namespace cachenet
