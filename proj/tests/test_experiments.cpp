#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cachenet/experiments.hpp"
#include "doctest.h"
#include "oracle.hpp"

using namespace cachenet;
namespace fs = std::filesystem;
using doctest::Approx;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("cachenet_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

ExperimentConfig config_for(Experiment e, const fs::path& dir) {
  ExperimentConfig c;
  c.experiment = e;
  c.out_dir = dir.string();
  return c;
}

}  // namespace

TEST_SUITE("experiments") {
  TEST_CASE("sweep points") {
    const auto lin = sweep_points(0.0, 1.0, 5, Scale::lin);
    CHECK(lin == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    const auto lg = sweep_points(1e-3, 1.0, 4, Scale::log);
    CHECK(lg.front() == 1e-3);
    CHECK(lg.back() == 1.0);
    CHECK(lg[1] == Approx(1e-2).epsilon(1e-14));
  }

  TEST_CASE("sweep_hit") {
    const fs::path dir = scratch("sweep_hit");
    const RunResult r = run(config_for(Experiment::sweep_hit, dir));
    REQUIRE(r.status == ExitStatus::ok);
    CHECK(fs::exists(dir / "sweep_hit.gp"));
    CHECK(fs::exists(dir / "config.txt"));
    const auto rows = read_csv(dir / "sweep_hit.csv");
    REQUIRE(rows.size() == 22);
    CHECK(rows[0] == std::vector<std::string>{"p_hit", "ase_static", "ase_dynamic", "ase_dynamic_lb"});
    double prev_gap = 1e9;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const double st = std::stod(rows[i][1]), dy = std::stod(rows[i][2]), lb = std::stod(rows[i][3]);
      CHECK(dy >= st);
      CHECK(lb <= dy);
      const double gap = dy - lb;
      CHECK(gap <= prev_gap + 1e-15);
      prev_gap = gap;
    }
    CHECK(std::stod(rows[1][2]) == Approx(0.01 * oracle::success_dynamic[0]).epsilon(1e-10));
    fs::remove_all(dir);
  }

  TEST_CASE("feasible_set") {
    const fs::path dir = scratch("feasible");
    const RunResult r = run(config_for(Experiment::feasible_set, dir));
    REQUIRE(r.status == ExitStatus::ok);
    for (const char* name : {"feasible_set_c1.csv", "feasible_set_c2.5.csv", "feasible_set_c5.csv"}) {
      const auto rows = read_csv(dir / name);
      REQUIRE(rows.size() == 65);
      CHECK(rows[0] == std::vector<std::string>{"lambda", "s"});
    }
    const auto one = read_csv(dir / "feasible_set_c1.csv");
    CHECK(one[1] == std::vector<std::string>{"0.0001", "1950000"});
    CHECK(one.back() == std::vector<std::string>{"0.004", "0"});
    fs::remove_all(dir);
  }

  TEST_CASE("density sweeps are monotone and dynamic dominates") {
    for (bool energy : {false, true}) {
      const fs::path dir = scratch(energy ? "density_ee" : "density_ase");
      const RunResult r =
          run(config_for(energy ? Experiment::sweep_density_ee : Experiment::sweep_density_ase, dir));
      REQUIRE(r.status == ExitStatus::ok);
      for (const char* tag : {"c1", "c2.5", "c5"}) {
        const auto rows = read_csv(dir / (std::string(energy ? "sweep_density_ee_" : "sweep_density_ase_") + tag + ".csv"));
        REQUIRE(rows.size() == 65);
        CHECK(rows[0] ==
              std::vector<std::string>{"lambda", "s_on_budget", "p_hit", "metric_static", "metric_dynamic"});
        for (std::size_t i = 2; i < rows.size(); ++i) {
          const double st = std::stod(rows[i][3]), dy = std::stod(rows[i][4]);
          const double pst = std::stod(rows[i - 1][3]), pdy = std::stod(rows[i - 1][4]);
          if (energy) {
            CHECK(st <= pst);
            CHECK(dy <= pdy);
          } else {
            CHECK(st >= pst);
            CHECK(dy >= pdy);
          }
          CHECK(dy >= st);
        }
      }
      fs::remove_all(dir);
    }
  }

  TEST_CASE("optimize writes one row per problem, policy and budget") {
    const fs::path dir = scratch("optimize");
    ExperimentConfig c = config_for(Experiment::optimize, dir);
    c.grid_resolution = 64;
    const RunResult r = run(c);
    REQUIRE(r.status == ExitStatus::ok);
    CHECK(r.files.size() == 2 * 12 + 1);
    const auto rows = read_csv(dir / "optimize_P1_dynamic_c5.csv");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == std::vector<std::string>{"problem", "policy", "budget", "lambda_star", "s_star", "objective",
                                              "grid_lambda", "grid_s", "grid_objective", "budget_spent", "binding"});
    CHECK(rows[1][0] == "P1");
    CHECK(rows[1][1] == "dynamic");
    CHECK(rows[1][3] == "0.01");
    CHECK(rows[1][4] == "50000");
    const auto p2 = read_csv(dir / "optimize_P2_static_c1.csv");
    CHECK(p2[1][3] == "0.0001");
    CHECK(p2[1][4] == "1950000");
    fs::remove_all(dir);
  }

  TEST_CASE("validate flags every cell and derives seeds per cell") {
    const fs::path dir = scratch("validate");
    ExperimentConfig c = config_for(Experiment::validate, dir);
    c.trials = 400;
    c.validate_lambda = {1e-3};
    c.validate_p_hit = {0.0, 1.0};
    c.validate_theta = {1.0};
    c.validate_pass_fraction = 0.0;
    const RunResult r = run(c);
    REQUIRE(r.status == ExitStatus::ok);
    const auto rows = read_csv(dir / "validate.csv");
    REQUIRE(rows.size() == 5);
    CHECK(rows[0] ==
          std::vector<std::string>{"policy", "lambda", "p_hit", "theta", "analytic", "p_hat", "std_error", "pass"});
    CHECK(rows[1][0] == "static");
    CHECK(rows[3][0] == "dynamic");
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK((rows[i][7] == "pass" || rows[i][7] == "fail"));
    fs::remove_all(dir);
  }

  TEST_CASE("a failing validation campaign maps to the validation exit status") {
    const fs::path dir = scratch("validate_fail");
    ExperimentConfig c = config_for(Experiment::validate, dir);
    c.trials = 50;
    c.validate_lambda = {1e-3};
    c.validate_p_hit = {0.5};
    c.validate_theta = {1.0};
    c.validate_sigmas = 1e-9;  // nothing lands inside a vanishing band
    const RunResult r = run(c);
    CHECK(r.status == ExitStatus::validation_failure);
    CHECK(fs::exists(dir / "validate.csv"));
    fs::remove_all(dir);
  }

  TEST_CASE("error statuses and no partial output") {
    const fs::path dir = scratch("errors");
    ExperimentConfig c = config_for(Experiment::feasible_set, dir);
    c.budgets = {1.0, 0.001};  // the second budget cannot buy lambda_min
    RunResult r = run(c);
    CHECK(r.status == ExitStatus::infeasible);
    CHECK(r.files.empty());
    CHECK_FALSE(fs::exists(dir));

    c = config_for(Experiment::sweep_hit, dir);
    c.network.alpha = 1.5;
    r = run(c);
    CHECK(r.status == ExitStatus::config_error);
    CHECK_FALSE(fs::exists(dir));

    c = config_for(Experiment::sweep_hit, dir);
    c.quadrature.initial_nodes = 8;
    c.quadrature.max_doublings = 1;
    c.quadrature.relative_tolerance = 1e-12;
    c.network.beta_ut = 0.95;
    c.network.theta = 100.0;
    r = run(c);
    CHECK(r.status == ExitStatus::numeric_failure);
    CHECK_FALSE(fs::exists(dir));
  }

  TEST_CASE("identical configuration gives byte-identical files") {
    for (Experiment e : {Experiment::sweep_hit, Experiment::feasible_set, Experiment::sweep_density_ee,
                         Experiment::optimize, Experiment::validate}) {
      const fs::path a = scratch("det_a"), b = scratch("det_b");
      ExperimentConfig ca = config_for(e, a);
      ca.trials = 200;
      ca.grid_resolution = 32;
      ca.validate_lambda = {1e-2};
      ca.validate_theta = {2.0};
      ExperimentConfig cb = ca;
      cb.out_dir = b.string();
      const RunResult ra = run(ca), rb = run(cb);
      REQUIRE(ra.files.size() == rb.files.size());
      for (std::size_t i = 0; i < ra.files.size(); ++i) {
        CHECK(ra.files[i].filename() == rb.files[i].filename());
        if (ra.files[i].filename() != "config.txt") CHECK(slurp(ra.files[i]) == slurp(rb.files[i]));
      }
      fs::remove_all(a);
      fs::remove_all(b);
    }
  }
}
