#include <string>

#include "cachenet/config.hpp"
#include "cachenet/errors.hpp"
#include "doctest.h"

using namespace cachenet;

namespace {

std::string config_error_key(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<accepted>";
}

std::string config_error_text(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "<accepted>";
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("single key, defaults elsewhere") {
    const ExperimentConfig c = parse_config("theta = 1.0\n");
    CHECK(c == ExperimentConfig{});
    CHECK(c.network.lambda == 1e-2);
    CHECK(c.network.alpha == 4.0);
    CHECK(c.economics.catalog_size == 10'000'000u);
    CHECK(c.budgets == std::vector<double>{1.0, 2.5, 5.0});
  }

  TEST_CASE("comments, whitespace and lists") {
    const ExperimentConfig c = parse_config(
        "# reference scenario with a different budget list\n"
        "\n"
        "  experiment = optimize   # trailing comment\n"
        "budget=1,2 , 3.5\r\n"
        "problem = P2\n"
        "stratified = true\n"
        "trials = 1e5\n"
        "hit_scale = log\n"
        "hit_start = 0.01\n");
    CHECK(c.experiment == Experiment::optimize);
    CHECK(c.budgets == std::vector<double>{1.0, 2.0, 3.5});
    CHECK(c.problem == ProblemSelection::p2);
    CHECK(c.stratified);
    CHECK(c.trials == 100'000u);
    CHECK(c.hit_scale == Scale::log);
  }

  TEST_CASE("rejections name the key and the constraint") {
    CHECK(config_error_key("alpha = 2") == "alpha");
    CHECK(config_error_text("alpha = 2").find("> 2") != std::string::npos);
    CHECK(config_error_key("beta_bh = 0.4\nbeta_ut = 0.5") == "beta_bh");
    CHECK(config_error_text("beta_bh = 0.4\nbeta_ut = 0.5").find("beta_ut") != std::string::npos);
    CHECK(config_error_key("e_miss = 0.5") == "e_miss");
    CHECK(config_error_key("colour = blue") == "colour");
    CHECK(config_error_text("colour = blue").find("unknown") != std::string::npos);
    CHECK(config_error_key("theta = fast") == "theta");
    CHECK(config_error_key("theta = 1.0x") == "theta");
    CHECK(config_error_key("theta = 1\ntheta = 2") == "theta");
    CHECK(config_error_key("theta =") == "theta");
    CHECK(config_error_key("theta = 0") == "theta");
    CHECK(config_error_key("trials = 0") == "trials");
    CHECK(config_error_key("trials = -3") == "trials");
    CHECK(config_error_key("truncation_fraction = 0.5") == "truncation_fraction");
    CHECK(config_error_key("experiment = figure9") == "experiment");
    CHECK(config_error_key("stratified = maybe") == "stratified");
    CHECK(config_error_key("validate_p_hit = 0, 1.5") == "validate_p_hit");
    CHECK(config_error_key("grid_resolution = 8") == "grid_resolution");
    CHECK(config_error_key("quad_tolerance = 0.1") == "quad_tolerance");
    CHECK(config_error_key("storage_size = 6e6") == "storage_size");
    CHECK(config_error_key("hit_scale = log") == "hit_scale");
    CHECK(config_error_key("budget = 1,,2") == "budget");
    CHECK(config_error_key("just some words") == "");
  }

  TEST_CASE("empty documents are rejected") {
    CHECK_THROWS_AS(parse_config(""), ConfigError);
    CHECK_THROWS_AS(parse_config("# only a comment\n\n   \n"), ConfigError);
  }

  TEST_CASE("emit and re-parse round trip") {
    ExperimentConfig c;
    CHECK(parse_config(emit_config(c)) == c);

    c.experiment = Experiment::validate;
    c.network.lambda = 1.0 / 3.0;
    c.network.theta = 0.1 + 0.2;
    c.network.sigma2 = 1.2345678901234567e-13;
    c.economics.price_storage = 0.0049999999999;
    c.budgets = {0.7, 1.1, 2.9};
    c.seed = 18'446'744'073'709'551'615ULL;
    c.trials = 123'457;
    c.correlated_hops = true;
    c.problem = ProblemSelection::p1;
    c.density_scale = Scale::lin;
    c.quadrature.relative_tolerance = 3e-11;
    c.out_dir = "runs/a b";
    const ExperimentConfig back = parse_config(emit_config(c));
    CHECK(back == c);
    CHECK(emit_config(back) == emit_config(c));
  }

  TEST_CASE("every documented key is emitted") {
    const std::string text = emit_config(ExperimentConfig{});
    for (const ConfigKeyDoc& k : config_keys()) {
      CHECK(text.find(std::string(k.key) + " = ") != std::string::npos);
      CHECK_FALSE(k.description.empty());
      CHECK_NOTHROW(config_value(ExperimentConfig{}, k.key));
    }
    CHECK_THROWS_AS(config_value(ExperimentConfig{}, "nope"), ConfigError);
  }

  TEST_CASE("apply_setting") {
    ExperimentConfig c;
    apply_setting(c, "seed", "9");
    apply_setting(c, "budget", "4");
    CHECK(c.seed == 9u);
    CHECK(c.budgets == std::vector<double>{4.0});
    CHECK(config_value(c, "budget") == "4");
    CHECK_THROWS_AS(apply_setting(c, "sead", "9"), ConfigError);
  }

  TEST_CASE("derived objects") {
    ExperimentConfig c;
    c.trials = 77;
    c.stratified = true;
    const SimulationSpec s = c.simulation(Policy::static_assoc);
    CHECK(s.trials == 77u);
    CHECK(s.stratified);
    CHECK(s.policy == Policy::static_assoc);
    CHECK(c.economics_for(2.5).budget() == 2.5);
    CHECK(c.network_params() == NetworkParams());
  }

  TEST_CASE("number formatting") {
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(1e-2) == "0.01");
    CHECK(format_number(2.5) == "2.5");
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(format_number(1.9801980198019803e-4) == "0.00019801980198");
    CHECK(format_number(5e6) == "5000000");
    CHECK(format_number(1.5e-9) == "1.5e-09");
    CHECK(format_number(-0.25) == "-0.25");
  }

  TEST_CASE("experiment names") {
    for (Experiment e : {Experiment::sweep_hit, Experiment::feasible_set, Experiment::sweep_density_ase,
                         Experiment::sweep_density_ee, Experiment::optimize, Experiment::validate})
      CHECK(parse_experiment(to_string(e)) == e);
  }
}
