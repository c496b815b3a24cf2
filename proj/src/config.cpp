#include "cachenet/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "cachenet/errors.hpp"

namespace cachenet {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::string shortest(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

double to_double(std::string_view key, std::string_view v) {
  v = trim(v);
  double x = 0.0;
  if (!v.empty() && v.front() == '+') v.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
    throw ConfigError(std::string(key), "expected a real number, got '" + std::string(v) + "'");
  return x;
}

std::uint64_t to_u64(std::string_view key, std::string_view v) {
  v = trim(v);
  std::uint64_t x = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec == std::errc() && ptr == v.data() + v.size() && !v.empty()) return x;
  // Accept integral values written in scientific notation, e.g. 1e6.
  const double d = to_double(key, v);
  if (d < 0.0 || d != std::floor(d) || d > 1.8e19)
    throw ConfigError(std::string(key), "expected a non-negative integer, got '" + std::string(v) + "'");
  return static_cast<std::uint64_t>(d);
}

int to_int(std::string_view key, std::string_view v) {
  const std::uint64_t x = to_u64(key, v);
  if (x > 1'000'000'000) throw ConfigError(std::string(key), "value too large");
  return static_cast<int>(x);
}

bool to_bool(std::string_view key, std::string_view v) {
  v = trim(v);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(std::string(key), "expected true or false, got '" + std::string(v) + "'");
}

std::vector<double> to_list(std::string_view key, std::string_view v) {
  std::vector<double> out;
  while (true) {
    const auto comma = v.find(',');
    out.push_back(to_double(key, v.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    v.remove_prefix(comma + 1);
  }
  return out;
}

std::string list_text(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += shortest(xs[i]);
  }
  return out;
}

Scale to_scale(std::string_view key, std::string_view v) {
  v = trim(v);
  if (v == "lin") return Scale::lin;
  if (v == "log") return Scale::log;
  throw ConfigError(std::string(key), "expected lin or log, got '" + std::string(v) + "'");
}

std::string_view scale_text(Scale s) { return s == Scale::lin ? "lin" : "log"; }

ProblemSelection to_problem(std::string_view key, std::string_view v) {
  v = trim(v);
  if (v == "both") return ProblemSelection::both;
  if (v == "P1") return ProblemSelection::p1;
  if (v == "P2") return ProblemSelection::p2;
  throw ConfigError(std::string(key), "expected P1, P2 or both, got '" + std::string(v) + "'");
}

std::string_view problem_text(ProblemSelection p) {
  switch (p) {
    case ProblemSelection::p1:
      return "P1";
    case ProblemSelection::p2:
      return "P2";
    default:
      return "both";
  }
}

struct KeyHandler {
  ConfigKeyDoc doc;
  std::function<void(ExperimentConfig&, std::string_view)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

#define REAL_KEY(name, member, units, desc)                                                        \
  KeyHandler {                                                                                     \
    {name, units, desc}, [](ExperimentConfig& c, std::string_view v) { c.member = to_double(name, v); }, \
        [](const ExperimentConfig& c) { return shortest(c.member); }                               \
  }

const std::vector<KeyHandler>& handlers() {
  static const std::vector<KeyHandler> table = {
      {{"experiment", "", "sweep_hit | feasible_set | sweep_density_ase | sweep_density_ee | optimize | validate"},
       [](ExperimentConfig& c, std::string_view v) { c.experiment = parse_experiment(trim(v)); },
       [](const ExperimentConfig& c) { return std::string(to_string(c.experiment)); }},
      REAL_KEY("lambda", network.lambda, "SCs/m^2", "SC density"),
      REAL_KEY("alpha", network.alpha, "-", "pathloss exponent, > 2"),
      REAL_KEY("theta", network.theta, "linear", "SINR threshold, > 0"),
      REAL_KEY("sigma2", network.sigma2, "W", "noise power, >= 0"),
      REAL_KEY("rho_sc", network.rho_sc, "W", "SC transmit power"),
      REAL_KEY("rho_bh", network.rho_bh, "W", "BH transmit power"),
      REAL_KEY("beta_ut", network.beta_ut, "-", "SC->UT distance coefficient"),
      REAL_KEY("beta_bh", network.beta_bh, "-", "BH->SC distance coefficient, > beta_ut"),
      {{"catalog_size", "files", "catalog size F"},
       [](ExperimentConfig& c, std::string_view v) { c.economics.catalog_size = to_u64("catalog_size", v); },
       [](const ExperimentConfig& c) { return std::to_string(c.economics.catalog_size); }},
      REAL_KEY("storage_size", economics.storage_size, "files/SC", "storage per SC, in [0, s_max]"),
      REAL_KEY("s_max", economics.s_max, "files/SC", "largest storage per SC, <= F"),
      REAL_KEY("lambda_min", economics.lambda_min, "SCs/m^2", "smallest SC density"),
      REAL_KEY("lambda_max", economics.lambda_max, "SCs/m^2", "largest SC density"),
      REAL_KEY("price_sc", economics.price_sc, "$/SC", "price of one SC"),
      REAL_KEY("price_storage", economics.price_storage, "$/file", "price of storing one file"),
      {{"budget", "$/m^2", "comma-separated budgets"},
       [](ExperimentConfig& c, std::string_view v) { c.budgets = to_list("budget", v); },
       [](const ExperimentConfig& c) { return list_text(c.budgets); }},
      REAL_KEY("e_hit", economics.e_hit, "J/file", "energy per cache hit"),
      REAL_KEY("e_miss", economics.e_miss, "J/file", "energy per cache miss, >= e_hit"),
      REAL_KEY("hit_start", hit_start, "-", "sweep_hit: first P_hit"),
      REAL_KEY("hit_stop", hit_stop, "-", "sweep_hit: last P_hit"),
      {{"hit_points", "", "sweep_hit: number of points"},
       [](ExperimentConfig& c, std::string_view v) { c.hit_points = to_int("hit_points", v); },
       [](const ExperimentConfig& c) { return std::to_string(c.hit_points); }},
      {{"hit_scale", "", "sweep_hit: lin | log"},
       [](ExperimentConfig& c, std::string_view v) { c.hit_scale = to_scale("hit_scale", v); },
       [](const ExperimentConfig& c) { return std::string(scale_text(c.hit_scale)); }},
      {{"density_points", "", "points on each budget curve"},
       [](ExperimentConfig& c, std::string_view v) { c.density_points = to_int("density_points", v); },
       [](const ExperimentConfig& c) { return std::to_string(c.density_points); }},
      {{"density_scale", "", "lambda spacing on the budget curve: lin | log"},
       [](ExperimentConfig& c, std::string_view v) { c.density_scale = to_scale("density_scale", v); },
       [](const ExperimentConfig& c) { return std::string(scale_text(c.density_scale)); }},
      {{"trials", "", "Monte Carlo trials per cell"},
       [](ExperimentConfig& c, std::string_view v) { c.trials = to_u64("trials", v); },
       [](const ExperimentConfig& c) { return std::to_string(c.trials); }},
      {{"seed", "", "Monte Carlo seed, u64"},
       [](ExperimentConfig& c, std::string_view v) { c.seed = to_u64("seed", v); },
       [](const ExperimentConfig& c) { return std::to_string(c.seed); }},
      REAL_KEY("truncation_fraction", truncation_fraction, "-",
               "interference mass discarded by the simulation window, in (0, 1e-2)"),
      {{"correlated_hops", "", "static policy: share interferer positions across hops"},
       [](ExperimentConfig& c, std::string_view v) { c.correlated_hops = to_bool("correlated_hops", v); },
       [](const ExperimentConfig& c) { return std::string(c.correlated_hops ? "true" : "false"); }},
      {{"stratified", "", "condition trials on the typical cache state"},
       [](ExperimentConfig& c, std::string_view v) { c.stratified = to_bool("stratified", v); },
       [](const ExperimentConfig& c) { return std::string(c.stratified ? "true" : "false"); }},
      {{"validate_lambda", "SCs/m^2", "validate: densities"},
       [](ExperimentConfig& c, std::string_view v) { c.validate_lambda = to_list("validate_lambda", v); },
       [](const ExperimentConfig& c) { return list_text(c.validate_lambda); }},
      {{"validate_p_hit", "-", "validate: hit probabilities"},
       [](ExperimentConfig& c, std::string_view v) { c.validate_p_hit = to_list("validate_p_hit", v); },
       [](const ExperimentConfig& c) { return list_text(c.validate_p_hit); }},
      {{"validate_theta", "linear", "validate: SINR thresholds"},
       [](ExperimentConfig& c, std::string_view v) { c.validate_theta = to_list("validate_theta", v); },
       [](const ExperimentConfig& c) { return list_text(c.validate_theta); }},
      REAL_KEY("validate_sigmas", validate_sigmas, "-", "validate: pass band in standard errors"),
      REAL_KEY("validate_pass_fraction", validate_pass_fraction, "-",
               "validate: fraction of cells per policy that must pass"),
      {{"problem", "", "optimize: P1 | P2 | both"},
       [](ExperimentConfig& c, std::string_view v) { c.problem = to_problem("problem", v); },
       [](const ExperimentConfig& c) { return std::string(problem_text(c.problem)); }},
      {{"grid_resolution", "", "optimize: lambda points of the verification grid, >= 16"},
       [](ExperimentConfig& c, std::string_view v) { c.grid_resolution = to_int("grid_resolution", v); },
       [](const ExperimentConfig& c) { return std::to_string(c.grid_resolution); }},
      {{"quad_nodes", "", "initial trapezoid nodes, >= 8"},
       [](ExperimentConfig& c, std::string_view v) { c.quadrature.initial_nodes = to_int("quad_nodes", v); },
       [](const ExperimentConfig& c) { return std::to_string(c.quadrature.initial_nodes); }},
      REAL_KEY("quad_tolerance", quadrature.relative_tolerance, "-",
               "relative tolerance of the phi-integral, in (0, 1e-3)"),
      {{"quad_max_doublings", "", "node doublings before giving up"},
       [](ExperimentConfig& c, std::string_view v) { c.quadrature.max_doublings = to_int("quad_max_doublings", v); },
       [](const ExperimentConfig& c) { return std::to_string(c.quadrature.max_doublings); }},
      {{"out_dir", "path", "output directory"},
       [](ExperimentConfig& c, std::string_view v) {
         v = trim(v);
         if (v.empty()) throw ConfigError("out_dir", "must not be empty");
         c.out_dir = std::string(v);
       },
       [](const ExperimentConfig& c) { return c.out_dir; }},
  };
  return table;
}

#undef REAL_KEY

const KeyHandler* find_handler(std::string_view key) {
  for (const KeyHandler& h : handlers())
    if (h.doc.key == key) return &h;
  return nullptr;
}

// Library messages read "<key> must ..."; split off the key.
[[noreturn]] void rethrow_as_config(const DomainError& e) {
  const std::string what = e.what();
  const auto space = what.find(' ');
  const std::string key = what.substr(0, space);
  if (find_handler(key) != nullptr && space != std::string::npos)
    throw ConfigError(key, what.substr(space + 1));
  throw ConfigError("", what);
}

void require(bool ok, std::string_view key, const std::string& what) {
  if (!ok) throw ConfigError(std::string(key), what);
}

void require_probabilities(std::string_view key, const std::vector<double>& xs) {
  require(!xs.empty(), key, "must not be empty");
  for (double x : xs) require(x >= 0.0 && x <= 1.0, key, "entries must lie in [0, 1]");
}

}  // namespace

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::sweep_hit:
      return "sweep_hit";
    case Experiment::feasible_set:
      return "feasible_set";
    case Experiment::sweep_density_ase:
      return "sweep_density_ase";
    case Experiment::sweep_density_ee:
      return "sweep_density_ee";
    case Experiment::optimize:
      return "optimize";
    case Experiment::validate:
      return "validate";
  }
  return "?";
}

Experiment parse_experiment(std::string_view name) {
  for (Experiment e : {Experiment::sweep_hit, Experiment::feasible_set, Experiment::sweep_density_ase,
                       Experiment::sweep_density_ee, Experiment::optimize, Experiment::validate})
    if (to_string(e) == name) return e;
  throw ConfigError("experiment", "unknown experiment '" + std::string(name) + "'");
}

CacheEconomics ExperimentConfig::economics_for(double budget) const {
  CacheEconomics::Values v = economics;
  v.budget = budget;
  return CacheEconomics(v);
}

SimulationSpec ExperimentConfig::simulation(Policy policy) const {
  SimulationSpec s;
  s.trials = trials;
  s.seed = seed;
  s.truncation_fraction = truncation_fraction;
  s.policy = policy;
  s.correlated_hops = correlated_hops;
  s.stratified = stratified;
  return s;
}

void ExperimentConfig::validate() const {
  try {
    NetworkParams{network};
  } catch (const DomainError& e) {
    rethrow_as_config(e);
  }
  require(!budgets.empty(), "budget", "must list at least one value");
  for (double c : budgets) {
    try {
      economics_for(c);
    } catch (const DomainError& e) {
      rethrow_as_config(e);
    }
  }
  require(hit_start >= 0.0 && hit_start <= 1.0, "hit_start", "must lie in [0, 1]");
  require(hit_stop >= hit_start && hit_stop <= 1.0, "hit_stop", "must lie in [hit_start, 1]");
  require(hit_points >= 2, "hit_points", "must be >= 2");
  require(hit_scale == Scale::lin || hit_start > 0.0, "hit_scale", "log spacing needs hit_start > 0");
  require(density_points >= 2, "density_points", "must be >= 2");
  require(trials >= 1, "trials", "must be >= 1");
  require(truncation_fraction > 0.0 && truncation_fraction < 1e-2, "truncation_fraction",
          "must lie in (0, 1e-2)");
  require(!stratified || trials >= 2, "stratified", "needs trials >= 2");
  require(!validate_lambda.empty(), "validate_lambda", "must not be empty");
  for (double l : validate_lambda) require(l > 0.0, "validate_lambda", "entries must be > 0");
  require_probabilities("validate_p_hit", validate_p_hit);
  require(!validate_theta.empty(), "validate_theta", "must not be empty");
  for (double t : validate_theta) require(t > 0.0 && std::isfinite(t), "validate_theta", "entries must be > 0");
  require(validate_sigmas > 0.0, "validate_sigmas", "must be > 0");
  require(validate_pass_fraction >= 0.0 && validate_pass_fraction <= 1.0, "validate_pass_fraction",
          "must lie in [0, 1]");
  require(grid_resolution >= 16, "grid_resolution", "must be >= 16");
  require(quadrature.initial_nodes >= 8, "quad_nodes", "must be >= 8");
  require(quadrature.relative_tolerance > 0.0 && quadrature.relative_tolerance < 1e-3, "quad_tolerance",
          "must lie in (0, 1e-3)");
  require(quadrature.max_doublings >= 1, "quad_max_doublings", "must be >= 1");
}

std::span<const ConfigKeyDoc> config_keys() {
  static const std::vector<ConfigKeyDoc> docs = [] {
    std::vector<ConfigKeyDoc> d;
    for (const KeyHandler& h : handlers()) d.push_back(h.doc);
    return d;
  }();
  return docs;
}

void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
  const KeyHandler* h = find_handler(key);
  if (h == nullptr) throw ConfigError(std::string(key), "unknown key");
  h->set(cfg, value);
}

std::string config_value(const ExperimentConfig& cfg, std::string_view key) {
  const KeyHandler* h = find_handler(key);
  if (h == nullptr) throw ConfigError(std::string(key), "unknown key");
  return h->get(cfg);
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::set<std::string, std::less<>> seen;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("", "line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (find_handler(key) == nullptr) throw ConfigError(std::string(key), "unknown key");
    if (!seen.insert(std::string(key)).second) throw ConfigError(std::string(key), "given more than once");
    if (value.empty()) throw ConfigError(std::string(key), "missing value");
    apply_setting(cfg, key, value);
  }
  if (seen.empty()) throw ConfigError("", "configuration is empty");
  cfg.validate();
  return cfg;
}

std::string emit_config(const ExperimentConfig& cfg) {
  std::string out;
  for (const KeyHandler& h : handlers()) {
    out += h.doc.key;
    out += " = ";
    out += h.get(cfg);
    out += '\n';
  }
  return out;
}

std::string format_number(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 12);
  return std::string(buf, end);
}

}  // namespace cachenet
