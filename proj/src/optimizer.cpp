#include "cachenet/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cachenet/errors.hpp"

namespace cachenet {

namespace {

bool near(double a, double b, double rel = 1e-9) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

double spent(const CacheEconomics& e, double lambda, double s) {
  return e.price_sc() * lambda + e.price_storage() * lambda * s;
}

void check_affordable(const CacheEconomics& e) {
  if (e.budget() < e.price_sc() * e.lambda_min())
    throw InfeasibleError("budget " + std::to_string(e.budget()) +
                          " $/m^2 cannot pay for lambda_min SCs");
}

DeploymentSolution make_solution(const CacheEconomics& e, double lambda, double s, double value) {
  DeploymentSolution sol{};
  sol.lambda_star = lambda;
  sol.s_star = s;
  sol.objective_value = value;
  sol.budget_spent = spent(e, lambda, s);
  if (near(sol.budget_spent, e.budget())) sol.binding_constraints.insert(Constraint::budget);
  if (near(lambda, e.lambda_min(), 1e-12)) sol.binding_constraints.insert(Constraint::lambda_min);
  if (near(lambda, e.lambda_max(), 1e-12)) sol.binding_constraints.insert(Constraint::lambda_max);
  if (s >= e.s_max()) sol.binding_constraints.insert(Constraint::s_max);
  if (s <= 0.0) sol.binding_constraints.insert(Constraint::s_nonneg);
  return sol;
}

bool all_max_affordable(const CacheEconomics& e) {
  return spent(e, e.lambda_max(), e.s_max()) <= e.budget();
}

}  // namespace

std::string_view to_string(Problem p) { return p == Problem::p1_ase ? "P1" : "P2"; }

std::string_view to_string(Objective o) {
  switch (o) {
    case Objective::ase_static:
      return "ase_static";
    case Objective::ase_dynamic:
      return "ase_dynamic";
    case Objective::ee_static:
      return "ee_static";
    case Objective::ee_dynamic:
      return "ee_dynamic";
  }
  return "?";
}

std::string_view to_string(Constraint c) {
  switch (c) {
    case Constraint::budget:
      return "budget";
    case Constraint::lambda_min:
      return "lambda_min";
    case Constraint::lambda_max:
      return "lambda_max";
    case Constraint::s_max:
      return "s_max";
    case Constraint::s_nonneg:
      return "s_nonneg";
  }
  return "?";
}

Objective objective_for(Problem problem, Policy policy) {
  if (policy == Policy::dynamic_bound) throw DomainError("optimizer: policy must be static or dynamic");
  const bool dyn = policy == Policy::dynamic_assoc;
  if (problem == Problem::p1_ase) return dyn ? Objective::ase_dynamic : Objective::ase_static;
  return dyn ? Objective::ee_dynamic : Objective::ee_static;
}

std::string DeploymentSolution::binding_string() const {
  std::string out;
  for (Constraint c : binding_constraints) {
    if (!out.empty()) out += '|';
    out += to_string(c);
  }
  return out;
}

LambdaInterval budget_interval(const CacheEconomics& e) {
  check_affordable(e);
  if (all_max_affordable(e))
    throw InfeasibleError("budget exceeds the cost of (lambda_max, s_max); no budget-tight curve");
  const double low = std::max(e.lambda_min(), e.budget() / (e.price_sc() + e.price_storage() * e.s_max()));
  const double high = std::min(e.lambda_max(), e.budget() / e.price_sc());
  return {low, high};
}

double s_on_budget(const CacheEconomics& e, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("s_on_budget: lambda must be > 0");
  const double s = (e.budget() / lambda - e.price_sc()) / e.price_storage();
  return std::clamp(s, 0.0, e.s_max());
}

std::vector<double> log_space(double low, double high, int n) {
  if (n < 2) throw DomainError("log_space: need at least 2 points");
  std::vector<double> out(static_cast<std::size_t>(n), low);
  if (low == high) return out;
  const double a = std::log(low);
  const double b = std::log(high);
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (n - 1));
  out.front() = low;
  out.back() = high;
  return out;
}

FeasibleCurve feasible_curve(const CacheEconomics& econ, int n_points) {
  if (n_points < 2) throw DomainError("feasible_curve: n_points must be >= 2");
  const LambdaInterval iv = budget_interval(econ);
  FeasibleCurve curve{econ.budget(), {}};
  for (double lambda : log_space(iv.low, iv.high, n_points))
    curve.points.push_back({lambda, s_on_budget(econ, lambda)});
  return curve;
}

double objective_value(Objective objective, const NetworkParams& params_template,
                       const CacheEconomics& econ, double lambda, double storage,
                       const QuadratureSpec& quad) {
  const NetworkParams params = params_template.with_lambda(lambda);
  const CacheEconomics at = econ.with_storage(storage);
  const double p_hit = hit_probability(storage, econ.catalog_size());
  switch (objective) {
    case Objective::ase_static:
      return ase(Policy::static_assoc, params, p_hit, quad);
    case Objective::ase_dynamic:
      return ase(Policy::dynamic_assoc, params, p_hit, quad);
    case Objective::ee_static:
      return energy_efficiency(Policy::static_assoc, params, at, quad);
    case Objective::ee_dynamic:
      return energy_efficiency(Policy::dynamic_assoc, params, at, quad);
  }
  throw DomainError("unknown objective");
}

DeploymentSolution solve_p1(const CacheEconomics& e, const NetworkParams& params_template, Policy policy,
                            const QuadratureSpec& quad) {
  check_affordable(e);
  const double lambda = std::min(e.budget() / e.price_sc(), e.lambda_max());
  const double s = s_on_budget(e, lambda);
  const Objective obj = objective_for(Problem::p1_ase, policy);
  return make_solution(e, lambda, s, objective_value(obj, params_template, e, lambda, s, quad));
}

DeploymentSolution solve_p2(const CacheEconomics& e, const NetworkParams& params_template, Policy policy,
                            const QuadratureSpec& quad) {
  check_affordable(e);
  const double s = std::min((e.budget() / e.lambda_min() - e.price_sc()) / e.price_storage(), e.s_max());
  // Only reachable with s == s_max: the whole box is affordable.
  const double lambda = std::min(e.budget() / (e.price_sc() + e.price_storage() * s), e.lambda_max());
  const Objective obj = objective_for(Problem::p2_ee, policy);
  return make_solution(e, lambda, s, objective_value(obj, params_template, e, lambda, s, quad));
}

DeploymentSolution solve(Problem problem, const CacheEconomics& econ, const NetworkParams& params_template,
                         Policy policy, const QuadratureSpec& quad) {
  return problem == Problem::p1_ase ? solve_p1(econ, params_template, policy, quad)
                                    : solve_p2(econ, params_template, policy, quad);
}

DeploymentSolution grid_verify(Objective objective, const CacheEconomics& econ,
                               const NetworkParams& params_template, int resolution,
                               const QuadratureSpec& quad, GridMode mode) {
  if (resolution < 16) throw DomainError("grid_verify: resolution must be >= 16");
  check_affordable(econ);

  std::vector<CurvePoint> cells;
  if (all_max_affordable(econ)) {
    cells.push_back({econ.lambda_max(), econ.s_max()});
  } else if (mode == GridMode::budget_curve) {
    cells = feasible_curve(econ, resolution).points;
  } else {
    const std::vector<double> lambdas = log_space(econ.lambda_min(), econ.lambda_max(), resolution);
    for (double lambda : lambdas) {
      for (int j = 0; j < resolution; ++j) {
        const double s = econ.s_max() * j / (resolution - 1);
        if (spent(econ, lambda, s) <= econ.budget() * (1.0 + 1e-12)) cells.push_back({lambda, s});
      }
    }
    if (cells.empty()) throw InfeasibleError("grid_verify: no budget-feasible grid cell");
  }

  std::vector<double> values(cells.size());
  std::vector<int> failed(cells.size(), 0);
  const auto n = static_cast<std::int64_t>(cells.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      values[k] = objective_value(objective, params_template, econ, cells[k].lambda, cells[k].s, quad);
    } catch (...) {
      failed[k] = 1;
    }
  }
  for (std::size_t k = 0; k < cells.size(); ++k) {
    // Re-run serially so the original exception propagates.
    if (failed[k]) objective_value(objective, params_template, econ, cells[k].lambda, cells[k].s, quad);
  }

  // Fixed scan order; strict improvement keeps the smallest lambda on ties.
  std::size_t best = 0;
  for (std::size_t k = 1; k < cells.size(); ++k) {
    const bool better = values[k] > values[best] ||
                        (values[k] == values[best] && cells[k].lambda < cells[best].lambda);
    if (better) best = k;
  }
  return make_solution(econ, cells[best].lambda, cells[best].s, values[best]);
}

}  // namespace cachenet
