#pragma once

// Budget-constrained choice of SC density and per-SC storage.
//   (P1) maximize ASE,  (P2) maximize EE,
//   subject to  p_sc * lambda + p_storage * lambda * S <= c,
//               lambda in [lambda_min, lambda_max],  S in [0, s_max].

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cachenet/analytic.hpp"
#include "cachenet/core_model.hpp"

namespace cachenet {

enum class Problem { p1_ase, p2_ee };
enum class Objective { ase_static, ase_dynamic, ee_static, ee_dynamic };
enum class Constraint { budget, lambda_min, lambda_max, s_max, s_nonneg };

std::string_view to_string(Problem p);
std::string_view to_string(Objective o);
std::string_view to_string(Constraint c);
Objective objective_for(Problem problem, Policy policy);

struct DeploymentSolution {
  double lambda_star;
  double s_star;
  double objective_value;
  double budget_spent;  // $/m^2
  std::set<Constraint> binding_constraints;

  /// Binding constraints joined with '|', e.g. "budget|lambda_max".
  std::string binding_string() const;
};

struct CurvePoint {
  double lambda;
  double s;
};

struct FeasibleCurve {
  double budget;
  std::vector<CurvePoint> points;  // ascending lambda
};

struct LambdaInterval {
  double low;
  double high;
};

/// Range of lambda on which the budget can be spent exactly within the box.
/// Throws InfeasibleError if c < p_sc * lambda_min, or if even the largest
/// deployment (lambda_max, s_max) leaves budget unspent.
LambdaInterval budget_interval(const CacheEconomics& econ);

/// clamp((c / lambda - p_sc) / p_storage, 0, s_max).
double s_on_budget(const CacheEconomics& econ, double lambda);

/// n_points >= 2 log-spaced samples of the budget-equality curve.
FeasibleCurve feasible_curve(const CacheEconomics& econ, int n_points);

/// ASE or EE at (lambda, S); the network template supplies everything else.
double objective_value(Objective objective, const NetworkParams& params_template,
                       const CacheEconomics& econ, double lambda, double storage,
                       const QuadratureSpec& quad = {});

/// (P1) closed form: lambda* = min(c / p_sc, lambda_max), S* from the residual.
DeploymentSolution solve_p1(const CacheEconomics& econ, const NetworkParams& params_template,
                            Policy policy = Policy::dynamic_assoc, const QuadratureSpec& quad = {});

/// (P2) closed form: S* = min((c / lambda_min - p_sc) / p_storage, s_max),
/// lambda* = c / (p_sc + p_storage S*).
DeploymentSolution solve_p2(const CacheEconomics& econ, const NetworkParams& params_template,
                            Policy policy = Policy::dynamic_assoc, const QuadratureSpec& quad = {});

DeploymentSolution solve(Problem problem, const CacheEconomics& econ,
                         const NetworkParams& params_template, Policy policy,
                         const QuadratureSpec& quad = {});

enum class GridMode {
  budget_curve,  // log-spaced lambda on the budget-equality curve
  full_box,      // resolution x resolution box, budget-feasible cells only
};

/// Exhaustive search, evaluated in parallel; ties go to the smallest lambda.
/// resolution >= 16.
DeploymentSolution grid_verify(Objective objective, const CacheEconomics& econ,
                               const NetworkParams& params_template, int resolution,
                               const QuadratureSpec& quad = {},
                               GridMode mode = GridMode::budget_curve);

/// Log-spaced samples, endpoints included exactly.
std::vector<double> log_space(double low, double high, int n);

}  // namespace cachenet
