#include <cmath>

#include "cachenet/errors.hpp"
#include "cachenet/optimizer.hpp"
#include "doctest.h"

using namespace cachenet;
using doctest::Approx;

namespace {

CacheEconomics econ(double c) { return CacheEconomics().with_budget(c); }

double log_step(const CacheEconomics& e, int resolution) {
  const LambdaInterval r = budget_interval(e);
  return std::log(r.high / r.low) / (resolution - 1);
}

}  // namespace

TEST_SUITE("optimizer") {
  TEST_CASE("budget curve endpoints") {
    const LambdaInterval one = budget_interval(econ(1.0));
    CHECK(one.low == Approx(1e-4).epsilon(1e-14));
    CHECK(one.high == Approx(4e-3).epsilon(1e-14));
    CHECK(s_on_budget(econ(1.0), 1e-4) == Approx(1.95e6).epsilon(1e-12));
    CHECK(s_on_budget(econ(1.0), 4e-3) == 0.0);
    CHECK(s_on_budget(econ(5.0), 1e-2) == Approx(5e4).epsilon(1e-12));
    CHECK(s_on_budget(econ(5.0), 1e-4) == 5e6);  // clamped to s_max
  }

  TEST_CASE("feasible curve") {
    for (double c : {1.0, 2.5, 5.0}) {
      const CacheEconomics e = econ(c);
      const FeasibleCurve curve = feasible_curve(e, 50);
      CHECK(curve.budget == c);
      REQUIRE(curve.points.size() == 50);
      const LambdaInterval r = budget_interval(e);
      CHECK(curve.points.front().lambda == r.low);
      CHECK(curve.points.back().lambda == r.high);
      for (std::size_t i = 0; i < curve.points.size(); ++i) {
        const CurvePoint& p = curve.points[i];
        CHECK(p.s >= 0.0);
        CHECK(p.s <= e.s_max());
        CHECK(p.lambda >= e.lambda_min());
        CHECK(p.lambda <= e.lambda_max());
        CHECK(e.price_sc() * p.lambda + e.price_storage() * p.lambda * p.s == Approx(c).epsilon(1e-9));
        if (i > 0) {
          CHECK(p.lambda > curve.points[i - 1].lambda);
          CHECK(p.s <= curve.points[i - 1].s);
        }
      }
    }
    CHECK_THROWS_AS(feasible_curve(econ(1.0), 1), DomainError);
  }

  TEST_CASE("infeasible budgets") {
    CHECK_THROWS_AS(budget_interval(econ(0.01)), InfeasibleError);
    CHECK_THROWS_AS(solve_p1(econ(0.01), NetworkParams()), InfeasibleError);
    CHECK_THROWS_AS(solve_p2(econ(0.01), NetworkParams()), InfeasibleError);
    CHECK_THROWS_AS(grid_verify(Objective::ase_dynamic, econ(0.01), NetworkParams(), 16), InfeasibleError);
    // Enough money for everything: no budget-tight curve, but a trivial optimum.
    CHECK_THROWS_AS(budget_interval(econ(1000.0)), InfeasibleError);
    const DeploymentSolution all = solve_p1(econ(1000.0), NetworkParams());
    CHECK(all.lambda_star == 1e-2);
    CHECK(all.s_star == 5e6);
    CHECK_FALSE(all.binding_constraints.contains(Constraint::budget));
    const DeploymentSolution grid = grid_verify(Objective::ee_dynamic, econ(1000.0), NetworkParams(), 16);
    CHECK(grid.lambda_star == 1e-2);
    CHECK(grid.s_star == 5e6);
  }

  TEST_CASE("P1 closed form") {
    const NetworkParams p;
    DeploymentSolution s = solve_p1(econ(1.0), p);
    CHECK(s.lambda_star == Approx(4e-3).epsilon(1e-14));
    CHECK(s.s_star == 0.0);
    CHECK(s.binding_constraints.contains(Constraint::budget));
    CHECK(s.binding_constraints.contains(Constraint::s_nonneg));

    s = solve_p1(econ(2.5), p);
    CHECK(s.lambda_star == 1e-2);
    CHECK(s.s_star == 0.0);
    CHECK(s.binding_string() == "budget|lambda_max|s_nonneg");

    s = solve_p1(econ(5.0), p);
    CHECK(s.lambda_star == 1e-2);
    CHECK(s.s_star == Approx(5e4).epsilon(1e-12));
    CHECK(s.budget_spent == Approx(5.0).epsilon(1e-12));
    CHECK(s.objective_value == Approx(ase(Policy::dynamic_assoc, p, 5e4 / 1e7)).epsilon(1e-12));
  }

  TEST_CASE("P2 closed form") {
    const NetworkParams p;
    DeploymentSolution s = solve_p2(econ(1.0), p);
    CHECK(s.lambda_star == Approx(1e-4).epsilon(1e-14));
    CHECK(s.s_star == Approx(1.95e6).epsilon(1e-12));
    s = solve_p2(econ(2.5), p);
    CHECK(s.lambda_star == Approx(1e-4).epsilon(1e-14));
    CHECK(s.s_star == Approx(4.95e6).epsilon(1e-12));
    s = solve_p2(econ(5.0), p);
    CHECK(s.lambda_star == Approx(5.0 / 25250.0).epsilon(1e-14));
    CHECK(s.lambda_star == Approx(1.9802e-4).epsilon(1e-5));
    CHECK(s.s_star == 5e6);
    CHECK(s.binding_constraints.contains(Constraint::s_max));
    CHECK(s.budget_spent == Approx(5.0).epsilon(1e-12));
  }

  TEST_CASE("S* clamps at s_max when the residual is large") {
    CacheEconomics::Values v;
    v.budget = 200.0;
    v.lambda_max = 0.1;
    v.s_max = 1e5;
    const DeploymentSolution s = solve_p1(CacheEconomics(v), NetworkParams());
    CHECK(s.lambda_star == 0.1);
    CHECK(s.s_star == 1e5);
    CHECK(s.binding_constraints.contains(Constraint::s_max));
  }

  TEST_CASE("closed forms agree with the grid search") {
    const NetworkParams p;
    const int res = 512;
    for (double c : {1.0, 2.5, 5.0}) {
      const CacheEconomics e = econ(c);
      for (Problem prob : {Problem::p1_ase, Problem::p2_ee}) {
        for (Policy pol : {Policy::static_assoc, Policy::dynamic_assoc}) {
          CAPTURE(c);
          CAPTURE(to_string(prob));
          CAPTURE(to_string(pol));
          const DeploymentSolution closed = solve(prob, e, p, pol);
          const DeploymentSolution grid = grid_verify(objective_for(prob, pol), e, p, res);
          CHECK(std::abs(std::log(grid.lambda_star / closed.lambda_star)) <= log_step(e, res) * (1 + 1e-9));
          CHECK(grid.objective_value == Approx(closed.objective_value).epsilon(1e-6));
          CHECK(closed.objective_value >= grid.objective_value * (1 - 1e-12));
        }
      }
    }
  }

  TEST_CASE("grid examples") {
    const NetworkParams p;
    const DeploymentSolution a = grid_verify(Objective::ase_dynamic, econ(5.0), p, 512);
    CHECK(std::abs(std::log(a.lambda_star / 1e-2)) <= log_step(econ(5.0), 512));
    const DeploymentSolution b = grid_verify(Objective::ee_dynamic, econ(1.0), p, 512);
    CHECK(std::abs(std::log(b.lambda_star / 1e-4)) <= log_step(econ(1.0), 512));
    CHECK_THROWS_AS(grid_verify(Objective::ee_dynamic, econ(1.0), p, 15), DomainError);
  }

  TEST_CASE("refining the grid never lowers the objective") {
    const NetworkParams p;
    for (Objective o : {Objective::ase_static, Objective::ase_dynamic, Objective::ee_static, Objective::ee_dynamic}) {
      double prev = -1.0;
      for (int res : {16, 32, 64, 128}) {
        const double v = grid_verify(o, econ(2.5), p, res).objective_value;
        CHECK(v >= prev);
        prev = v;
      }
    }
  }

  TEST_CASE("objectives along the budget curve") {
    const NetworkParams p;
    for (double c : {1.0, 2.5, 5.0}) {
      const CacheEconomics e = econ(c);
      const FeasibleCurve curve = feasible_curve(e, 96);
      double prev_ase[2] = {-1, -1}, prev_ee[2] = {1e300, 1e300};
      for (const CurvePoint& pt : curve.points) {
        const double as = objective_value(Objective::ase_static, p, e, pt.lambda, pt.s);
        const double ad = objective_value(Objective::ase_dynamic, p, e, pt.lambda, pt.s);
        const double es = objective_value(Objective::ee_static, p, e, pt.lambda, pt.s);
        const double ed = objective_value(Objective::ee_dynamic, p, e, pt.lambda, pt.s);
        CHECK(as >= prev_ase[0]);
        CHECK(ad >= prev_ase[1]);
        CHECK(es <= prev_ee[0]);
        CHECK(ed <= prev_ee[1]);
        CHECK(ad >= as);
        CHECK(ed >= es);
        prev_ase[0] = as;
        prev_ase[1] = ad;
        prev_ee[0] = es;
        prev_ee[1] = ed;
      }
    }
  }

  TEST_CASE("full box grid does not beat the budget curve") {
    const NetworkParams p;
    for (Objective o : {Objective::ase_dynamic, Objective::ee_static}) {
      const DeploymentSolution curve = grid_verify(o, econ(2.5), p, 32);
      const DeploymentSolution box = grid_verify(o, econ(2.5), p, 32, {}, GridMode::full_box);
      CHECK(box.objective_value <= curve.objective_value * (1 + 1e-9));
      CHECK(box.budget_spent <= 2.5 * (1 + 1e-9));
    }
  }

  TEST_CASE("ties go to the smallest density") {
    // With a one-point lambda box every cell ties except for storage.
    CacheEconomics::Values v;
    v.lambda_min = v.lambda_max = 1e-3;
    v.budget = 0.5;
    const DeploymentSolution s = grid_verify(Objective::ase_dynamic, CacheEconomics(v), NetworkParams(), 16);
    CHECK(s.lambda_star == 1e-3);
  }

  TEST_CASE("log spacing") {
    const auto xs = log_space(1e-4, 1e-2, 5);
    CHECK(xs.front() == 1e-4);
    CHECK(xs.back() == 1e-2);
    CHECK(xs[2] == Approx(1e-3).epsilon(1e-14));
    CHECK_THROWS_AS(log_space(1.0, 2.0, 1), DomainError);
  }

  TEST_CASE("names") {
    CHECK(to_string(Problem::p1_ase) == "P1");
    CHECK(to_string(Objective::ee_static) == "ee_static");
    CHECK(objective_for(Problem::p2_ee, Policy::dynamic_assoc) == Objective::ee_dynamic);
    CHECK_THROWS_AS(objective_for(Problem::p1_ase, Policy::dynamic_bound), DomainError);
  }
}
