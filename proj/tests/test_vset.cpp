#include <random>

#include "doctest.h"
#include "gridcert/load_flow.hpp"
#include "gridcert/vset.hpp"
#include "test_support.hpp"

using namespace gridcert;

namespace {

AuxBounds aux_with(const GridModel& m, double i_node, double i_branch = 10.0) {
  const auto spec = SecuritySpec::uniform(m, 0.5, 2.0, i_branch);
  return AuxBounds::make(m, spec, 1.0, Vec::Ones(m.n_pq()), i_node);
}

}  // namespace

TEST_CASE("P1 on the two-bus grid: small nodal cap is infeasible") {
  const auto m = testing::two_bus();
  const auto aux = aux_with(m, 0.4);
  for (int psi : {1, -1})
    for (int phi : {1, -1}) {
      const auto out = solve(formulate_P1(m, aux, 0, 0, psi, phi));
      CHECK(out.status == SolveStatus::Infeasible);
    }
}

TEST_CASE("P1 on the two-bus grid: large nodal cap is feasible") {
  const auto m = testing::two_bus();
  const auto aux = aux_with(m, 0.8);
  bool any_feasible = false;
  for (int psi : {1, -1})
    for (int phi : {1, -1}) {
      const auto out = solve(formulate_P1(m, aux, 0, 0, psi, phi));
      any_feasible = any_feasible || out.status == SolveStatus::Feasible;
    }
  CHECK(any_feasible);
}

TEST_CASE("vanishing nodal cap is always infeasible") {
  const auto m = testing::two_bus();
  const auto aux = aux_with(m, 1e-4);
  const auto check = check_P1_all(m, aux);
  CHECK(check.all_infeasible);
}

TEST_CASE("check_P1_all reports the first feasible instance") {
  const auto m = testing::two_bus();
  const auto check = check_P1_all(m, aux_with(m, 0.8));
  CHECK_FALSE(check.all_infeasible);
  CHECK(check.m == 0);
  CHECK(check.n == 0);
  CHECK_FALSE(check.backend_unknown);
}

TEST_CASE("lambda calibration by fixed steps lands at 0.4") {
  const auto m = testing::two_bus();
  const auto spec = SecuritySpec::uniform(m, 0.5, 2.0, 10.0);
  LambdaSchedule sched;
  sched.start = 0.1;
  sched.mode = LambdaSchedule::Mode::Step;
  sched.value = 0.1;
  const auto res = calibrate_lambda(m, spec, 1.0, Vec::Ones(1), sched);
  REQUIRE(res.ok);
  CHECK(res.lambda_star == doctest::Approx(0.4));
  CHECK(res.aux.i_node(0) == doctest::Approx(0.4));
}

TEST_CASE("calibration starting beyond the threshold fails") {
  const auto m = testing::two_bus();
  const auto spec = SecuritySpec::uniform(m, 0.5, 2.0, 10.0);
  LambdaSchedule sched;
  sched.start = 0.5;
  sched.mode = LambdaSchedule::Mode::Step;
  sched.value = 0.1;
  const auto res = calibrate_lambda(m, spec, 1.0, Vec::Ones(1), sched);
  CHECK_FALSE(res.ok);
}

TEST_CASE("calibration is monotone in the nodal reference") {
  const auto m = testing::two_bus();
  const auto spec = SecuritySpec::uniform(m, 0.5, 2.0, 10.0);
  LambdaSchedule sched;
  sched.start = 0.05;
  sched.mode = LambdaSchedule::Mode::Step;
  sched.value = 0.05;
  const auto res1 = calibrate_lambda(m, spec, 1.0, Vec::Ones(1), sched);
  const auto res2 =
      calibrate_lambda(m, spec, 1.0, 2.0 * Vec::Ones(1), sched);
  REQUIRE(res1.ok);
  REQUIRE(res2.ok);
  CHECK(res2.lambda_star <= res1.lambda_star + 1e-12);
}

TEST_CASE("assembled V lists auxiliary forms first") {
  const auto m = testing::two_bus();
  const auto spec = SecuritySpec::uniform(m, 0.9, 1.1, 2.0);
  const auto aux = AuxBounds::make(m, spec, 1.0, Vec::Ones(1), 0.4);
  const auto vs = assemble_V(m, spec, aux);
  CHECK(vs.size() == 7);  // 2 branch aux + 1 node aux + VLow + VUp + 2 branch
  CHECK(vs.split == 3);
  CHECK(vs.items[0].kind == ConstraintKind::IBranchAux);
  CHECK(vs.items[2].kind == ConstraintKind::INodeAux);
  CHECK(vs.items[3].kind == ConstraintKind::VLow);
  const auto ev = eval_constraints(vs, m.w());
  CHECK(ev.min_margin > 0.0);
}

TEST_CASE("auxiliary set is midpoint-convex and non-singular (sampled)") {
  const auto m = testing::two_bus();
  const auto spec = SecuritySpec::uniform(m, 0.5, 2.0, 10.0);
  const auto aux = AuxBounds::make(m, spec, 1.0, Vec::Ones(1), 0.4);
  const auto tilde = aux_forms(m, aux);
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  int inside = 0;
  std::vector<CVec> pts;
  while (inside < 200) {
    CVec v(1);
    v(0) = Complex{1.0 + uni(rng), uni(rng)};
    if (eval_constraints(tilde, v).min_margin > 0.0) {
      ++inside;
      pts.push_back(v);
      CHECK(is_nonsingular(m, v).nonsingular);
    }
  }
  for (size_t i = 0; i + 1 < pts.size(); i += 2) {
    const CVec mid = 0.5 * (pts[i] + pts[i + 1]);
    CHECK(eval_constraints(tilde, mid).min_margin > 0.0);
  }
}
