#include "doctest.h"

#include <random>

#include "support/oracles.hpp"
#include "synplan/milp/problem.hpp"
#include "synplan/milp/simplex.hpp"
#include "synplan/milp/solver.hpp"

using namespace synplan;
using namespace synplan::milp;
using synplan::testing::lp_vertex_oracle;
using synplan::testing::make_random_knapsack;
using synplan::testing::make_random_milp;
using synplan::testing::milp_enumeration_oracle;

TEST_CASE("solve_lp: bound-active optimum") {
  MilpProblem p;
  const int x = p.add_continuous("x", 0.0, 3.0);
  p.set_objective({{x, -1.0}});
  const auto r = solve_lp(p);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.x[x] == doctest::Approx(3.0));
  CHECK(r.objective == doctest::Approx(-3.0));
}

TEST_CASE("solve_lp: simple covering constraint") {
  MilpProblem p;
  const int x = p.add_continuous("x", 0.0, 5.0);
  const int y = p.add_continuous("y", 0.0, 5.0);
  p.add_constraint("cover", {{x, 1.0}, {y, 1.0}}, Relation::Ge, 2.0);
  p.set_objective({{x, 1.0}, {y, 1.0}});
  const auto r = solve_lp(p);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(2.0));
}

TEST_CASE("solve_lp: infeasible box") {
  MilpProblem p;
  const int x = p.add_continuous("x", 0.0, 5.0);
  p.add_constraint("lo", {{x, 1.0}}, Relation::Ge, 2.0);
  p.add_constraint("hi", {{x, 1.0}}, Relation::Le, 1.0);
  p.set_objective({{x, 1.0}});
  CHECK(solve_lp(p).status == LpStatus::Infeasible);
}

TEST_CASE("solve_lp: equality constraints") {
  MilpProblem p;
  const int x = p.add_continuous("x", -4.0, 4.0);
  const int y = p.add_continuous("y", -4.0, 4.0);
  p.add_constraint("sum", {{x, 1.0}, {y, 1.0}}, Relation::Eq, 1.0);
  p.add_constraint("diff", {{x, 1.0}, {y, -1.0}}, Relation::Le, 0.5);
  p.set_objective({{x, -1.0}});
  const auto r = solve_lp(p);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.x[x] == doctest::Approx(0.75));
  CHECK(r.x[y] == doctest::Approx(0.25));
}

TEST_CASE("solve_lp agrees with vertex enumeration on random LPs") {
  std::mt19937_64 rng(1234);
  int feasible = 0;
  for (int it = 0; it < 150; ++it) {
    const MilpProblem p = make_random_milp(rng, 0, 4, 6);
    const auto oracle = lp_vertex_oracle(p);
    const auto lp = solve_lp(p);
    if (oracle.has_value()) {
      ++feasible;
      REQUIRE(lp.status == LpStatus::Optimal);
      CHECK(lp.objective == doctest::Approx(*oracle).epsilon(1e-6));
    } else {
      CHECK(lp.status == LpStatus::Infeasible);
    }
  }
  CHECK(feasible > 20);  // the generator must exercise both outcomes
}

TEST_CASE("solve_milp: one of two binaries") {
  MilpProblem p;
  const int a = p.add_binary("a");
  const int b = p.add_binary("b");
  p.add_constraint("pick", {{a, 1.0}, {b, 1.0}}, Relation::Le, 1.0);
  p.set_objective({{a, -1.0}, {b, -1.0}});
  const auto s = solve_milp(p, SolverConfig{});
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.objective == doctest::Approx(-1.0));
  CHECK(s.gap == 0.0);
  const auto rep = check_feasible(p, s.assignment);
  CHECK(rep.feasible);
}

TEST_CASE("solve_milp matches exhaustive enumeration on knapsacks") {
  std::mt19937_64 rng(99);
  for (int it = 0; it < 30; ++it) {
    const MilpProblem p = make_random_knapsack(rng, 8);
    const auto oracle = milp_enumeration_oracle(p);  // LP-free for pure binaries
    REQUIRE(oracle.has_value());
    const auto s = solve_milp(p, SolverConfig{});
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(s.objective == doctest::Approx(*oracle).epsilon(1e-9));
  }
}

TEST_CASE("solve_milp matches enumeration on random mixed instances") {
  std::mt19937_64 rng(4242);
  int feasible = 0;
  for (int it = 0; it < 60; ++it) {
    const MilpProblem p = make_random_milp(rng);
    const auto oracle = milp_enumeration_oracle(p);
    const auto s = solve_milp(p, SolverConfig{});
    if (oracle.has_value()) {
      ++feasible;
      REQUIRE(s.has_solution());
      CHECK(s.status == SolveStatus::Optimal);
      CHECK(s.objective == doctest::Approx(*oracle).epsilon(1e-6));
      CHECK(check_feasible(p, s.assignment).feasible);
      CHECK(s.best_bound <= s.objective + 1e-9);
    } else {
      CHECK(s.status == SolveStatus::Infeasible);
    }
  }
  CHECK(feasible > 10);
}

TEST_CASE("solve_milp on a continuous-only problem equals solve_lp") {
  std::mt19937_64 rng(5);
  const MilpProblem p = make_random_milp(rng, 0, 5, 8);
  const auto lp = solve_lp(p);
  const auto s = solve_milp(p, SolverConfig{});
  if (lp.status == LpStatus::Optimal) {
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(s.objective == doctest::Approx(lp.objective).epsilon(1e-9));
  } else {
    CHECK(s.status == SolveStatus::Infeasible);
  }
}

TEST_CASE("solve_milp is deterministic") {
  std::mt19937_64 rng(777);
  const MilpProblem p = make_random_milp(rng);
  SolverConfig cfg;
  cfg.seed = 3;
  const auto a = solve_milp(p, cfg);
  const auto b = solve_milp(p, cfg);
  CHECK(a.status == b.status);
  if (a.has_solution()) {
    CHECK(a.objective == b.objective);
    CHECK(a.assignment == b.assignment);
    CHECK(a.gap == b.gap);
  }
}

TEST_CASE("check_feasible flags integrality and bound violations") {
  MilpProblem p;
  const int a = p.add_binary("a");
  p.set_objective({{a, 1.0}});
  const auto rep = check_feasible(p, {0.5});
  CHECK_FALSE(rep.feasible);
  CHECK(rep.worst_violation == doctest::Approx(0.5).epsilon(1e-3));
  REQUIRE(rep.violated.size() == 1);
  CHECK(rep.violated[0] == "integrality:a");

  // In-bounds point with no constraints is feasible.
  CHECK(check_feasible(p, {1.0}).feasible);
  CHECK_THROWS_AS(check_feasible(p, {}), solver_error);
}

TEST_CASE("gap-limited solve reports an honest gap") {
  std::mt19937_64 rng(31);
  const MilpProblem p = make_random_knapsack(rng, 10);
  SolverConfig cfg;
  cfg.gap_target = 0.25;
  const auto s = solve_milp(p, cfg);
  REQUIRE(s.has_solution());
  const auto oracle = milp_enumeration_oracle(p);
  REQUIRE(oracle.has_value());
  // The incumbent must really lie within the reported gap of the optimum.
  CHECK(s.objective - *oracle <=
        0.25 * std::max(std::abs(s.objective), 1e-10) + 1e-9);
  CHECK(s.best_bound <= *oracle + 1e-9);
}

TEST_CASE("work budget exhaustion yields an honest timeout status") {
  std::mt19937_64 rng(11);
  const MilpProblem p = make_random_knapsack(rng, 10);
  SolverConfig cfg;
  cfg.time_limit = 1e-7;  // starves even the root LP
  cfg.work_rate = 10.0;
  const auto s = solve_milp(p, cfg);
  CHECK(s.effort_exhausted);
  CHECK((s.status == SolveStatus::TimedOutNoIncumbent ||
         s.status == SolveStatus::FeasibleWithinGap));
}

TEST_CASE("validation rejects malformed problems") {
  MilpProblem p;
  p.add_continuous("x", 0.0, 1.0);
  p.add_constraint("bad", {{5, 1.0}}, Relation::Le, 1.0);  // unknown variable
  CHECK_THROWS_AS(solve_lp(p), spec_error);

  MilpProblem q;
  q.add_continuous("free", 0.0, std::numeric_limits<double>::infinity());
  q.set_objective({{0, 1.0}});
  CHECK_THROWS_AS(solve_lp(q), spec_error);  // missing horizon bound
}

TEST_CASE("lp dump lists objective, constraints and bounds") {
  MilpProblem p;
  const int x = p.add_continuous("x", 0.0, 3.0);
  const int b = p.add_binary("flag");
  p.add_constraint("cap", {{x, 1.0}, {b, 2.0}}, Relation::Le, 4.0);
  p.set_objective({{x, -1.0}});
  const auto text = p.dump_lp();
  CHECK(text.find("cap:") != std::string::npos);
  CHECK(text.find("flag") != std::string::npos);
  CHECK(text.find("binary") != std::string::npos);
}
