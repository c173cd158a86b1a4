#include "doctest.h"

#include <random>

#include "support/generators.hpp"
#include "support/schedule_oracle.hpp"
#include "synplan/milp/solver.hpp"
#include "synplan/planner/models.hpp"

using namespace synplan;
using namespace synplan::planner;
using synplan::testing::adapted_brute_force;
using synplan::testing::make_random_spec;
using synplan::testing::make_random_synergies;
using synplan::testing::relaxed_brute_force;

namespace {

milp::MilpSolution solve_exact(const ModelArtifacts& art) {
  milp::SolverConfig cfg;
  cfg.gap_target = 0.0;
  cfg.time_limit = 120.0;
  return milp::solve_milp(art.problem, cfg);
}

ProcessSpec single_task_spec(double d) {
  ProcessSpec s;
  s.tasks = {{"t0"}};
  s.agents = {{"h", AgentKind::Human}, {"r", AgentKind::Robot}};
  s.capability = {{false, true}};
  s.nominal_duration = {{0.0, d}};
  s.precedence = {{false}};
  return s;
}

// One robot-only and one human-only task, free starts, no precedence.
ProcessSpec robot_human_pair(double d_robot, double d_human) {
  ProcessSpec s;
  s.tasks = {{"r_task"}, {"h_task"}};
  s.agents = {{"h", AgentKind::Human}, {"r", AgentKind::Robot}};
  s.capability = {{false, true}, {true, false}};
  s.nominal_duration = {{0.0, d_robot}, {d_human, 0.0}};
  s.precedence = {{false, false}, {false, false}};
  return s;
}

}  // namespace

TEST_CASE("baseline: single task starts at zero") {
  const auto spec = single_task_spec(4.0);
  const auto art = build_baseline(spec);
  const auto sol = solve_exact(art);
  REQUIRE(sol.status == milp::SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(4.0));
  const Plan plan = extract_plan(art, sol, spec);
  CHECK(plan.tasks[0].start == doctest::Approx(0.0));
  CHECK(plan.tasks[0].end == doctest::Approx(4.0));
}

TEST_CASE("baseline: two independent tasks run in parallel") {
  ProcessSpec s;
  s.tasks = {{"a"}, {"b"}};
  s.agents = {{"h", AgentKind::Human}, {"r", AgentKind::Robot}};
  s.capability = {{true, true}, {true, true}};
  s.nominal_duration = {{3.0, 3.0}, {5.0, 5.0}};
  s.precedence = {{false, false}, {false, false}};
  const auto sol = solve_exact(build_baseline(s));
  REQUIRE(sol.status == milp::SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(5.0));
}

TEST_CASE("baseline: forced chain on one agent sums durations") {
  ProcessSpec s;
  s.tasks = {{"a"}, {"b"}, {"c"}};
  s.agents = {{"h", AgentKind::Human}, {"r", AgentKind::Robot}};
  s.capability = {{true, false}, {true, false}, {true, false}};
  s.nominal_duration = {{1.0, 0.0}, {2.0, 0.0}, {3.0, 0.0}};
  s.precedence = {{false, false, false},
                  {true, false, false},
                  {false, true, false}};
  const auto sol = solve_exact(build_baseline(s));
  REQUIRE(sol.status == milp::SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(6.0));
}

TEST_CASE("not-neighboring with no pairs equals the baseline") {
  std::mt19937_64 rng(50);
  for (int it = 0; it < 5; ++it) {
    const auto spec = make_random_spec(rng);
    const auto base = solve_exact(build_baseline(spec));
    const auto nn = solve_exact(build_not_neighboring(spec, {}));
    REQUIRE(base.status == milp::SolveStatus::Optimal);
    REQUIRE(nn.status == milp::SolveStatus::Optimal);
    CHECK(nn.objective == doctest::Approx(base.objective).epsilon(1e-9));
  }
}

TEST_CASE("not-neighboring serializes a listed human-robot pair") {
  const auto spec = robot_human_pair(3.0, 3.0);
  const auto with_pair = solve_exact(build_not_neighboring(spec, {{0, 1}}));
  REQUIRE(with_pair.status == milp::SolveStatus::Optimal);
  CHECK(with_pair.objective == doctest::Approx(6.0));
  const auto without = solve_exact(build_not_neighboring(spec, {}));
  CHECK(without.objective == doctest::Approx(3.0));
  CHECK_THROWS_AS(build_not_neighboring(spec, {{0, 7}}), unknown_task_in_pair_error);
}

TEST_CASE("stp with all-neutral synergies equals the baseline") {
  std::mt19937_64 rng(51);
  for (int it = 0; it < 5; ++it) {
    const auto spec = make_random_spec(rng);
    SynergyMatrix neutral;
    const auto base = solve_exact(build_baseline(spec));
    const auto stp = solve_exact(build_stp(spec, neutral));
    REQUIRE(stp.status == milp::SolveStatus::Optimal);
    CHECK(stp.objective == doctest::Approx(base.objective).epsilon(1e-9));
  }
}

TEST_CASE("stp with a detrimental pair matches the order enumeration") {
  const auto spec = robot_human_pair(4.0, 4.0);
  SynergyMatrix syn;
  syn.set(1, 0, 1, 2.0);
  const auto art = build_stp(spec, syn);
  const auto sol = solve_exact(art);
  REQUIRE(sol.status == milp::SolveStatus::Optimal);
  const double oracle = adapted_brute_force(spec, syn);
  CHECK(sol.objective == doctest::Approx(oracle).epsilon(1e-7));
  CHECK(sol.objective == doctest::Approx(8.0));
}

TEST_CASE("stp with a beneficial pair overlaps fully") {
  const auto spec = robot_human_pair(4.0, 4.0);
  SynergyMatrix syn;
  syn.set(1, 0, 1, 0.5);
  const auto art = build_stp(spec, syn);
  const auto sol = solve_exact(art);
  REQUIRE(sol.status == milp::SolveStatus::Optimal);
  // Coupled end time: te = 4 - 0.5 * te while the robot task sits inside the
  // human window, so the robot finishes at 8/3; the human task dominates.
  const double oracle = adapted_brute_force(spec, syn);
  CHECK(oracle == doctest::Approx(4.0));
  CHECK(sol.objective == doctest::Approx(4.0).epsilon(1e-7));
  const Plan plan = extract_plan(art, sol, spec);
  CHECK(plan.tasks[0].end - plan.tasks[0].start == doctest::Approx(8.0 / 3.0));
}

TEST_CASE("rstp with neutral synergies equals the baseline objective") {
  std::mt19937_64 rng(52);
  const auto spec = make_random_spec(rng);
  SynergyMatrix neutral;
  const auto base = solve_exact(build_baseline(spec));
  const auto rstp = solve_exact(build_rstp(spec, neutral));
  REQUIRE(rstp.status == milp::SolveStatus::Optimal);
  CHECK(rstp.objective == doctest::Approx(base.objective).epsilon(1e-9));
}

TEST_CASE("rstp objective decomposes into makespan plus coupling") {
  // Robot chain forces overlap with the human task; the coupling term ends
  // up in the objective, not in the end times.
  ProcessSpec s;
  s.tasks = {{"r0"}, {"r1"}, {"h0"}};
  s.agents = {{"h", AgentKind::Human}, {"r", AgentKind::Robot}};
  s.capability = {{false, true}, {false, true}, {true, false}};
  s.nominal_duration = {{0.0, 4.0}, {0.0, 4.0}, {6.0, 0.0}};
  s.precedence = {{false, false, false},
                  {true, false, false},
                  {false, false, false}};
  SynergyMatrix syn;
  syn.set(1, 0, 2, 1.5);
  syn.set(1, 1, 2, 1.5);
  const auto art = build_rstp(s, syn);
  const auto sol = solve_exact(art);
  REQUIRE(sol.status == milp::SolveStatus::Optimal);
  const Plan plan = extract_plan(art, sol, s);
  const double ds = delta_s(plan, s, syn);
  CHECK(sol.objective ==
        doctest::Approx(plan.makespan() + ds).epsilon(1e-7));
  // 6 seconds of human time must overlap the 8-second robot chain.
  CHECK(ds == doctest::Approx(3.0));
  CHECK(sol.objective == doctest::Approx(11.0));
  const double oracle = relaxed_brute_force(s, syn);
  CHECK(sol.objective == doctest::Approx(oracle).epsilon(1e-7));
}

TEST_CASE("rstp coupling term vanishes without concurrency windows") {
  // Human-only chain ordered by precedence before the robot task can begin.
  ProcessSpec s;
  s.tasks = {{"h0"}, {"r0"}};
  s.agents = {{"h", AgentKind::Human}, {"r", AgentKind::Robot}};
  s.capability = {{true, false}, {false, true}};
  s.nominal_duration = {{3.0, 0.0}, {0.0, 2.0}};
  s.precedence = {{false, false}, {true, false}};
  SynergyMatrix syn;
  syn.set(1, 1, 0, 1.8);
  const auto art = build_rstp(s, syn);
  const auto sol = solve_exact(art);
  REQUIRE(sol.status == milp::SolveStatus::Optimal);
  const Plan plan = extract_plan(art, sol, s);
  CHECK(delta_s(plan, s, syn) == doctest::Approx(0.0));
  CHECK(sol.objective == doctest::Approx(5.0));
}

TEST_CASE("delta_s arithmetic") {
  ProcessSpec s = robot_human_pair(4.0, 4.0);
  Plan plan;
  plan.tasks = {{0.0, 4.0, 1}, {2.0, 6.0, 0}};
  SynergyMatrix syn;
  SUBCASE("neutral synergies sum to zero") {
    CHECK(delta_s(plan, s, syn) == doctest::Approx(0.0));
  }
  SUBCASE("detrimental pair, overlap 2, s 1.5") {
    syn.set(1, 0, 1, 1.5);
    CHECK(delta_s(plan, s, syn) == doctest::Approx(1.0));
  }
  SUBCASE("beneficial coupling is negative") {
    syn.set(1, 0, 1, 0.5);
    CHECK(delta_s(plan, s, syn) == doctest::Approx(-1.0));
  }
}

TEST_CASE("extract_plan rejects fractional allocations") {
  const auto spec = single_task_spec(4.0);
  const auto art = build_baseline(spec);
  auto sol = solve_exact(art);
  REQUIRE(sol.status == milp::SolveStatus::Optimal);
  sol.assignment[art.alloc.at({1, 0})] = 0.5;
  CHECK_THROWS_AS(extract_plan(art, sol, spec), integrality_violation_error);
  milp::MilpSolution empty;
  CHECK_THROWS_AS(extract_plan(art, empty, spec), infeasible_solution_error);
}

TEST_CASE("linearization reproduces the nonlinear overlap at every optimum") {
  std::mt19937_64 rng(1717);
  for (int it = 0; it < 10; ++it) {
    const auto spec = make_random_spec(rng);
    const auto syn = make_random_synergies(rng, spec);
    const auto art = build_stp(spec, syn);
    const auto sol = solve_exact(art);
    REQUIRE(sol.status == milp::SolveStatus::Optimal);
    const auto& x = sol.assignment;
    for (const auto& [pair, vars] : art.pairs) {
      const auto [i, k] = pair;
      const double true_ov = overlap(x[art.ts[i]], x[art.te[i]], x[art.ts[k]],
                                     x[art.te[k]]);
      CHECK(x[vars.ov] == doctest::Approx(true_ov).epsilon(1e-4));
    }
    for (const auto& [key, alpha] : art.alpha) {
      const auto& [r, i, k] = key;
      const double a_ri = x[art.alloc.at({r, i})];
      const double a_hk = x[art.alloc.at({spec.human_index(), k})];
      const double ov = x[art.pairs.at({std::min(i, k), std::max(i, k)}).ov];
      CHECK(x[alpha] == doctest::Approx(ov * a_ri * a_hk).epsilon(1e-4));
    }
  }
}

TEST_CASE("stp optimum matches the exhaustive fixed-point search") {
  std::mt19937_64 rng(2024);
  for (int it = 0; it < 12; ++it) {
    const auto spec = make_random_spec(rng);
    const auto syn = make_random_synergies(rng, spec);
    const auto sol = solve_exact(build_stp(spec, syn));
    REQUIRE(sol.status == milp::SolveStatus::Optimal);
    const double oracle = adapted_brute_force(spec, syn);
    CHECK(sol.objective == doctest::Approx(oracle).epsilon(1e-6));
  }
}

TEST_CASE("rstp optimum matches the exhaustive aligned-schedule search") {
  std::mt19937_64 rng(2025);
  for (int it = 0; it < 8; ++it) {
    const auto spec = make_random_spec(rng, 3);
    const auto syn = make_random_synergies(rng, spec);
    const auto sol = solve_exact(build_rstp(spec, syn));
    REQUIRE(sol.status == milp::SolveStatus::Optimal);
    const double oracle = relaxed_brute_force(spec, syn);
    CHECK(sol.objective == doctest::Approx(oracle).epsilon(1e-6));
  }
}

TEST_CASE("raising one synergy never improves the stp optimum") {
  std::mt19937_64 rng(33);
  const auto spec = make_random_spec(rng, 3);
  auto syn = make_random_synergies(rng, spec, 0.8, 1.5);
  const auto before = solve_exact(build_stp(spec, syn));
  REQUIRE(before.status == milp::SolveStatus::Optimal);
  for (const auto& [key, entry] : syn.entries()) {
    SynergyMatrix bumped = syn;
    auto e = entry;
    e.value += 0.3;
    bumped.set(std::get<0>(key), std::get<1>(key), std::get<2>(key), e);
    const auto after = solve_exact(build_stp(spec, bumped));
    REQUIRE(after.status == milp::SolveStatus::Optimal);
    CHECK(after.objective >= before.objective - 1e-7);
  }
}

TEST_CASE("extra non-parallel constraints never improve the optimum") {
  std::mt19937_64 rng(34);
  for (int it = 0; it < 5; ++it) {
    const auto spec = make_random_spec(rng);
    const auto base = solve_exact(build_baseline(spec));
    std::vector<std::pair<int, int>> pairs{{0, 1}};
    const auto nn = solve_exact(build_not_neighboring(spec, pairs));
    REQUIRE(base.status == milp::SolveStatus::Optimal);
    if (nn.status == milp::SolveStatus::Optimal)
      CHECK(base.objective <= nn.objective + 1e-9);
  }
}

TEST_CASE("solved plans satisfy the model per check_feasible") {
  std::mt19937_64 rng(35);
  const auto spec = make_random_spec(rng);
  const auto syn = make_random_synergies(rng, spec);
  const auto art = build_stp(spec, syn);
  const auto sol = solve_exact(art);
  REQUIRE(sol.status == milp::SolveStatus::Optimal);
  CHECK(milp::check_feasible(art.problem, sol.assignment).feasible);
  const Plan plan = extract_plan(art, sol, spec);
  CHECK_NOTHROW(validate_plan(plan, spec, 1e-5));
}
