#pragma once

#include "synplan/milp/problem.hpp"
#include "synplan/milp/simplex.hpp"

namespace synplan::milp {

// Best-bound branch-and-bound over the binary variables, LP relaxations via
// solve_lp. Deterministic for a fixed (problem, config) pair: the time limit
// is enforced as a work budget (config.time_limit * config.work_rate tableau
// cells), not by the wall clock.
MilpSolution solve_milp(const MilpProblem& problem, const SolverConfig& config);

}  // namespace synplan::milp
