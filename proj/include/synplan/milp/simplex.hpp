#pragma once

#include <cstdint>
#include <vector>

#include "synplan/milp/problem.hpp"

namespace synplan::milp {

enum class LpStatus { Optimal, Infeasible };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;  // structural variables only
  double objective = 0.0;
  std::int64_t pivots = 0;
};

// Raised when an LP solve runs out of the caller's work budget; the
// branch-and-bound driver converts it into an honest timeout status.
class effort_exhausted_error : public solver_error {
 public:
  using solver_error::solver_error;
};

struct LpOptions {
  // Per-variable bound overrides (same size as problem variables); empty means
  // use the problem's own bounds. Used by branch-and-bound node relaxations.
  std::vector<double> lb;
  std::vector<double> ub;
  std::int64_t max_pivots = 0;         // 0: automatic cap
  std::int64_t* work_cells = nullptr;  // accumulates tableau cells touched
  std::int64_t work_limit = 0;         // abort when *work_cells exceeds this (0: off)
};

// Bounded-variable primal simplex on the integrality relaxation.
// Two phases with artificial variables; Dantzig pricing with Bland's rule
// engaged after 3*(#rows) non-improving pivots. Deterministic.
// Throws unbounded_error (model lacks a horizon bound) or numerical_error.
LpResult solve_lp(const MilpProblem& problem);
LpResult solve_lp(const MilpProblem& problem, const LpOptions& options);

}  // namespace synplan::milp
