#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "synplan/errors.hpp"

namespace synplan::milp {

enum class VarKind { Continuous, Binary };

struct Variable {
  std::string name;
  VarKind kind = VarKind::Continuous;
  double lb = 0.0;
  double ub = 0.0;
  // Branch selection group for the "priority" branching rule; higher first.
  int branch_priority = 0;
};

enum class Relation { Le, Eq, Ge };

struct LinearTerm {
  int var = -1;
  double coeff = 0.0;
};

struct Constraint {
  std::string name;
  std::vector<LinearTerm> terms;
  Relation rel = Relation::Le;
  double rhs = 0.0;
};

// A mixed binary/continuous linear program, minimization sense.
// Continuous variables must carry finite bounds (the model builder is
// responsible for supplying horizon bounds).
class MilpProblem {
 public:
  int add_continuous(const std::string& name, double lb, double ub);
  int add_binary(const std::string& name, int branch_priority = 0);

  // Terms with duplicate variables are merged; constraints whose term list
  // becomes empty are dropped (or flagged trivially infeasible).
  void add_constraint(const std::string& name, std::vector<LinearTerm> terms,
                      Relation rel, double rhs);

  void set_objective(const std::vector<LinearTerm>& terms, double constant = 0.0);
  void set_objective_coeff(int var, double coeff);
  void set_objective_constant(double constant) { obj_constant_ = constant; }

  int num_variables() const { return static_cast<int>(vars_.size()); }
  int num_constraints() const { return static_cast<int>(rows_.size()); }
  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Constraint>& constraints() const { return rows_; }
  const std::vector<double>& objective() const { return obj_; }
  double objective_constant() const { return obj_constant_; }
  bool trivially_infeasible() const { return trivially_infeasible_; }

  double objective_value(const std::vector<double>& x) const;

  // Checks variable references, binary bounds in [0,1] and finite continuous
  // bounds. Throws spec_error on violation.
  void validate() const;

  // Plain-text dump, one constraint per line, for eyeballing and for
  // cross-checks against external solvers. Not a stable format.
  std::string dump_lp() const;

 private:
  std::vector<Variable> vars_;
  std::vector<Constraint> rows_;
  std::vector<double> obj_;
  double obj_constant_ = 0.0;
  bool trivially_infeasible_ = false;
};

enum class SolveStatus { Optimal, FeasibleWithinGap, Infeasible, TimedOutNoIncumbent };

std::string to_string(SolveStatus s);

struct MilpSolution {
  SolveStatus status = SolveStatus::Infeasible;
  std::vector<double> assignment;  // empty unless an incumbent exists
  double objective = std::numeric_limits<double>::quiet_NaN();
  double best_bound = -std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
  // Diagnostics.
  std::int64_t nodes = 0;
  std::int64_t pivots = 0;
  bool effort_exhausted = false;

  bool has_solution() const {
    return status == SolveStatus::Optimal || status == SolveStatus::FeasibleWithinGap;
  }
};

struct SolverConfig {
  double gap_target = 0.0;
  double time_limit = 60.0;  // seconds; enforced as a deterministic work budget
  double eps_feas = 1e-6;
  double eps_int = 1e-6;
  // "most-fractional" or "priority" (priority groups, most-fractional within).
  std::string branching = "most-fractional";
  std::uint64_t seed = 0;
  // Deterministic work-budget conversion: tableau cell updates per second.
  // time_limit * work_rate caps the total simplex work across the tree, so a
  // given (problem, config) pair always stops at the same point.
  double work_rate = 1.5e9;
};

struct FeasibilityReport {
  bool feasible = true;
  double worst_violation = 0.0;
  std::vector<std::string> violated;  // constraint/bound labels
};

// Checks an assignment against all constraints, bounds and binary
// integrality. The assignment must cover every variable.
FeasibilityReport check_feasible(const MilpProblem& problem,
                                 const std::vector<double>& assignment,
                                 double eps_feas = 1e-6, double eps_int = 1e-6);

}  // namespace synplan::milp
