#include "synplan/milp/problem.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace synplan::milp {

int MilpProblem::add_continuous(const std::string& name, double lb, double ub) {
  Variable v;
  v.name = name;
  v.kind = VarKind::Continuous;
  v.lb = lb;
  v.ub = ub;
  vars_.push_back(std::move(v));
  obj_.push_back(0.0);
  return num_variables() - 1;
}

int MilpProblem::add_binary(const std::string& name, int branch_priority) {
  Variable v;
  v.name = name;
  v.kind = VarKind::Binary;
  v.lb = 0.0;
  v.ub = 1.0;
  v.branch_priority = branch_priority;
  vars_.push_back(std::move(v));
  obj_.push_back(0.0);
  return num_variables() - 1;
}

void MilpProblem::add_constraint(const std::string& name,
                                 std::vector<LinearTerm> terms, Relation rel,
                                 double rhs) {
  // Merge duplicate variables and drop zero coefficients.
  std::map<int, double> merged;
  for (const auto& t : terms) merged[t.var] += t.coeff;
  std::vector<LinearTerm> clean;
  clean.reserve(merged.size());
  for (const auto& [var, coeff] : merged) {
    if (coeff != 0.0) clean.push_back({var, coeff});
  }
  if (clean.empty()) {
    // 0 (rel) rhs: either vacuous or impossible.
    const bool ok = (rel == Relation::Le && 0.0 <= rhs) ||
                    (rel == Relation::Ge && 0.0 >= rhs) ||
                    (rel == Relation::Eq && rhs == 0.0);
    if (!ok) trivially_infeasible_ = true;
    return;
  }
  Constraint c;
  c.name = name;
  c.terms = std::move(clean);
  c.rel = rel;
  c.rhs = rhs;
  rows_.push_back(std::move(c));
}

void MilpProblem::set_objective(const std::vector<LinearTerm>& terms,
                                double constant) {
  std::fill(obj_.begin(), obj_.end(), 0.0);
  for (const auto& t : terms) obj_.at(t.var) += t.coeff;
  obj_constant_ = constant;
}

void MilpProblem::set_objective_coeff(int var, double coeff) {
  obj_.at(var) = coeff;
}

double MilpProblem::objective_value(const std::vector<double>& x) const {
  double v = obj_constant_;
  for (int j = 0; j < num_variables(); ++j) v += obj_[j] * x[j];
  return v;
}

void MilpProblem::validate() const {
  for (int j = 0; j < num_variables(); ++j) {
    const auto& v = vars_[j];
    if (!(v.lb <= v.ub))
      throw spec_error("variable '" + v.name + "' has lb > ub");
    if (v.kind == VarKind::Binary) {
      if (v.lb < 0.0 || v.ub > 1.0)
        throw spec_error("binary variable '" + v.name + "' has bounds outside [0,1]");
    } else {
      if (!std::isfinite(v.lb) || !std::isfinite(v.ub))
        throw spec_error("continuous variable '" + v.name + "' needs finite bounds");
    }
  }
  for (const auto& c : rows_) {
    for (const auto& t : c.terms) {
      if (t.var < 0 || t.var >= num_variables())
        throw spec_error("constraint '" + c.name + "' references unknown variable");
      if (!std::isfinite(t.coeff))
        throw spec_error("constraint '" + c.name + "' has a non-finite coefficient");
    }
    if (!std::isfinite(c.rhs))
      throw spec_error("constraint '" + c.name + "' has a non-finite rhs");
  }
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::FeasibleWithinGap: return "feasible_within_gap";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::TimedOutNoIncumbent: return "timed_out_no_incumbent";
  }
  return "unknown";
}

std::string MilpProblem::dump_lp() const {
  std::ostringstream os;
  os.precision(12);
  os << "min:";
  for (int j = 0; j < num_variables(); ++j) {
    if (obj_[j] != 0.0)
      os << ' ' << (obj_[j] >= 0 ? "+" : "") << obj_[j] << ' ' << vars_[j].name;
  }
  if (obj_constant_ != 0.0) os << " + " << obj_constant_;
  os << '\n';
  for (const auto& c : rows_) {
    os << c.name << ':';
    for (const auto& t : c.terms)
      os << ' ' << (t.coeff >= 0 ? "+" : "") << t.coeff << ' ' << vars_[t.var].name;
    os << (c.rel == Relation::Le ? " <= " : c.rel == Relation::Ge ? " >= " : " = ")
       << c.rhs << '\n';
  }
  for (const auto& v : vars_) {
    os << v.lb << " <= " << v.name << " <= " << v.ub
       << (v.kind == VarKind::Binary ? " binary" : "") << '\n';
  }
  return os.str();
}

FeasibilityReport check_feasible(const MilpProblem& problem,
                                 const std::vector<double>& assignment,
                                 double eps_feas, double eps_int) {
  if (assignment.size() != static_cast<size_t>(problem.num_variables()))
    throw solver_error("assignment does not cover all variables");
  FeasibilityReport rep;
  auto flag = [&](const std::string& label, double violation) {
    if (violation <= 0.0) return;
    rep.feasible = false;
    rep.worst_violation = std::max(rep.worst_violation, violation);
    rep.violated.push_back(label);
  };
  const auto& vars = problem.variables();
  for (int j = 0; j < problem.num_variables(); ++j) {
    const double x = assignment[j];
    flag("bound:" + vars[j].name,
         std::max(vars[j].lb - x, x - vars[j].ub) - eps_feas);
    if (vars[j].kind == VarKind::Binary)
      flag("integrality:" + vars[j].name, std::abs(x - std::round(x)) - eps_int);
  }
  for (const auto& c : problem.constraints()) {
    double act = 0.0;
    for (const auto& t : c.terms) act += t.coeff * assignment[t.var];
    double viol = 0.0;
    switch (c.rel) {
      case Relation::Le: viol = act - c.rhs; break;
      case Relation::Ge: viol = c.rhs - act; break;
      case Relation::Eq: viol = std::abs(act - c.rhs); break;
    }
    flag("constraint:" + c.name, viol - eps_feas);
  }
  return rep;
}

}  // namespace synplan::milp
