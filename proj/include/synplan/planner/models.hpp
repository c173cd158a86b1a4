#pragma once

#include <map>
#include <tuple>
#include <utility>
#include <vector>

#include "synplan/milp/problem.hpp"
#include "synplan/process.hpp"
#include "synplan/synergy_matrix.hpp"

namespace synplan::planner {

enum class PlannerKind { Baseline, NotNeighboring, Rstp, Stp };

std::string to_string(PlannerKind k);
PlannerKind planner_kind_from_string(const std::string& name);

class infeasible_solution_error : public solver_error {
 public:
  using solver_error::solver_error;
};

class integrality_violation_error : public solver_error {
 public:
  using solver_error::solver_error;
};

class unknown_task_in_pair_error : public spec_error {
 public:
  using spec_error::spec_error;
};

// Overlap-linearization variables for one unordered task pair {i, k}:
// the pair's max start, min end, the overlap amount and the three selector
// binaries that make the min/max/positive-part selection exact.
struct PairVars {
  int ts_max = -1;
  int te_min = -1;
  int ov = -1;
  int sig1 = -1;
  int sig2 = -1;
  int sig3 = -1;
};

// A built planning model plus the variable maps needed to interpret its
// solutions. Variable names follow the scheme ts_i, te_i, a_j_i, delta_i_k,
// tsmax_i_k, temin_i_k, ov_i_k, sig{1,2,3}_i_k, alpha_r_i_k, te_max.
struct ModelArtifacts {
  milp::MilpProblem problem;
  PlannerKind kind = PlannerKind::Baseline;
  double big_m = 0.0;
  double horizon = 0.0;
  std::vector<int> ts, te;                     // per task index
  int te_max = -1;
  std::map<std::pair<int, int>, int> alloc;    // (agent j, task i) -> a_j_i
  std::map<std::pair<int, int>, int> ordering; // {i<k} -> delta_i_k
  std::map<std::pair<int, int>, PairVars> pairs;  // {i<k} -> overlap machinery
  // (robot agent r, robot task i, human task k) -> alpha_r_i_k
  std::map<std::tuple<int, int, int>, int> alpha;
};

// Horizon bound H: every feasible schedule, including synergy-stretched ones,
// fits in [0, H]. Also used as the big-M constant.
double horizon_bound(const ProcessSpec& spec, const SynergyMatrix* synergies);

// Makespan minimization with nominal durations: assignment, precedence,
// capability, same-agent non-overlap and the makespan auxiliary.
ModelArtifacts build_baseline(const ProcessSpec& spec);

// Baseline plus zero-overlap constraints for the listed task pairs whenever
// the pair is split across a human and a robot.
ModelArtifacts build_not_neighboring(const ProcessSpec& spec,
                                     const std::vector<std::pair<int, int>>& pairs);

// Synergy-adapted end times: robot task durations stretch by (s - 1) times
// the overlap with concurrent human tasks, linearized through the overlap
// machinery and the alpha adaptation terms.
ModelArtifacts build_stp(const ProcessSpec& spec, const SynergyMatrix& synergies);

// Relaxed variant: nominal end times, synergy lengthening moved into the
// objective as a makespan proxy (te_max plus the total coupling term).
ModelArtifacts build_rstp(const ProcessSpec& spec, const SynergyMatrix& synergies);

// Reads start/end times and the allocation out of a solver assignment.
// Throws integrality_violation_error when an allocation binary is not within
// eps_int of {0,1}, infeasible_solution_error when the extracted plan breaks
// plan invariants or the solution carries no assignment.
Plan extract_plan(const ModelArtifacts& artifacts, const milp::MilpSolution& solution,
                  const ProcessSpec& spec, double eps_int = 1e-6);

// Total schedule lengthening induced by human-robot coupling: sum over robot
// task i / human task k pairs of overlap * (s - 1), evaluated on the plan's
// intervals.
double delta_s(const Plan& plan, const ProcessSpec& spec,
               const SynergyMatrix& synergies);

// Solver parameter defaults per planner: relaxed models run tight gaps and
// short timeouts, the full synergistic model a loose gap and a long timeout.
milp::SolverConfig default_solver_config(PlannerKind kind);

}  // namespace synplan::planner
