#pragma once

#include <string>
#include <vector>

#include "synplan/errors.hpp"

namespace synplan {

enum class AgentKind { Human, Robot };

struct Agent {
  std::string id;
  AgentKind kind = AgentKind::Robot;
};

struct Task {
  std::string id;
};

// Input data of the allocation/scheduling problem: tasks, agents, who can do
// what (and how long it nominally takes), and which tasks must precede which.
//
// Precedence semantics: precedence[i][k] == true means task k must finish
// before task i starts, i.e. the inner list holds the *predecessors* of i.
struct ProcessSpec {
  std::vector<Task> tasks;
  std::vector<Agent> agents;
  // capability[i][j]: agent j can execute task i.
  std::vector<std::vector<bool>> capability;
  // precedence[i][k]: task k is a predecessor of task i.
  std::vector<std::vector<bool>> precedence;
  // nominal_duration[i][j] in seconds; meaningful iff capability[i][j].
  std::vector<std::vector<double>> nominal_duration;

  int num_tasks() const { return static_cast<int>(tasks.size()); }
  int num_agents() const { return static_cast<int>(agents.size()); }

  bool is_capable(int task, int agent) const { return capability[task][agent]; }
  double duration(int task, int agent) const { return nominal_duration[task][agent]; }

  // Index of the unique human agent. Valid after validation.
  int human_index() const;
  std::vector<int> robot_indices() const;
  std::vector<int> predecessors_of(int task) const;

  // True if `pred` must (transitively) finish before `task` starts.
  bool precedes(int pred, int task) const;
};

// Checks every ProcessSpec invariant and returns the spec unchanged.
// Throws: cyclic_precedence_error, no_capable_agent_error,
// non_positive_duration_error, spec_error (malformed shapes, agent set).
const ProcessSpec& validate_process(const ProcessSpec& spec);

// One scheduled task: start/end in seconds and the executing agent.
struct PlanTask {
  double start = 0.0;
  double end = 0.0;
  int agent = -1;
};

struct Plan {
  std::vector<PlanTask> tasks;  // indexed by task index

  int num_tasks() const { return static_cast<int>(tasks.size()); }
  double makespan() const;
};

// Verifies Plan invariants against a validated spec: one capable agent per
// task, end > start, no same-agent overlap, all precedences satisfied.
// Violations throw spec_error. `tol` absorbs solver tolerances.
void validate_plan(const Plan& plan, const ProcessSpec& spec, double tol = 1e-6);

// Temporal intersection of [s1,e1] and [s2,e2]; 0 when disjoint.
double overlap(double s1, double e1, double s2, double e2);

// Overlap stretched by a synergy coefficient.
double scaled_overlap(double ov, double synergy);

// Synergy coefficient from a conditional and an unconditioned duration.
// Throws non_positive_duration_error unless both are > 0.
double synergy_from_durations(double d_conditional, double d_nominal);

}  // namespace synplan
