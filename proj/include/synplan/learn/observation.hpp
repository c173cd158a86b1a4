#pragma once

#include <vector>

#include "synplan/process.hpp"
#include "synplan/sim/trace.hpp"

namespace synplan::learn {

// One (robot agent, robot task) regressor of a human-task observation:
// the planned nominal overlap with the human task, gated by the allocation
// flag of the robot task in the executed plan.
struct ObservationRow {
  int robot_agent = -1;
  int robot_task = -1;
  double planned_ov = 0.0;
  double a_flag = 1.0;
};

// Measurements around one executed human task: its measured duration, the
// portion of its window not covered by any robot execution (idle), and one
// row per robot-allocated task.
struct Observation {
  int human_task = -1;
  double measured_duration = 0.0;
  double idle = 0.0;
  std::vector<ObservationRow> rows;
};

// Builds one Observation per human-executed task in the trace. Planned
// overlaps come from the plan's intervals, measured quantities from the
// trace. Throws spec_error when trace and plan disagree on the task set.
std::vector<Observation> extract_observations(const sim::ExecutionTrace& trace,
                                              const Plan& plan,
                                              const ProcessSpec& spec);

}  // namespace synplan::learn
