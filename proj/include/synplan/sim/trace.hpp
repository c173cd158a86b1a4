#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "synplan/errors.hpp"

namespace synplan::sim {

struct TaskRecord {
  int task = -1;
  int agent = -1;
  double start = 0.0;
  double end = 0.0;
  // Human tasks only: seconds of the task window during which no robot task
  // was executing. Zero for robot tasks.
  double idle = 0.0;
};

struct TickRecord {
  double time = 0.0;
  double human_x = 0.0, human_y = 0.0;
  double robot_x = 0.0, robot_y = 0.0;
  double separation = 0.0;  // S_d, meters
  double scale = 1.0;       // applied robot speed scale in [0,1]
};

// Recorded timeline of one simulated run.
struct ExecutionTrace {
  std::uint64_t seed = 0;
  double dt = 0.0;
  std::vector<TaskRecord> tasks;  // indexed by task index
  std::vector<TickRecord> ticks;

  double measured_makespan() const;
};

// JSONL: one header object, then one record object per line.
void write_trace_jsonl(const ExecutionTrace& trace, std::ostream& os);
ExecutionTrace read_trace_jsonl(std::istream& is);

}  // namespace synplan::sim
