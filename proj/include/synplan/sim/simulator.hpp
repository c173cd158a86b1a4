#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "synplan/process.hpp"
#include "synplan/sim/cell.hpp"
#include "synplan/sim/trace.hpp"

namespace synplan::sim {

struct SimConfig {
  double dt = 0.05;       // tick length, seconds
  std::uint64_t seed = 0;
  bool deterministic = false;  // multipliers pinned to 1
};

// Runtime task dispatcher: sorts the plan by planned start once, then per
// query issues, for each free agent, its earliest pending task whose planned
// start has arrived and whose predecessors have all finished.
class Dispatcher {
 public:
  Dispatcher(const Plan& plan, const ProcessSpec& spec);

  // Tasks to start now, at most one per agent.
  std::vector<int> dispatch(double now) const;
  void mark_started(int task);
  void mark_complete(int task);
  bool all_complete() const { return completed_count_ == spec_->num_tasks(); }

 private:
  const Plan* plan_;
  const ProcessSpec* spec_;
  std::vector<std::vector<int>> queue_;  // per agent, sorted by planned start
  std::vector<size_t> head_;
  std::vector<bool> busy_, completed_;
  int completed_count_ = 0;
};

// Tick-based execution of a plan in the cell. Human tasks run for their
// nominal duration times a seeded log-normal multiplier (1 when
// deterministic); robot tasks consume their tool path at v_nom scaled by the
// safety model against the current separation distance. Requires exactly one
// robot agent. Throws stalled_execution_error when execution exceeds ten
// horizon lengths (a zero-scale deadlock).
ExecutionTrace simulate(const Plan& plan, const ProcessSpec& spec,
                        const CellGeometry& geometry, const SafetyModel& safety,
                        const HumanVariability& variability, const SimConfig& config);

// Seeded feasible plan: uniform capable agent per task, random topological
// order, greedy earliest-start scheduling with nominal durations.
Plan random_plan(const ProcessSpec& spec, std::uint64_t seed);

// Per-tick separation series; throws sim_error on a tick-less trace.
std::vector<std::pair<double, double>> min_distance_series(const ExecutionTrace& trace);
double min_distance(const ExecutionTrace& trace);

}  // namespace synplan::sim
