#pragma once

#include <string>
#include <vector>

#include "synplan/process.hpp"
#include "synplan/sim/trace.hpp"

namespace synplan::bench {

// Measured plan execution duration: the largest measured end time.
double metric_makespan(const sim::ExecutionTrace& trace);

std::vector<double> distance_grid(double d_max, double step);

// Mean over runs of the within-run fraction of per-tick separation samples
// at or below each grid distance.
std::vector<double> metric_distance_cdf(
    const std::vector<const sim::ExecutionTrace*>& traces,
    const std::vector<double>& grid);

// Fraction of runs whose minimum separation lies at or below each grid
// distance (the distribution of per-run minima).
std::vector<double> dmin_cdf(const std::vector<const sim::ExecutionTrace*>& traces,
                             const std::vector<double>& grid);

// One row per task: agent, planned start/end and, when a trace is given,
// measured start/end.
std::string render_gantt_csv(const Plan& plan, const ProcessSpec& spec,
                             const sim::ExecutionTrace* trace = nullptr);

}  // namespace synplan::bench
