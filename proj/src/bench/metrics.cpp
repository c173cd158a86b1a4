#include "synplan/bench/metrics.hpp"

#include <algorithm>
#include <sstream>

#include "synplan/sim/simulator.hpp"

namespace synplan::bench {

double metric_makespan(const sim::ExecutionTrace& trace) {
  if (trace.tasks.empty()) throw sim_error("trace has no task records");
  return trace.measured_makespan();
}

std::vector<double> distance_grid(double d_max, double step) {
  if (!(d_max > 0.0) || !(step > 0.0))
    throw spec_error("distance grid needs positive d_max and step");
  std::vector<double> grid;
  for (double d = 0.0; d <= d_max + 1e-12; d += step) grid.push_back(d);
  return grid;
}

std::vector<double> metric_distance_cdf(
    const std::vector<const sim::ExecutionTrace*>& traces,
    const std::vector<double>& grid) {
  if (traces.empty()) throw sim_error("no traces for the distance metric");
  std::vector<double> cdf(grid.size(), 0.0);
  for (const auto* trace : traces) {
    if (trace->ticks.empty()) throw sim_error("trace has no tick records");
    std::vector<double> samples;
    samples.reserve(trace->ticks.size());
    for (const auto& t : trace->ticks) samples.push_back(t.separation);
    std::sort(samples.begin(), samples.end());
    for (size_t g = 0; g < grid.size(); ++g) {
      const auto upper =
          std::upper_bound(samples.begin(), samples.end(), grid[g]);
      cdf[g] += static_cast<double>(upper - samples.begin()) /
                static_cast<double>(samples.size());
    }
  }
  for (auto& v : cdf) v /= static_cast<double>(traces.size());
  return cdf;
}

std::vector<double> dmin_cdf(const std::vector<const sim::ExecutionTrace*>& traces,
                             const std::vector<double>& grid) {
  if (traces.empty()) throw sim_error("no traces for the distance metric");
  std::vector<double> minima;
  for (const auto* trace : traces) minima.push_back(sim::min_distance(*trace));
  std::sort(minima.begin(), minima.end());
  std::vector<double> cdf(grid.size(), 0.0);
  for (size_t g = 0; g < grid.size(); ++g) {
    const auto upper = std::upper_bound(minima.begin(), minima.end(), grid[g]);
    cdf[g] = static_cast<double>(upper - minima.begin()) /
             static_cast<double>(minima.size());
  }
  return cdf;
}

std::string render_gantt_csv(const Plan& plan, const ProcessSpec& spec,
                             const sim::ExecutionTrace* trace) {
  validate_plan(plan, spec, 1e-5);
  std::ostringstream os;
  os.precision(10);
  os << "task,agent,planned_start,planned_end,measured_start,measured_end\n";
  for (int i = 0; i < spec.num_tasks(); ++i) {
    const auto& t = plan.tasks[i];
    os << spec.tasks[i].id << ',' << spec.agents[t.agent].id << ',' << t.start
       << ',' << t.end << ',';
    if (trace && i < static_cast<int>(trace->tasks.size()))
      os << trace->tasks[i].start << ',' << trace->tasks[i].end;
    else
      os << ',';
    os << '\n';
  }
  return os.str();
}

}  // namespace synplan::bench
