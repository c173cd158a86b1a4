#include "synplan/learn/observation.hpp"

namespace synplan::learn {

std::vector<Observation> extract_observations(const sim::ExecutionTrace& trace,
                                              const Plan& plan,
                                              const ProcessSpec& spec) {
  const int m = spec.num_tasks();
  if (plan.num_tasks() != m || static_cast<int>(trace.tasks.size()) != m)
    throw spec_error("trace/plan/spec task sets do not match");
  for (int i = 0; i < m; ++i) {
    if (trace.tasks[i].task != i)
      throw spec_error("trace task records are not the spec's task set");
    if (trace.tasks[i].agent != plan.tasks[i].agent)
      throw spec_error("trace and plan disagree on the agent of task '" +
                       spec.tasks[i].id + "'");
  }

  const int human = spec.human_index();
  std::vector<Observation> out;
  for (int k = 0; k < m; ++k) {
    if (plan.tasks[k].agent != human) continue;
    Observation obs;
    obs.human_task = k;
    obs.measured_duration = trace.tasks[k].end - trace.tasks[k].start;
    obs.idle = trace.tasks[k].idle;
    for (int i = 0; i < m; ++i) {
      if (i == k) continue;
      const int agent = plan.tasks[i].agent;
      if (spec.agents[agent].kind != AgentKind::Robot) continue;
      ObservationRow row;
      row.robot_agent = agent;
      row.robot_task = i;
      row.planned_ov = overlap(plan.tasks[i].start, plan.tasks[i].end,
                               plan.tasks[k].start, plan.tasks[k].end);
      row.a_flag = 1.0;
      obs.rows.push_back(row);
    }
    out.push_back(std::move(obs));
  }
  return out;
}

}  // namespace synplan::learn
