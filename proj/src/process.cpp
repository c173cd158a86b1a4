#include "synplan/process.hpp"

#include <algorithm>
#include <sstream>

namespace synplan {

int ProcessSpec::human_index() const {
  for (int j = 0; j < num_agents(); ++j) {
    if (agents[j].kind == AgentKind::Human) return j;
  }
  throw spec_error("process has no human agent");
}

std::vector<int> ProcessSpec::robot_indices() const {
  std::vector<int> out;
  for (int j = 0; j < num_agents(); ++j) {
    if (agents[j].kind == AgentKind::Robot) out.push_back(j);
  }
  return out;
}

std::vector<int> ProcessSpec::predecessors_of(int task) const {
  std::vector<int> out;
  for (int k = 0; k < num_tasks(); ++k) {
    if (precedence[task][k]) out.push_back(k);
  }
  return out;
}

bool ProcessSpec::precedes(int pred, int task) const {
  // DFS over direct predecessors of `task`.
  std::vector<bool> seen(tasks.size(), false);
  std::vector<int> stack{task};
  while (!stack.empty()) {
    const int t = stack.back();
    stack.pop_back();
    for (int k = 0; k < num_tasks(); ++k) {
      if (!precedence[t][k] || seen[k]) continue;
      if (k == pred) return true;
      seen[k] = true;
      stack.push_back(k);
    }
  }
  return false;
}

double Plan::makespan() const {
  double m = 0.0;
  for (const auto& t : tasks) m = std::max(m, t.end);
  return m;
}

namespace {

// Returns a precedence cycle as "a -> b -> ... -> a", or empty if acyclic.
std::string find_cycle(const ProcessSpec& spec) {
  const int m = spec.num_tasks();
  // color: 0 unvisited, 1 on stack, 2 done
  std::vector<int> color(m, 0), parent(m, -1);
  for (int root = 0; root < m; ++root) {
    if (color[root] != 0) continue;
    std::vector<int> stack{root};
    while (!stack.empty()) {
      const int t = stack.back();
      if (color[t] == 0) {
        color[t] = 1;
        for (int k = 0; k < m; ++k) {
          if (!spec.precedence[t][k]) continue;
          if (color[k] == 1) {
            // Walk parents from t back to k.
            std::vector<int> cyc{k};
            for (int c = t; c != k && c != -1; c = parent[c]) cyc.push_back(c);
            std::reverse(cyc.begin(), cyc.end());
            std::ostringstream os;
            for (int c : cyc) os << spec.tasks[c].id << " -> ";
            os << spec.tasks[k].id;
            return os.str();
          }
          if (color[k] == 0) {
            parent[k] = t;
            stack.push_back(k);
          }
        }
      } else {
        color[t] = 2;
        stack.pop_back();
      }
    }
  }
  return {};
}

}  // namespace

const ProcessSpec& validate_process(const ProcessSpec& spec) {
  const int m = spec.num_tasks();
  const int n = spec.num_agents();
  if (m == 0) throw spec_error("process has no tasks");

  int humans = 0, robots = 0;
  for (const auto& a : spec.agents) {
    (a.kind == AgentKind::Human ? humans : robots)++;
  }
  if (humans != 1) throw spec_error("process must have exactly one human agent");
  if (robots < 1) throw spec_error("process must have at least one robot agent");

  for (int i = 0; i < m; ++i) {
    for (int k = i + 1; k < m; ++k) {
      if (spec.tasks[i].id == spec.tasks[k].id)
        throw spec_error("duplicate task id '" + spec.tasks[i].id + "'");
    }
  }
  for (int j = 0; j < n; ++j) {
    for (int l = j + 1; l < n; ++l) {
      if (spec.agents[j].id == spec.agents[l].id)
        throw spec_error("duplicate agent id '" + spec.agents[j].id + "'");
    }
  }

  auto shape_ok = [&](const auto& matrix, size_t cols) {
    if (matrix.size() != static_cast<size_t>(m)) return false;
    for (const auto& row : matrix) {
      if (row.size() != cols) return false;
    }
    return true;
  };
  if (!shape_ok(spec.capability, n) || !shape_ok(spec.nominal_duration, n) ||
      !shape_ok(spec.precedence, m)) {
    throw spec_error("capability/duration/precedence matrix shape mismatch");
  }

  for (int i = 0; i < m; ++i) {
    bool any = false;
    for (int j = 0; j < n; ++j) {
      if (!spec.capability[i][j]) continue;
      any = true;
      if (!(spec.nominal_duration[i][j] > 0.0))
        throw non_positive_duration_error(spec.tasks[i].id, spec.agents[j].id);
    }
    if (!any) throw no_capable_agent_error(spec.tasks[i].id);
  }

  const std::string cycle = find_cycle(spec);
  if (!cycle.empty()) throw cyclic_precedence_error(cycle);

  return spec;
}

void validate_plan(const Plan& plan, const ProcessSpec& spec, double tol) {
  const int m = spec.num_tasks();
  if (plan.num_tasks() != m) throw spec_error("plan/spec task count mismatch");
  for (int i = 0; i < m; ++i) {
    const auto& t = plan.tasks[i];
    if (t.agent < 0 || t.agent >= spec.num_agents())
      throw spec_error("plan assigns task '" + spec.tasks[i].id + "' to no agent");
    if (!spec.is_capable(i, t.agent))
      throw spec_error("plan assigns task '" + spec.tasks[i].id +
                       "' to incapable agent '" + spec.agents[t.agent].id + "'");
    if (!(t.end > t.start - tol))
      throw spec_error("plan task '" + spec.tasks[i].id + "' ends before it starts");
    if (t.start < -tol)
      throw spec_error("plan task '" + spec.tasks[i].id + "' starts before time 0");
  }
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < m; ++k) {
      if (i != k && spec.precedence[i][k] &&
          plan.tasks[i].start < plan.tasks[k].end - tol) {
        throw spec_error("plan violates precedence: '" + spec.tasks[k].id +
                         "' must finish before '" + spec.tasks[i].id + "' starts");
      }
    }
    for (int k = i + 1; k < m; ++k) {
      if (plan.tasks[i].agent != plan.tasks[k].agent) continue;
      if (overlap(plan.tasks[i].start, plan.tasks[i].end, plan.tasks[k].start,
                  plan.tasks[k].end) > tol) {
        throw spec_error("plan overlaps tasks '" + spec.tasks[i].id + "' and '" +
                         spec.tasks[k].id + "' on agent '" +
                         spec.agents[plan.tasks[i].agent].id + "'");
      }
    }
  }
}

double overlap(double s1, double e1, double s2, double e2) {
  const double dt = std::min(e1, e2) - std::max(s1, s2);
  return dt > 0.0 ? dt : 0.0;
}

double scaled_overlap(double ov, double synergy) { return synergy * ov; }

double synergy_from_durations(double d_conditional, double d_nominal) {
  if (!(d_conditional > 0.0)) throw non_positive_duration_error("<conditional>", "");
  if (!(d_nominal > 0.0)) throw non_positive_duration_error("<nominal>", "");
  return d_conditional / d_nominal;
}

}  // namespace synplan
