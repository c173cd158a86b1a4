#include "synplan/sim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace synplan::sim {

Dispatcher::Dispatcher(const Plan& plan, const ProcessSpec& spec)
    : plan_(&plan), spec_(&spec) {
  validate_plan(plan, spec);
  queue_.resize(spec.num_agents());
  for (int i = 0; i < spec.num_tasks(); ++i)
    queue_[plan.tasks[i].agent].push_back(i);
  for (auto& q : queue_)
    std::sort(q.begin(), q.end(), [&](int a, int b) {
      if (plan.tasks[a].start != plan.tasks[b].start)
        return plan.tasks[a].start < plan.tasks[b].start;
      return a < b;
    });
  head_.assign(spec.num_agents(), 0);
  busy_.assign(spec.num_agents(), false);
  completed_.assign(spec.num_tasks(), false);
}

std::vector<int> Dispatcher::dispatch(double now) const {
  std::vector<int> starts;
  for (int j = 0; j < spec_->num_agents(); ++j) {
    if (busy_[j] || head_[j] >= queue_[j].size()) continue;
    const int t = queue_[j][head_[j]];
    if (now < plan_->tasks[t].start) continue;  // never start early
    bool preds_done = true;
    for (int k = 0; k < spec_->num_tasks() && preds_done; ++k)
      if (spec_->precedence[t][k] && !completed_[k]) preds_done = false;
    if (preds_done) starts.push_back(t);
  }
  return starts;
}

void Dispatcher::mark_started(int task) {
  const int agent = plan_->tasks[task].agent;
  busy_[agent] = true;
  ++head_[agent];
}

void Dispatcher::mark_complete(int task) {
  busy_[plan_->tasks[task].agent] = false;
  if (!completed_[task]) {
    completed_[task] = true;
    ++completed_count_;
  }
}

namespace {

struct ExecState {
  int current = -1;       // executing task or -1
  double started = 0.0;
  double human_end = 0.0;  // human tasks: fixed completion time
  double progress = 0.0;   // robot tasks: consumed arc length
};

}  // namespace

ExecutionTrace simulate(const Plan& plan, const ProcessSpec& spec,
                        const CellGeometry& geometry, const SafetyModel& safety,
                        const HumanVariability& variability,
                        const SimConfig& config) {
  validate_process(spec);
  geometry.validate_for(spec);
  safety.validate();
  if (!(config.dt > 0.0)) throw sim_error("tick length must be positive");
  const auto robots = spec.robot_indices();
  if (robots.size() != 1)
    throw sim_error("the cell simulator supports exactly one robot agent");
  const int robot = robots[0];
  const int human = spec.human_index();

  // Watchdog horizon: ten times a generous serial-schedule bound.
  double serial = 0.0;
  for (int i = 0; i < spec.num_tasks(); ++i) {
    double longest = 0.0;
    for (int j = 0; j < spec.num_agents(); ++j)
      if (spec.is_capable(i, j)) longest = std::max(longest, spec.duration(i, j));
    serial += longest;
  }
  const double watchdog = 10.0 * 1.5 * serial + plan.makespan();

  // Per-task human duration multipliers, presampled for determinism.
  std::mt19937_64 rng(config.seed);
  std::vector<double> mult(spec.num_tasks(), 1.0);
  if (!config.deterministic) {
    std::normal_distribution<double> gauss(0.0, variability.sigma_h);
    for (int i = 0; i < spec.num_tasks(); ++i) mult[i] = std::exp(gauss(rng));
  }

  ExecutionTrace trace;
  trace.seed = config.seed;
  trace.dt = config.dt;
  trace.tasks.resize(spec.num_tasks());
  for (int i = 0; i < spec.num_tasks(); ++i) {
    trace.tasks[i].task = i;
    trace.tasks[i].agent = plan.tasks[i].agent;
  }

  Dispatcher dispatcher(plan, spec);
  std::vector<ExecState> exec(spec.num_agents());
  Vec2 human_pos = geometry.human_home;
  Vec2 robot_pos = geometry.robot_base;

  for (std::int64_t tick = 0; !dispatcher.all_complete(); ++tick) {
    const double now = static_cast<double>(tick) * config.dt;
    if (now > watchdog) {
      std::ostringstream os;
      os << "execution stalled beyond the watchdog horizon; pending tasks:";
      for (int i = 0; i < spec.num_tasks(); ++i)
        if (trace.tasks[i].end == 0.0) os << ' ' << spec.tasks[i].id;
      throw stalled_execution_error(os.str());
    }

    for (int t : dispatcher.dispatch(now)) {
      const int agent = plan.tasks[t].agent;
      dispatcher.mark_started(t);
      auto& st = exec[agent];
      st.current = t;
      st.started = now;
      trace.tasks[t].start = now;
      if (agent == human) {
        human_pos = geometry.human_anchor.at(t);
        st.human_end = now + spec.duration(t, human) * mult[t];
      } else {
        st.progress = 0.0;
        robot_pos = geometry.robot_path.at(t).point_at(0.0);
      }
    }

    const double separation = distance(human_pos, robot_pos);
    double scale = 1.0;
    const int robot_task = exec[robot].current;
    if (robot_task >= 0)
      scale = safety_scale(separation, safety,
                           geometry.robot_path.at(robot_task).v_nom);
    trace.ticks.push_back({now, human_pos.x, human_pos.y, robot_pos.x, robot_pos.y,
                           separation, scale});

    // Advance one tick.
    for (int j = 0; j < spec.num_agents(); ++j) {
      auto& st = exec[j];
      if (st.current < 0) continue;
      if (j == human) {
        if (now + config.dt >= st.human_end) {
          trace.tasks[st.current].end = st.human_end;
          dispatcher.mark_complete(st.current);
          st.current = -1;
        }
      } else {
        const auto& path = geometry.robot_path.at(st.current);
        const double step = path.v_nom * scale * config.dt;
        const double remaining = path.length() - st.progress;
        if (step >= remaining && step > 0.0) {
          // Completes inside this tick; record the exact instant.
          const double t_done = now + remaining / (path.v_nom * scale);
          st.progress = path.length();
          robot_pos = path.point_at(st.progress);
          trace.tasks[st.current].end = t_done;
          dispatcher.mark_complete(st.current);
          st.current = -1;
        } else {
          st.progress += step;
          robot_pos = path.point_at(st.progress);
        }
      }
    }
  }

  // Human-task idle: the window portion no robot execution covers.
  for (int k = 0; k < spec.num_tasks(); ++k) {
    if (plan.tasks[k].agent != human) continue;
    const auto& rec = trace.tasks[k];
    double covered = 0.0;
    for (int i = 0; i < spec.num_tasks(); ++i) {
      if (plan.tasks[i].agent == human) continue;
      covered += overlap(trace.tasks[i].start, trace.tasks[i].end, rec.start, rec.end);
    }
    trace.tasks[k].idle = std::max(0.0, (rec.end - rec.start) - covered);
  }
  return trace;
}

Plan random_plan(const ProcessSpec& spec, std::uint64_t seed) {
  validate_process(spec);
  std::mt19937_64 rng(seed);
  const int m = spec.num_tasks();

  Plan plan;
  plan.tasks.resize(m);
  for (int i = 0; i < m; ++i) {
    std::vector<int> capable;
    for (int j = 0; j < spec.num_agents(); ++j)
      if (spec.is_capable(i, j)) capable.push_back(j);
    std::uniform_int_distribution<size_t> pick(0, capable.size() - 1);
    plan.tasks[i].agent = capable[pick(rng)];
  }

  // Random topological order over the precedence relation.
  std::vector<int> order;
  std::vector<bool> scheduled(m, false);
  while (static_cast<int>(order.size()) < m) {
    std::vector<int> ready;
    for (int i = 0; i < m; ++i) {
      if (scheduled[i]) continue;
      bool ok = true;
      for (int k = 0; k < m && ok; ++k)
        if (spec.precedence[i][k] && !scheduled[k]) ok = false;
      if (ok) ready.push_back(i);
    }
    std::uniform_int_distribution<size_t> pick(0, ready.size() - 1);
    const int chosen = ready[pick(rng)];
    scheduled[chosen] = true;
    order.push_back(chosen);
  }

  // Greedy earliest feasible start with nominal durations.
  std::vector<double> agent_avail(spec.num_agents(), 0.0);
  for (int t : order) {
    const int agent = plan.tasks[t].agent;
    double start = agent_avail[agent];
    for (int k = 0; k < m; ++k)
      if (spec.precedence[t][k]) start = std::max(start, plan.tasks[k].end);
    plan.tasks[t].start = start;
    plan.tasks[t].end = start + spec.duration(t, agent);
    agent_avail[agent] = plan.tasks[t].end;
  }
  validate_plan(plan, spec);
  return plan;
}

std::vector<std::pair<double, double>> min_distance_series(
    const ExecutionTrace& trace) {
  if (trace.ticks.empty()) throw sim_error("trace has no tick records");
  std::vector<std::pair<double, double>> out;
  out.reserve(trace.ticks.size());
  for (const auto& t : trace.ticks) out.emplace_back(t.time, t.separation);
  return out;
}

double min_distance(const ExecutionTrace& trace) {
  const auto series = min_distance_series(trace);
  double best = series.front().second;
  for (const auto& [t, d] : series) best = std::min(best, d);
  return best;
}

}  // namespace synplan::sim
