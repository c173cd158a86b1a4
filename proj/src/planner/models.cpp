#include "synplan/planner/models.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace synplan::planner {

using milp::LinearTerm;
using milp::MilpProblem;
using milp::Relation;

std::string to_string(PlannerKind k) {
  switch (k) {
    case PlannerKind::Baseline: return "baseline";
    case PlannerKind::NotNeighboring: return "not_neighboring";
    case PlannerKind::Rstp: return "rstp";
    case PlannerKind::Stp: return "stp";
  }
  return "unknown";
}

PlannerKind planner_kind_from_string(const std::string& name) {
  if (name == "baseline") return PlannerKind::Baseline;
  if (name == "not_neighboring") return PlannerKind::NotNeighboring;
  if (name == "rstp") return PlannerKind::Rstp;
  if (name == "stp") return PlannerKind::Stp;
  throw spec_error("unknown planner kind '" + name + "'");
}

double horizon_bound(const ProcessSpec& spec, const SynergyMatrix* synergies) {
  double total = 0.0;
  for (int i = 0; i < spec.num_tasks(); ++i) {
    double longest = 0.0;
    for (int j = 0; j < spec.num_agents(); ++j)
      if (spec.is_capable(i, j)) longest = std::max(longest, spec.duration(i, j));
    total += longest;
  }
  const double stretch = synergies ? std::max(1.0, synergies->max_value()) : 1.0;
  return 1.5 * total * stretch;
}

namespace {

std::string idx2(const std::string& base, int i, int k) {
  return base + "_" + std::to_string(i) + "_" + std::to_string(k);
}

// Shared machinery for all four model kinds.
class Builder {
 public:
  Builder(const ProcessSpec& spec, const SynergyMatrix* synergies, PlannerKind kind)
      : spec_(spec), syn_(synergies), kind_(kind) {
    validate_process(spec);
    art_.kind = kind;
    art_.horizon = horizon_bound(spec, synergies);
    art_.big_m = art_.horizon;
  }

  ModelArtifacts build(const std::vector<std::pair<int, int>>& nn_pairs) {
    const int m = spec_.num_tasks();
    auto& p = art_.problem;
    const double h = art_.horizon;

    for (int i = 0; i < m; ++i) {
      art_.ts.push_back(p.add_continuous("ts_" + std::to_string(i), 0.0, h));
      art_.te.push_back(p.add_continuous("te_" + std::to_string(i), 0.0, h));
    }
    art_.te_max = p.add_continuous("te_max", 0.0, h);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < spec_.num_agents(); ++j)
        if (spec_.is_capable(i, j))
          art_.alloc[{j, i}] = p.add_binary(idx2("a", j, i), /*branch_priority=*/3);

    add_goal_rows();
    add_precedence_rows();
    add_non_overlap_rows();
    add_pair_machinery(nn_pairs);
    add_performance_rows();
    add_objective();
    return std::move(art_);
  }

 private:
  bool order_forced(int i, int k) const {
    return spec_.precedes(i, k) || spec_.precedes(k, i);
  }

  double synergy(int robot, int robot_task, int human_task) const {
    return syn_ ? syn_->value(robot, robot_task, human_task) : 1.0;
  }

  // Directions (r, i, k) with a synergy effect: task i on robot r, task k on
  // the human, s != 1, and concurrency not already excluded by precedence.
  std::vector<std::tuple<int, int, int>> synergy_directions() const {
    std::vector<std::tuple<int, int, int>> out;
    if (!syn_) return out;
    const int human = spec_.human_index();
    for (int i = 0; i < spec_.num_tasks(); ++i) {
      for (int k = 0; k < spec_.num_tasks(); ++k) {
        if (i == k || !spec_.is_capable(k, human) || order_forced(i, k)) continue;
        for (int r : spec_.robot_indices()) {
          if (!spec_.is_capable(i, r)) continue;
          if (synergy(r, i, k) != 1.0) out.emplace_back(r, i, k);
        }
      }
    }
    return out;
  }

  void add_goal_rows() {
    for (int i = 0; i < spec_.num_tasks(); ++i) {
      std::vector<LinearTerm> terms;
      for (int j = 0; j < spec_.num_agents(); ++j)
        if (spec_.is_capable(i, j)) terms.push_back({art_.alloc.at({j, i}), 1.0});
      art_.problem.add_constraint("goal_" + std::to_string(i), terms, Relation::Eq,
                                  1.0);
    }
  }

  void add_precedence_rows() {
    for (int i = 0; i < spec_.num_tasks(); ++i)
      for (int k = 0; k < spec_.num_tasks(); ++k)
        if (i != k && spec_.precedence[i][k])
          art_.problem.add_constraint(idx2("prec", i, k),
                                      {{art_.ts[i], 1.0}, {art_.te[k], -1.0}},
                                      Relation::Ge, 0.0);
  }

  // Disjunctive big-M pair: delta = 1 puts i after k, delta = 0 the reverse;
  // both rows relax completely unless agent j executes both tasks.
  void add_non_overlap_rows() {
    const double M = art_.big_m;
    for (int i = 0; i < spec_.num_tasks(); ++i) {
      for (int k = i + 1; k < spec_.num_tasks(); ++k) {
        if (order_forced(i, k)) continue;
        std::vector<int> shared;
        for (int j = 0; j < spec_.num_agents(); ++j)
          if (spec_.is_capable(i, j) && spec_.is_capable(k, j)) shared.push_back(j);
        if (shared.empty()) continue;
        const int delta = art_.problem.add_binary(idx2("delta", i, k), 2);
        art_.ordering[{i, k}] = delta;
        for (int j : shared) {
          const int aji = art_.alloc.at({j, i});
          const int ajk = art_.alloc.at({j, k});
          art_.problem.add_constraint(
              idx2("noov", i, k) + "_" + std::to_string(j) + "_a",
              {{art_.ts[i], 1.0}, {art_.te[k], -1.0}, {delta, -M},
               {aji, -M}, {ajk, -M}},
              Relation::Ge, -3.0 * M);
          art_.problem.add_constraint(
              idx2("noov", i, k) + "_" + std::to_string(j) + "_b",
              {{art_.ts[k], 1.0}, {art_.te[i], -1.0}, {delta, M},
               {aji, -M}, {ajk, -M}},
              Relation::Ge, -2.0 * M);
        }
      }
    }
  }

  // Overlap machinery for one unordered pair: exact max of starts, min of
  // ends and positive-part overlap.
  void add_pair(int i, int k) {
    if (i > k) std::swap(i, k);
    if (art_.pairs.count({i, k})) return;
    auto& p = art_.problem;
    const double h = art_.horizon;
    const double M = art_.big_m;
    PairVars v;
    v.ts_max = p.add_continuous(idx2("tsmax", i, k), 0.0, h);
    v.te_min = p.add_continuous(idx2("temin", i, k), 0.0, h);
    v.ov = p.add_continuous(idx2("ov", i, k), 0.0, h);
    v.sig1 = p.add_binary(idx2("sig1", i, k), 0);
    v.sig2 = p.add_binary(idx2("sig2", i, k), 0);
    v.sig3 = p.add_binary(idx2("sig3", i, k), 1);

    p.add_constraint(idx2("tsmax", i, k) + "_ge_i",
                     {{v.ts_max, 1.0}, {art_.ts[i], -1.0}}, Relation::Ge, 0.0);
    p.add_constraint(idx2("tsmax", i, k) + "_ge_k",
                     {{v.ts_max, 1.0}, {art_.ts[k], -1.0}}, Relation::Ge, 0.0);
    p.add_constraint(idx2("tsmax", i, k) + "_le_i",
                     {{v.ts_max, 1.0}, {art_.ts[i], -1.0}, {v.sig1, M}},
                     Relation::Le, M);
    p.add_constraint(idx2("tsmax", i, k) + "_le_k",
                     {{v.ts_max, 1.0}, {art_.ts[k], -1.0}, {v.sig1, -M}},
                     Relation::Le, 0.0);

    p.add_constraint(idx2("temin", i, k) + "_le_i",
                     {{v.te_min, 1.0}, {art_.te[i], -1.0}}, Relation::Le, 0.0);
    p.add_constraint(idx2("temin", i, k) + "_le_k",
                     {{v.te_min, 1.0}, {art_.te[k], -1.0}}, Relation::Le, 0.0);
    p.add_constraint(idx2("temin", i, k) + "_ge_i",
                     {{v.te_min, 1.0}, {art_.te[i], -1.0}, {v.sig2, -M}},
                     Relation::Ge, -M);
    p.add_constraint(idx2("temin", i, k) + "_ge_k",
                     {{v.te_min, 1.0}, {art_.te[k], -1.0}, {v.sig2, M}},
                     Relation::Ge, 0.0);

    // ov = max(0, te_min - ts_max); sig3 selects the zero branch. The lower
    // bound keeps the overlap honest when stretching makes it expensive.
    p.add_constraint(idx2("ov", i, k) + "_le_dt",
                     {{v.ov, 1.0}, {v.te_min, -1.0}, {v.ts_max, 1.0}, {v.sig3, -M}},
                     Relation::Le, 0.0);
    p.add_constraint(idx2("ov", i, k) + "_zero",
                     {{v.ov, 1.0}, {v.sig3, M}}, Relation::Le, M);
    p.add_constraint(idx2("ov", i, k) + "_ge_dt",
                     {{v.ov, 1.0}, {v.te_min, -1.0}, {v.ts_max, 1.0}},
                     Relation::Ge, 0.0);
    // Valid cuts: an overlap never exceeds either task's duration. Redundant
    // for integral selectors but they tighten the LP relaxation a lot.
    p.add_constraint(idx2("ov", i, k) + "_cut_i",
                     {{v.ov, 1.0}, {art_.te[i], -1.0}, {art_.ts[i], 1.0}},
                     Relation::Le, 0.0);
    p.add_constraint(idx2("ov", i, k) + "_cut_k",
                     {{v.ov, 1.0}, {art_.te[k], -1.0}, {art_.ts[k], 1.0}},
                     Relation::Le, 0.0);

    art_.pairs[{i, k}] = v;
  }

  // alpha_r_i_k equals ov_{i,k} iff task i runs on robot r and task k on the
  // human, else 0.
  void add_alpha(int r, int i, int k) {
    auto& p = art_.problem;
    const double M = art_.big_m;
    const int human = spec_.human_index();
    const int a_ri = art_.alloc.at({r, i});
    const int a_hk = art_.alloc.at({human, k});
    const int ov = art_.pairs.at({std::min(i, k), std::max(i, k)}).ov;
    const int alpha = p.add_continuous(
        "alpha_" + std::to_string(r) + "_" + std::to_string(i) + "_" +
            std::to_string(k),
        -art_.horizon, art_.horizon);
    art_.alpha[{r, i, k}] = alpha;

    const std::string base = "alpha_" + std::to_string(r) + "_" +
                             std::to_string(i) + "_" + std::to_string(k);
    p.add_constraint(base + "_le_ov",
                     {{alpha, 1.0}, {ov, -1.0}, {a_ri, M}, {a_hk, M}},
                     Relation::Le, 2.0 * M);
    p.add_constraint(base + "_ge_ov",
                     {{alpha, 1.0}, {ov, -1.0}, {a_ri, -M}, {a_hk, -M}},
                     Relation::Ge, -2.0 * M);
    p.add_constraint(base + "_le_ri", {{alpha, 1.0}, {a_ri, -M}}, Relation::Le, 0.0);
    p.add_constraint(base + "_ge_ri", {{alpha, 1.0}, {a_ri, M}}, Relation::Ge, 0.0);
    p.add_constraint(base + "_le_hk", {{alpha, 1.0}, {a_hk, -M}}, Relation::Le, 0.0);
    p.add_constraint(base + "_ge_hk", {{alpha, 1.0}, {a_hk, M}}, Relation::Ge, 0.0);
  }

  void add_pair_machinery(const std::vector<std::pair<int, int>>& nn_pairs) {
    for (const auto& [r, i, k] : synergy_directions()) {
      add_pair(i, k);
      add_alpha(r, i, k);
    }
    const double M = art_.big_m;
    const int human = spec_.human_index();
    for (auto [i, k] : nn_pairs) {
      if (i == k || std::min(i, k) < 0 || std::max(i, k) >= spec_.num_tasks())
        throw unknown_task_in_pair_error(
            "not-neighboring pair references an unknown task");
      if (i > k) std::swap(i, k);
      if (order_forced(i, k)) continue;  // precedence already excludes overlap
      add_pair(i, k);
      const int ov = art_.pairs.at({i, k}).ov;
      // ov must vanish whenever the pair is split across a human and a robot.
      for (const auto& [robot_task, human_task] : {std::pair{i, k}, std::pair{k, i}}) {
        if (!spec_.is_capable(human_task, human)) continue;
        std::vector<LinearTerm> terms{{ov, 1.0},
                                      {art_.alloc.at({human, human_task}), M}};
        bool robot_possible = false;
        for (int r : spec_.robot_indices()) {
          if (!spec_.is_capable(robot_task, r)) continue;
          terms.push_back({art_.alloc.at({r, robot_task}), M});
          robot_possible = true;
        }
        if (!robot_possible) continue;
        art_.problem.add_constraint(
            idx2("nn", i, k) + (robot_task == i ? "_rh" : "_hr"), terms,
            Relation::Le, 2.0 * M);
      }
    }
  }

  void add_performance_rows() {
    const bool adapted = kind_ == PlannerKind::Stp;
    for (int i = 0; i < spec_.num_tasks(); ++i) {
      std::vector<LinearTerm> terms{{art_.te[i], 1.0}, {art_.ts[i], -1.0}};
      for (int j = 0; j < spec_.num_agents(); ++j)
        if (spec_.is_capable(i, j))
          terms.push_back({art_.alloc.at({j, i}), -spec_.duration(i, j)});
      if (adapted) {
        for (const auto& [key, alpha] : art_.alpha) {
          const auto& [r, task, k] = key;
          if (task != i) continue;
          terms.push_back({alpha, -(synergy(r, task, k) - 1.0)});
        }
      }
      art_.problem.add_constraint("perf_" + std::to_string(i), terms, Relation::Eq,
                                  0.0);
    }
  }

  void add_objective() {
    auto& p = art_.problem;
    for (int i = 0; i < spec_.num_tasks(); ++i)
      p.add_constraint("mkspan_" + std::to_string(i),
                       {{art_.te_max, 1.0}, {art_.te[i], -1.0}}, Relation::Ge, 0.0);
    std::vector<LinearTerm> obj{{art_.te_max, 1.0}};
    if (kind_ == PlannerKind::Rstp) {
      for (const auto& [key, alpha] : art_.alpha) {
        const auto& [r, i, k] = key;
        obj.push_back({alpha, synergy(r, i, k) - 1.0});
      }
    }
    p.set_objective(obj);
  }

  const ProcessSpec& spec_;
  const SynergyMatrix* syn_;
  PlannerKind kind_;
  ModelArtifacts art_;
};

}  // namespace

ModelArtifacts build_baseline(const ProcessSpec& spec) {
  return Builder(spec, nullptr, PlannerKind::Baseline).build({});
}

ModelArtifacts build_not_neighboring(const ProcessSpec& spec,
                                     const std::vector<std::pair<int, int>>& pairs) {
  return Builder(spec, nullptr, PlannerKind::NotNeighboring).build(pairs);
}

ModelArtifacts build_stp(const ProcessSpec& spec, const SynergyMatrix& synergies) {
  return Builder(spec, &synergies, PlannerKind::Stp).build({});
}

ModelArtifacts build_rstp(const ProcessSpec& spec, const SynergyMatrix& synergies) {
  return Builder(spec, &synergies, PlannerKind::Rstp).build({});
}

Plan extract_plan(const ModelArtifacts& artifacts, const milp::MilpSolution& solution,
                  const ProcessSpec& spec, double eps_int) {
  if (!solution.has_solution())
    throw infeasible_solution_error("solution carries no assignment");
  const auto& x = solution.assignment;
  Plan plan;
  plan.tasks.resize(spec.num_tasks());
  for (int i = 0; i < spec.num_tasks(); ++i) {
    plan.tasks[i].start = x.at(artifacts.ts[i]);
    plan.tasks[i].end = x.at(artifacts.te[i]);
    int chosen = -1;
    for (int j = 0; j < spec.num_agents(); ++j) {
      const auto it = artifacts.alloc.find({j, i});
      if (it == artifacts.alloc.end()) continue;
      const double v = x.at(it->second);
      if (std::abs(v - std::round(v)) > eps_int)
        throw integrality_violation_error(
            "allocation variable " + artifacts.problem.variables()[it->second].name +
            " is fractional");
      if (std::lround(v) == 1) {
        if (chosen >= 0)
          throw infeasible_solution_error("task assigned to two agents");
        chosen = j;
      }
    }
    if (chosen < 0)
      throw infeasible_solution_error("task '" + spec.tasks[i].id + "' unassigned");
    plan.tasks[i].agent = chosen;
  }
  try {
    validate_plan(plan, spec, 1e-5);
  } catch (const spec_error& e) {
    throw infeasible_solution_error(e.what());
  }
  return plan;
}

double delta_s(const Plan& plan, const ProcessSpec& spec,
               const SynergyMatrix& synergies) {
  const int human = spec.human_index();
  double total = 0.0;
  for (int i = 0; i < spec.num_tasks(); ++i) {
    const auto& ti = plan.tasks[i];
    if (ti.agent == human || spec.agents[ti.agent].kind != AgentKind::Robot) continue;
    for (int k = 0; k < spec.num_tasks(); ++k) {
      if (k == i || plan.tasks[k].agent != human) continue;
      const double ov =
          overlap(ti.start, ti.end, plan.tasks[k].start, plan.tasks[k].end);
      total += ov * (synergies.value(ti.agent, i, k) - 1.0);
    }
  }
  return total;
}

milp::SolverConfig default_solver_config(PlannerKind kind) {
  milp::SolverConfig cfg;
  switch (kind) {
    case PlannerKind::Stp:
      cfg.gap_target = 0.10;
      cfg.time_limit = 240.0;
      break;
    case PlannerKind::Rstp:
      cfg.gap_target = 0.02;
      cfg.time_limit = 60.0;
      break;
    default:
      cfg.gap_target = 0.0;
      cfg.time_limit = 60.0;
      break;
  }
  return cfg;
}

}  // namespace synplan::planner
