#include "synplan/milp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace synplan::milp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBoundTol = 1e-9;  // absolute incumbent-improvement tolerance

struct Node {
  double bound = -kInf;
  std::int64_t id = 0;
  // Binary-variable bound overrides, aligned with the solver's binary list.
  std::vector<unsigned char> blb, bub;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
    return a.id > b.id;
  }
};

class BranchAndBound {
 public:
  BranchAndBound(const MilpProblem& p, const SolverConfig& cfg)
      : p_(p), cfg_(cfg) {
    for (int j = 0; j < p.num_variables(); ++j)
      if (p.variables()[j].kind == VarKind::Binary) binaries_.push_back(j);
    base_lb_.resize(p.num_variables());
    base_ub_.resize(p.num_variables());
    for (int j = 0; j < p.num_variables(); ++j) {
      base_lb_[j] = p.variables()[j].lb;
      base_ub_[j] = p.variables()[j].ub;
    }
    work_limit_ = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(cfg.time_limit * std::max(cfg.work_rate, 1.0)));
  }

  MilpSolution run() {
    MilpSolution sol;
    if (p_.trivially_infeasible()) return sol;  // Infeasible
    bool root_infeasible = false;

    try {
      Node root;
      root.id = next_id_++;
      root.blb.resize(binaries_.size());
      root.bub.resize(binaries_.size());
      for (size_t b = 0; b < binaries_.size(); ++b) {
        root.blb[b] = static_cast<unsigned char>(std::lround(base_lb_[binaries_[b]]));
        root.bub[b] = static_cast<unsigned char>(std::lround(base_ub_[binaries_[b]]));
      }
      LpResult lp = solve_node(root);
      if (lp.status == LpStatus::Infeasible) {
        root_infeasible = true;
      } else {
        root.bound = lp.objective;
        if (!accept_if_integral(lp)) {
          dive(root, lp);
          open_.push(root);
          search_loop();
        }
      }
    } catch (const effort_exhausted_error&) {
      exhausted_ = true;
    }

    if (root_infeasible) return sol;  // Infeasible
    finalize(sol);
    return sol;
  }

 private:
  LpResult solve_node(const Node& n) {
    LpOptions opt;
    opt.lb = base_lb_;
    opt.ub = base_ub_;
    for (size_t b = 0; b < binaries_.size(); ++b) {
      opt.lb[binaries_[b]] = n.blb[b];
      opt.ub[binaries_[b]] = n.bub[b];
    }
    opt.work_cells = &work_;
    opt.work_limit = work_limit_;
    LpResult r = solve_lp(p_, opt);
    pivots_ += r.pivots;
    return r;
  }

  double fractionality(const std::vector<double>& x, int var) const {
    return std::abs(x[var] - std::round(x[var]));
  }

  // Branching variable position in `binaries_`, or -1 if integral within
  // eps_int. Most-fractional, ties by lowest variable index; the "priority"
  // rule restricts candidates to the highest branch-priority group first.
  int pick_branch(const std::vector<double>& x) const {
    int best = -1;
    double best_frac = cfg_.eps_int;
    int best_prio = std::numeric_limits<int>::min();
    const bool use_priority = cfg_.branching == "priority";
    for (size_t b = 0; b < binaries_.size(); ++b) {
      const int j = binaries_[b];
      const double f = fractionality(x, j);
      if (f <= cfg_.eps_int) continue;
      const int prio = use_priority ? p_.variables()[j].branch_priority : 0;
      if (best < 0 || prio > best_prio ||
          (prio == best_prio && f > best_frac + 1e-15)) {
        best = static_cast<int>(b);
        best_frac = f;
        best_prio = prio;
      }
    }
    return best;
  }

  bool accept_if_integral(const LpResult& lp) {
    if (pick_branch(lp.x) >= 0) return false;
    offer_incumbent(lp.objective, lp.x);
    return true;
  }

  void offer_incumbent(double obj, const std::vector<double>& x) {
    if (!has_incumbent_ || obj < inc_obj_ - kBoundTol) {
      has_incumbent_ = true;
      inc_obj_ = obj;
      inc_x_ = x;
    }
  }

  double prune_threshold() const {
    if (!has_incumbent_) return kInf;
    return inc_obj_ - std::max(kBoundTol,
                               cfg_.gap_target * std::max(std::abs(inc_obj_), 1e-10));
  }

  // Discards a node that cannot beat the incumbent by more than the allowed
  // gap, remembering its bound so the final gap report stays honest.
  void prune(double bound) {
    pruned_bound_ = std::min(pruned_bound_, bound);
  }

  // Rounding dive from a node's LP point: fixes the most fractional binary to
  // its rounded value and re-solves, giving cheap early incumbents.
  void dive(const Node& from, const LpResult& start) {
    Node cur = from;
    LpResult lp = start;
    const int max_steps = static_cast<int>(binaries_.size()) + 4;
    bool flipped = false;
    for (int step = 0; step < max_steps; ++step) {
      const int b = pick_branch(lp.x);
      if (b < 0) {
        offer_incumbent(lp.objective, lp.x);
        return;
      }
      const int j = binaries_[b];
      const auto v = static_cast<unsigned char>(std::lround(lp.x[j]));
      cur.blb[b] = cur.bub[b] = v;
      LpResult next = solve_node(cur);
      if (next.status == LpStatus::Infeasible) {
        if (flipped) return;
        flipped = true;
        cur.blb[b] = cur.bub[b] = static_cast<unsigned char>(1 - v);
        next = solve_node(cur);
        if (next.status == LpStatus::Infeasible) return;
      }
      if (has_incumbent_ && next.objective >= prune_threshold()) return;
      lp = std::move(next);
    }
  }

  void search_loop() {
    while (!open_.empty()) {
      Node node = open_.top();
      open_.pop();
      if (node.bound >= prune_threshold()) {  // stale against new incumbent
        prune(node.bound);
        continue;
      }
      if (has_incumbent_ && gap_for(node.bound) <= cfg_.gap_target + 1e-12) {
        open_.push(node);  // everything open is within the requested gap
        return;
      }

      inflight_bound_ = node.bound;
      LpResult lp = solve_node(node);
      ++nodes_;
      inflight_bound_ = kInf;
      if (lp.status == LpStatus::Infeasible) continue;
      if (accept_if_integral(lp)) continue;
      if (lp.objective >= prune_threshold()) {
        prune(lp.objective);
        continue;
      }

      if (nodes_ % 128 == 0 || (!has_incumbent_ && nodes_ % 16 == 0)) dive(node, lp);

      const int b = pick_branch(lp.x);
      Node down = node;
      down.bound = lp.objective;
      down.id = next_id_++;
      down.bub[b] = 0;
      Node up = std::move(node);
      up.bound = lp.objective;
      up.id = next_id_++;
      up.blb[b] = 1;
      open_.push(std::move(down));
      open_.push(std::move(up));
    }
  }

  double gap_for(double bound) const {
    if (!has_incumbent_) return kInf;
    return std::abs(inc_obj_ - bound) / std::max(std::abs(inc_obj_), 1e-10);
  }

  void finalize(MilpSolution& sol) {
    sol.nodes = nodes_;
    sol.pivots = pivots_;
    sol.effort_exhausted = exhausted_;
    if (!has_incumbent_) {
      sol.status = exhausted_ ? SolveStatus::TimedOutNoIncumbent
                              : SolveStatus::Infeasible;
      return;
    }
    double bound = std::min(inc_obj_, pruned_bound_);
    if (!open_.empty()) bound = std::min(bound, open_.top().bound);
    if (exhausted_) bound = std::min(bound, inflight_bound_);

    sol.assignment = inc_x_;
    sol.objective = inc_obj_;
    const double slack = inc_obj_ - bound;
    if (slack <= kBoundTol * (1.0 + std::abs(inc_obj_))) {
      sol.status = SolveStatus::Optimal;
      sol.best_bound = inc_obj_;
      sol.gap = 0.0;
    } else {
      sol.status = SolveStatus::FeasibleWithinGap;
      sol.best_bound = bound;
      sol.gap = gap_for(bound);
    }
  }

  const MilpProblem& p_;
  const SolverConfig& cfg_;
  std::vector<int> binaries_;
  std::vector<double> base_lb_, base_ub_;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> open_;
  std::int64_t next_id_ = 0;
  std::int64_t nodes_ = 0;
  std::int64_t pivots_ = 0;
  std::int64_t work_ = 0;
  std::int64_t work_limit_ = 0;
  bool exhausted_ = false;
  bool has_incumbent_ = false;
  double inc_obj_ = kInf;
  double pruned_bound_ = kInf;
  double inflight_bound_ = kInf;
  std::vector<double> inc_x_;
};

}  // namespace

MilpSolution solve_milp(const MilpProblem& problem, const SolverConfig& config) {
  problem.validate();
  if (config.gap_target < 0.0) throw spec_error("gap_target must be >= 0");
  if (!(config.time_limit > 0.0)) throw spec_error("time_limit must be > 0");
  BranchAndBound bnb(problem, config);
  return bnb.run();
}

}  // namespace synplan::milp
