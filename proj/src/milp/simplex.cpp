#include "synplan/milp/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace synplan::milp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-9;  // minimum pivot magnitude
constexpr double kCostTol = 1e-9;   // reduced-cost optimality tolerance
constexpr double kFeasTol = 1e-7;   // phase-1 residual tolerance

enum class VarState : unsigned char { Basic, AtLower, AtUpper };

// Dense bounded-variable simplex over columns
//   [ structurals | logicals (one per row) | artificials (one per row) ].
// Row r reads  sum_j A[r][j] x_j + s_r (+ sigma_r z_r) = b_r  with the logical
// s_r carrying the relation (<=: s in [0,inf), >=: s in (-inf,0], =: s = 0).
class Tableau {
 public:
  Tableau(const MilpProblem& p, const LpOptions& opt)
      : nrows_(p.num_constraints()),
        nstruct_(p.num_variables()),
        ncols_(p.num_variables() + 2 * p.num_constraints()),
        stride_(ncols_ + 1),
        t_(static_cast<size_t>(nrows_) * stride_, 0.0),
        lo_(ncols_, 0.0),
        hi_(ncols_, 0.0),
        cost_(ncols_, 0.0),
        d_(stride_, 0.0),
        state_(ncols_, VarState::AtLower),
        xn_(ncols_, 0.0),
        xb_(nrows_, 0.0),
        basis_(nrows_, -1),
        work_cells_(opt.work_cells),
        work_limit_(opt.work_limit) {
    const auto& vars = p.variables();
    for (int j = 0; j < nstruct_; ++j) {
      lo_[j] = opt.lb.empty() ? vars[j].lb : opt.lb[j];
      hi_[j] = opt.ub.empty() ? vars[j].ub : opt.ub[j];
      if (lo_[j] > hi_[j]) throw spec_error("variable with empty bound interval");
      // Nonbasic structurals start at the finite bound nearest zero.
      const bool upper = std::abs(hi_[j]) < std::abs(lo_[j]);
      state_[j] = upper ? VarState::AtUpper : VarState::AtLower;
      xn_[j] = upper ? hi_[j] : lo_[j];
    }
    for (int r = 0; r < nrows_; ++r) {
      const auto& c = p.constraints()[r];
      for (const auto& term : c.terms) at(r, term.var) = term.coeff;
      const int s = logical(r);
      at(r, s) = 1.0;
      switch (c.rel) {
        case Relation::Le: lo_[s] = 0.0; hi_[s] = kInf; break;
        case Relation::Ge: lo_[s] = -kInf; hi_[s] = 0.0; break;
        case Relation::Eq: lo_[s] = 0.0; hi_[s] = 0.0; break;
      }
      // Every logical has zero as a finite bound; start there.
      xn_[s] = 0.0;
      state_[s] = lo_[s] == -kInf ? VarState::AtUpper : VarState::AtLower;
      rhs(r) = c.rhs;
    }

    // Initial basis: the logical when the residual fits its bounds, otherwise
    // an artificial absorbing the residual. Unused artificials are fixed at 0.
    for (int r = 0; r < nrows_; ++r) {
      double res = rhs(r);
      for (int j = 0; j < nstruct_; ++j)
        if (xn_[j] != 0.0) res -= at(r, j) * xn_[j];
      const int s = logical(r);
      const int z = artificial(r);
      if (res >= lo_[s] && res <= hi_[s]) {
        basis_[r] = s;
        xb_[r] = res;
        state_[s] = VarState::Basic;
        lo_[z] = hi_[z] = 0.0;
      } else {
        if (res < 0.0) {
          // Negate the row so the artificial's basic column is +e_r.
          double* row = &t_[static_cast<size_t>(r) * stride_];
          for (int j = 0; j < stride_; ++j) row[j] = -row[j];
          res = -res;
        }
        at(r, z) = 1.0;
        basis_[r] = z;
        xb_[r] = res;
        state_[z] = VarState::Basic;
        lo_[z] = 0.0;
        hi_[z] = kInf;
        cost_[z] = 1.0;  // phase-1 cost
        has_artificials_ = true;
      }
    }
  }

  // Returns true when a feasible point exists.
  bool phase1(std::int64_t max_pivots) {
    if (!has_artificials_) return true;
    run(max_pivots);
    double w = 0.0;
    for (int r = 0; r < nrows_; ++r)
      if (cost_[basis_[r]] != 0.0) w += cost_[basis_[r]] * xb_[r];
    if (w > kFeasTol) return false;
    expel_artificials();
    return true;
  }

  void phase2(const MilpProblem& p, std::int64_t max_pivots) {
    std::fill(cost_.begin(), cost_.end(), 0.0);
    for (int j = 0; j < nstruct_; ++j) cost_[j] = p.objective()[j];
    // Artificials may no longer move; a basic one (redundant row) is pinned
    // at zero and leaves on the first touch.
    for (int r = 0; r < nrows_; ++r) {
      const int z = artificial(r);
      lo_[z] = hi_[z] = 0.0;
    }
    run(max_pivots);
  }

  std::vector<double> extract_x() const {
    std::vector<double> x(xn_.begin(), xn_.begin() + nstruct_);
    for (int r = 0; r < nrows_; ++r)
      if (basis_[r] < nstruct_) x[basis_[r]] = xb_[r];
    return x;
  }

  std::int64_t pivots() const { return pivots_; }

 private:
  double& at(int r, int c) { return t_[static_cast<size_t>(r) * stride_ + c]; }
  double at(int r, int c) const { return t_[static_cast<size_t>(r) * stride_ + c]; }
  double& rhs(int r) { return t_[static_cast<size_t>(r) * stride_ + ncols_]; }
  double rhs(int r) const { return t_[static_cast<size_t>(r) * stride_ + ncols_]; }
  int logical(int r) const { return nstruct_ + r; }
  int artificial(int r) const { return nstruct_ + nrows_ + r; }

  void charge(std::int64_t cells) {
    if (!work_cells_) return;
    *work_cells_ += cells;
    if (work_limit_ > 0 && *work_cells_ > work_limit_)
      throw effort_exhausted_error("LP work budget exhausted");
  }

  void compute_reduced_costs() {
    std::copy(cost_.begin(), cost_.end(), d_.begin());
    d_[ncols_] = 0.0;
    for (int r = 0; r < nrows_; ++r) {
      const double cb = cost_[basis_[r]];
      if (cb == 0.0) continue;
      const double* row = &t_[static_cast<size_t>(r) * stride_];
      for (int j = 0; j < stride_; ++j) d_[j] -= cb * row[j];
    }
    for (int r = 0; r < nrows_; ++r) d_[basis_[r]] = 0.0;
    charge(static_cast<std::int64_t>(nrows_) * stride_);
  }

  // Recompute basic values from the maintained B^-1 b column and the
  // nonbasic bound values; corrects incremental drift.
  void refresh_basics() {
    for (int r = 0; r < nrows_; ++r) xb_[r] = rhs(r);
    for (int j = 0; j < ncols_; ++j) {
      if (state_[j] == VarState::Basic || xn_[j] == 0.0) continue;
      for (int r = 0; r < nrows_; ++r) xb_[r] -= at(r, j) * xn_[j];
    }
  }

  double current_obj() const {
    double v = 0.0;
    for (int r = 0; r < nrows_; ++r) v += cost_[basis_[r]] * xb_[r];
    for (int j = 0; j < ncols_; ++j)
      if (state_[j] != VarState::Basic && cost_[j] != 0.0) v += cost_[j] * xn_[j];
    return v;
  }

  // One simplex phase: Dantzig pricing, Bland fallback, bound flips.
  void run(std::int64_t max_pivots) {
    compute_reduced_costs();
    refresh_basics();
    double prev_obj = current_obj();
    int stall = 0;
    bool bland = false;
    const int stall_limit = 3 * std::max(1, nrows_);

    for (std::int64_t iter = 0;; ++iter) {
      if (iter > max_pivots) throw numerical_error("simplex exceeded pivot limit");

      // Entering variable: improving direction relative to its bound side.
      int q = -1;
      int dir = 0;
      double best = kCostTol;
      for (int j = 0; j < ncols_; ++j) {
        if (state_[j] == VarState::Basic || lo_[j] == hi_[j]) continue;
        const double dj = d_[j];
        if (state_[j] == VarState::AtLower && dj < -kCostTol) {
          if (bland) { q = j; dir = +1; break; }
          if (-dj > best) { best = -dj; q = j; dir = +1; }
        } else if (state_[j] == VarState::AtUpper && dj > kCostTol) {
          if (bland) { q = j; dir = -1; break; }
          if (dj > best) { best = dj; q = j; dir = -1; }
        }
      }
      if (q < 0) return;  // phase optimal

      // Ratio test: entering moves by step >= 0 in direction `dir`;
      // basic r changes at rate -dir * T[r][q].
      const double flip = hi_[q] - lo_[q];  // may be +inf
      double min_step = kInf;
      for (int r = 0; r < nrows_; ++r) {
        const double rate = -dir * at(r, q);
        if (std::abs(rate) <= kPivotTol) continue;
        const int b = basis_[r];
        double step;
        if (rate > 0.0) {
          if (hi_[b] == kInf) continue;
          step = (hi_[b] - xb_[r]) / rate;
        } else {
          if (lo_[b] == -kInf) continue;
          step = (lo_[b] - xb_[r]) / rate;
        }
        min_step = std::min(min_step, std::max(step, 0.0));
      }

      if (min_step == kInf && flip == kInf)
        throw unbounded_error(
            "LP relaxation is unbounded; model lacks a horizon bound");

      charge(nrows_);
      if (flip < min_step - 1e-12) {
        // Bound flip: q jumps to its opposite bound, basis unchanged.
        for (int r = 0; r < nrows_; ++r) xb_[r] -= at(r, q) * (dir * flip);
        xn_[q] = dir > 0 ? hi_[q] : lo_[q];
        state_[q] = dir > 0 ? VarState::AtUpper : VarState::AtLower;
        charge(nrows_);
      } else {
        // Select the leaving row among those achieving min_step.
        int leave_row = -1;
        bool to_upper = false;
        for (int r = 0; r < nrows_; ++r) {
          const double rate = -dir * at(r, q);
          if (std::abs(rate) <= kPivotTol) continue;
          const int b = basis_[r];
          double step;
          bool up;
          if (rate > 0.0) {
            if (hi_[b] == kInf) continue;
            step = (hi_[b] - xb_[r]) / rate;
            up = true;
          } else {
            if (lo_[b] == -kInf) continue;
            step = (lo_[b] - xb_[r]) / rate;
            up = false;
          }
          step = std::max(step, 0.0);
          if (step > min_step + 1e-9) continue;
          const bool take =
              leave_row < 0 ||
              (bland ? b < basis_[leave_row]
                     : std::abs(at(r, q)) > std::abs(at(leave_row, q)));
          if (take) {
            leave_row = r;
            to_upper = up;
          }
        }
        pivot(leave_row, q, dir, min_step, to_upper);
      }
      ++pivots_;

      if (pivots_ % 512 == 0) {  // guard against accumulated drift
        compute_reduced_costs();
        refresh_basics();
      }

      const double obj = current_obj();
      if (obj < prev_obj - 1e-12 * (1.0 + std::abs(prev_obj))) {
        stall = 0;
        bland = false;
      } else if (++stall > stall_limit) {
        bland = true;
      }
      prev_obj = obj;
    }
  }

  void pivot(int r, int q, int dir, double delta, bool leave_to_upper) {
    const int leaving = basis_[r];
    const double piv = at(r, q);
    if (std::abs(piv) < kPivotTol)
      throw numerical_error("pivot element below tolerance");

    const double enter_val = xn_[q] + dir * delta;
    for (int rr = 0; rr < nrows_; ++rr) xb_[rr] -= at(rr, q) * (dir * delta);

    double* prow = &t_[static_cast<size_t>(r) * stride_];
    const double inv = 1.0 / piv;
    for (int j = 0; j < stride_; ++j) prow[j] *= inv;
    for (int rr = 0; rr < nrows_; ++rr) {
      if (rr == r) continue;
      double* row = &t_[static_cast<size_t>(rr) * stride_];
      const double f = row[q];
      if (f == 0.0) continue;
      for (int j = 0; j < stride_; ++j) row[j] -= f * prow[j];
      row[q] = 0.0;
    }
    const double dq = d_[q];
    if (dq != 0.0) {
      for (int j = 0; j < stride_; ++j) d_[j] -= dq * prow[j];
    }
    d_[q] = 0.0;
    charge(static_cast<std::int64_t>(nrows_ + 2) * stride_);

    basis_[r] = q;
    state_[q] = VarState::Basic;
    xb_[r] = enter_val;
    state_[leaving] = leave_to_upper ? VarState::AtUpper : VarState::AtLower;
    xn_[leaving] = leave_to_upper ? hi_[leaving] : lo_[leaving];
  }

  // After a feasible phase 1, drive remaining artificials out of the basis.
  void expel_artificials() {
    for (int r = 0; r < nrows_; ++r) {
      if (basis_[r] < nstruct_ + nrows_) continue;
      const double* row = &t_[static_cast<size_t>(r) * stride_];
      int q = -1;
      for (int j = 0; j < nstruct_ + nrows_; ++j) {
        if (state_[j] == VarState::Basic || lo_[j] == hi_[j]) continue;
        if (std::abs(row[j]) > 1e-7) { q = j; break; }
      }
      if (q < 0) continue;  // redundant row; artificial stays pinned at zero
      const int dir = state_[q] == VarState::AtLower ? +1 : -1;
      // Degenerate swap; the artificial leaves at value zero (its bounds).
      pivot(r, q, dir, 0.0, false);
      ++pivots_;
    }
  }

  const int nrows_;
  const int nstruct_;
  const int ncols_;
  const int stride_;
  std::vector<double> t_;  // nrows x stride, last column is B^-1 b
  std::vector<double> lo_, hi_, cost_, d_;
  std::vector<VarState> state_;
  std::vector<double> xn_;  // variable values (authoritative for nonbasics)
  std::vector<double> xb_;  // basic values by row
  std::vector<int> basis_;
  bool has_artificials_ = false;
  std::int64_t pivots_ = 0;
  std::int64_t* work_cells_ = nullptr;
  std::int64_t work_limit_ = 0;
};

}  // namespace

LpResult solve_lp(const MilpProblem& problem) {
  return solve_lp(problem, LpOptions{});
}

LpResult solve_lp(const MilpProblem& problem, const LpOptions& options) {
  problem.validate();
  LpResult res;
  if (problem.trivially_infeasible()) {
    res.status = LpStatus::Infeasible;
    return res;
  }
  if (problem.num_variables() == 0) {
    res.status = LpStatus::Optimal;
    res.objective = problem.objective_constant();
    return res;
  }
  Tableau tab(problem, options);
  const std::int64_t cap =
      options.max_pivots > 0
          ? options.max_pivots
          : 2000 + 60ll * (problem.num_constraints() + problem.num_variables());
  if (!tab.phase1(cap)) {
    res.status = LpStatus::Infeasible;
    res.pivots = tab.pivots();
    return res;
  }
  tab.phase2(problem, cap);
  res.status = LpStatus::Optimal;
  res.x = tab.extract_x();
  // Snap round-off back inside the bounds.
  for (int j = 0; j < problem.num_variables(); ++j) {
    const double lb = options.lb.empty() ? problem.variables()[j].lb : options.lb[j];
    const double ub = options.ub.empty() ? problem.variables()[j].ub : options.ub[j];
    res.x[j] = std::min(std::max(res.x[j], lb), ub);
  }
  res.objective = problem.objective_value(res.x);
  res.pivots = tab.pivots();
  return res;
}

}  // namespace synplan::milp
