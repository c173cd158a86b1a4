#pragma once

#include <compare>
#include <map>
#include <vector>

#include "synplan/learn/observation.hpp"

namespace synplan::learn {

struct PairKey {
  int robot_agent = -1;
  int robot_task = -1;
  int human_task = -1;
  auto operator<=>(const PairKey&) const = default;
};

// Prior hyperparameters: log-normal on each synergy coefficient (stated as
// mean/sd of the log) and a uniform window for the measurement noise sd.
// Per-pair overrides support iterated batch updates.
struct Priors {
  double mu_s = 0.0;
  double sigma_s = 0.5;
  double sigma_m_lo = 0.01;
  double sigma_m_hi = 10.0;
  std::map<PairKey, std::pair<double, double>> per_pair;  // (mu, sigma) overrides

  double mu_for(const PairKey& k) const {
    const auto it = per_pair.find(k);
    return it == per_pair.end() ? mu_s : it->second.first;
  }
  double sigma_for(const PairKey& k) const {
    const auto it = per_pair.find(k);
    return it == per_pair.end() ? sigma_s : it->second.second;
  }
  void validate() const {
    if (!(sigma_s > 0.0)) throw learn_error("sigma_s must be > 0");
    if (!(sigma_m_lo >= 0.0) || !(sigma_m_hi > sigma_m_lo))
      throw learn_error("sigma_m bounds must satisfy 0 <= lo < hi");
  }
};

// Sorted unique (robot agent, robot task, human task) keys appearing in the
// observations; fixes the parameter ordering for the posterior.
std::vector<PairKey> collect_pairs(const std::vector<Observation>& observations);

// Pre-indexed posterior over (log s, sigma_m): Gaussian likelihood of each
// measured human-task duration around idle-plus-scaled-overlap, a normal
// prior on each log s, the uniform prior on sigma_m. Densities are reported
// in the (log s, sigma_m) parameterization, up to the evidence constant.
class PosteriorContext {
 public:
  PosteriorContext(const std::vector<Observation>& observations,
                   std::vector<PairKey> pairs, Priors priors);

  // -infinity when sigma_m leaves its support; never throws for that.
  double log_density(const std::vector<double>& log_s, double sigma_m) const;
  // Analytic gradient with respect to each log s entry.
  std::vector<double> grad_log_s(const std::vector<double>& log_s,
                                 double sigma_m) const;

  const std::vector<PairKey>& pairs() const { return pairs_; }
  const Priors& priors() const { return priors_; }
  // Sum of planned overlaps feeding each parameter (identifiability measure)
  // and the count of observations with positive overlap per pair.
  const std::vector<double>& total_overlap() const { return total_ov_; }
  const std::vector<int>& observation_counts() const { return n_obs_; }

 private:
  struct Row {
    int pair;
    double ov, a;
  };
  struct Ob {
    double duration, idle;
    std::vector<Row> rows;
  };
  std::vector<PairKey> pairs_;
  Priors priors_;
  std::vector<Ob> obs_;
  std::vector<double> total_ov_;
  std::vector<int> n_obs_;
};

// Convenience forms of the two operations above.
double log_posterior(const std::vector<double>& log_s, double sigma_m,
                     const std::vector<Observation>& observations,
                     const std::vector<PairKey>& pairs, const Priors& priors);
std::vector<double> log_posterior_grad(const std::vector<double>& log_s,
                                       double sigma_m,
                                       const std::vector<Observation>& observations,
                                       const std::vector<PairKey>& pairs,
                                       const Priors& priors);

}  // namespace synplan::learn
