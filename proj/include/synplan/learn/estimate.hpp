#pragma once

#include "synplan/learn/mcmc.hpp"
#include "synplan/learn/posterior.hpp"
#include "synplan/synergy_matrix.hpp"

namespace synplan::learn {

struct PairSummary {
  PairKey key;
  double median = 1.0;
  double mean = 1.0;
  double lo90 = 1.0;  // central 90% credible interval
  double hi90 = 1.0;
  double log_sd = 0.0;
  int n_obs = 0;
  bool frozen = false;  // kept at the prior: no informative overlap observed
};

struct PosteriorSummary {
  std::vector<PairSummary> pairs;
  double sigma_m_median = 0.0;
  double sigma_m_lo90 = 0.0;
  double sigma_m_hi90 = 0.0;
  std::vector<double> acceptance_per_chain;
  int chains = 0;
  int kept_samples = 0;  // post-burn-in sweeps per chain
  double min_ess = 0.0;  // smallest effective sample size across parameters
};

struct EstimateConfig {
  McmcConfig mcmc;
  // Parameters whose total observed planned overlap stays below this stay at
  // their prior median instead of being sampled (flat likelihood).
  double min_total_overlap = 0.1;
};

struct EstimateResult {
  SynergyMatrix matrix;  // posterior medians (prior median where frozen)
  PosteriorSummary summary;
  McmcResult raw_chains;  // sampled states, for diagnostics dumps
  std::vector<std::string> param_names;
};

// Posterior estimation of all synergy coefficients appearing in the
// observations. Sampling happens in (log s, logit sigma_m) space.
// Throws learn_error when there are no observations at all.
EstimateResult estimate_synergies_from_observations(
    const std::vector<Observation>& observations, const Priors& priors,
    const EstimateConfig& config);

// Convenience wrapper over per-trace observation extraction: traces and
// plans are parallel arrays.
EstimateResult estimate_synergies(const std::vector<sim::ExecutionTrace>& traces,
                                  const std::vector<Plan>& plans,
                                  const ProcessSpec& spec, const Priors& priors,
                                  const EstimateConfig& config);

// Moment-matched log-normal approximation of a posterior, used as the next
// batch's prior: mu = log(median), sigma = max(0.05, posterior log-sd).
Priors update_priors(const PosteriorSummary& previous, const Priors& priors);

// Chain dump: one CSV row per kept sample (chain, step, parameters...).
std::string chains_csv(const McmcResult& chains,
                       const std::vector<std::string>& param_names);

}  // namespace synplan::learn
