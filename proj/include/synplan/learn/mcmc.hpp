#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "synplan/errors.hpp"

namespace synplan::learn {

struct McmcConfig {
  int steps = 20000;   // total sweeps, including burn-in
  int burn_in = 5000;  // discarded sweeps; adaptation happens only here
  int chains = 4;
  std::uint64_t seed = 0;
  double initial_scale = 0.25;
  std::vector<double> scales;  // optional per-coordinate initial scales
};

struct ChainResult {
  std::vector<std::vector<double>> samples;  // post-burn-in states, one per sweep
  double acceptance_rate = 0.0;              // post-burn-in proposal acceptance
  std::vector<double> final_scales;
};

struct McmcResult {
  std::vector<ChainResult> chains;
};

using LogTarget = std::function<double(const std::vector<double>&)>;

// Adaptive random-walk Metropolis with coordinate-wise Gaussian proposals.
// One step is a full sweep over coordinates. Proposal scales adapt during
// burn-in toward a 25-40% acceptance rate, then stay fixed. Chain c uses
// seed + c; results are deterministic for a fixed config.
// Throws learn_error when the initial point has no density (NoValidInit).
McmcResult mcmc_sample(const LogTarget& log_target, const std::vector<double>& init,
                       const McmcConfig& config);

// Effective sample size of one scalar chain via the initial positive
// autocorrelation sequence.
double effective_sample_size(const std::vector<double>& series);

}  // namespace synplan::learn
