#include "synplan/learn/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace synplan::learn {

namespace {

ChainResult run_chain(const LogTarget& log_target, std::vector<double> x,
                      const McmcConfig& cfg, std::uint64_t seed) {
  const int dim = static_cast<int>(x.size());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<double> scale(dim, cfg.initial_scale);
  if (!cfg.scales.empty()) {
    if (static_cast<int>(cfg.scales.size()) != dim)
      throw learn_error("proposal scale vector size mismatch");
    scale = cfg.scales;
  }

  double lp = log_target(x);
  if (!std::isfinite(lp)) throw learn_error("MCMC init point has no density");

  ChainResult out;
  out.samples.reserve(std::max(0, cfg.steps - cfg.burn_in));
  std::vector<int> win_acc(dim, 0), win_tot(dim, 0);
  std::int64_t accepted = 0, proposed = 0;
  constexpr int kAdaptWindow = 64;

  std::vector<double> cand;
  for (int step = 0; step < cfg.steps; ++step) {
    const bool warm = step < cfg.burn_in;
    for (int c = 0; c < dim; ++c) {
      cand = x;
      cand[c] += scale[c] * gauss(rng);
      const double lp_cand = log_target(cand);
      const double log_ratio = lp_cand - lp;
      const bool accept = log_ratio >= 0.0 || unit(rng) < std::exp(log_ratio);
      if (accept) {
        x = cand;
        lp = lp_cand;
      }
      if (warm) {
        win_tot[c]++;
        win_acc[c] += accept ? 1 : 0;
        if (win_tot[c] == kAdaptWindow) {
          const double rate = static_cast<double>(win_acc[c]) / kAdaptWindow;
          // Nudge toward the 25-40% band.
          scale[c] *= std::exp(std::clamp(rate - 0.325, -0.5, 0.5));
          win_tot[c] = 0;
          win_acc[c] = 0;
        }
      } else {
        ++proposed;
        accepted += accept ? 1 : 0;
      }
    }
    if (!warm) out.samples.push_back(x);
  }
  out.acceptance_rate =
      proposed == 0 ? 0.0 : static_cast<double>(accepted) / proposed;
  out.final_scales = scale;
  return out;
}

}  // namespace

McmcResult mcmc_sample(const LogTarget& log_target, const std::vector<double>& init,
                       const McmcConfig& config) {
  if (config.steps <= config.burn_in)
    throw learn_error("MCMC needs steps > burn_in");
  if (config.chains < 1) throw learn_error("MCMC needs at least one chain");
  McmcResult result;
  for (int c = 0; c < config.chains; ++c)
    result.chains.push_back(run_chain(log_target, init, config, config.seed + c));
  return result;
}

double effective_sample_size(const std::vector<double>& series) {
  const int n = static_cast<int>(series.size());
  if (n < 4) return n;
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : series) var += (v - mean) * (v - mean);
  var /= n;
  if (var <= 0.0) return n;
  double rho_sum = 0.0;
  for (int lag = 1; lag < n / 2; ++lag) {
    double acf = 0.0;
    for (int t = 0; t + lag < n; ++t)
      acf += (series[t] - mean) * (series[t + lag] - mean);
    acf /= var * (n - lag);
    if (acf < 0.05) break;
    rho_sum += acf;
  }
  return n / (1.0 + 2.0 * rho_sum);
}

}  // namespace synplan::learn
