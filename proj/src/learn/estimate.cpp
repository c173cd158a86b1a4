#include "synplan/learn/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace synplan::learn {

namespace {

double quantile(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const double pos = q * (static_cast<double>(v.size()) - 1.0);
  const size_t lo = static_cast<size_t>(pos);
  const size_t hi = std::min(lo + 1, v.size() - 1);
  const double w = pos - static_cast<double>(lo);
  return v[lo] * (1.0 - w) + v[hi] * w;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

EstimateResult estimate_synergies_from_observations(
    const std::vector<Observation>& observations, const Priors& priors,
    const EstimateConfig& config) {
  if (observations.empty()) throw learn_error("empty observation dataset");
  priors.validate();

  const std::vector<PairKey> pairs = collect_pairs(observations);
  PosteriorContext ctx(observations, pairs, priors);

  std::vector<int> active;  // indices into pairs
  for (size_t p = 0; p < pairs.size(); ++p)
    if (ctx.total_overlap()[p] >= config.min_total_overlap)
      active.push_back(static_cast<int>(p));

  std::vector<double> frozen_log_s(pairs.size());
  for (size_t p = 0; p < pairs.size(); ++p)
    frozen_log_s[p] = priors.mu_for(pairs[p]);

  const double lo = priors.sigma_m_lo, hi = priors.sigma_m_hi;
  const int dim = static_cast<int>(active.size()) + 1;

  // theta = [log s for active pairs..., logit-transformed sigma_m]
  auto unpack = [&](const std::vector<double>& theta, std::vector<double>& log_s,
                    double& sigma_m) {
    log_s = frozen_log_s;
    for (size_t a = 0; a < active.size(); ++a) log_s[active[a]] = theta[a];
    sigma_m = lo + (hi - lo) * sigmoid(theta.back());
  };
  LogTarget target = [&](const std::vector<double>& theta) {
    std::vector<double> log_s;
    double sigma_m;
    unpack(theta, log_s, sigma_m);
    const double sig = sigmoid(theta.back());
    // Jacobian of sigma_m = lo + (hi - lo) * sigmoid(phi)
    const double log_jac =
        std::log(hi - lo) + std::log(sig) + std::log1p(-sig);
    return ctx.log_density(log_s, sigma_m) + log_jac;
  };

  std::vector<double> init(dim, 0.0);
  for (size_t a = 0; a < active.size(); ++a) init[a] = frozen_log_s[active[a]];

  const McmcResult chains = mcmc_sample(target, init, config.mcmc);

  EstimateResult out;
  auto& summary = out.summary;
  summary.chains = config.mcmc.chains;
  summary.kept_samples = config.mcmc.steps - config.mcmc.burn_in;
  for (const auto& ch : chains.chains)
    summary.acceptance_per_chain.push_back(ch.acceptance_rate);

  // Per-parameter pooled quantiles and per-chain ESS sums.
  summary.min_ess = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> pooled(dim);
  for (int d = 0; d < dim; ++d) {
    double ess = 0.0;
    for (const auto& ch : chains.chains) {
      std::vector<double> series;
      series.reserve(ch.samples.size());
      for (const auto& s : ch.samples) series.push_back(s[d]);
      ess += effective_sample_size(series);
      pooled[d].insert(pooled[d].end(), series.begin(), series.end());
    }
    summary.min_ess = std::min(summary.min_ess, ess);
  }

  // Synergy summaries per pair.
  for (size_t p = 0; p < pairs.size(); ++p) {
    PairSummary ps;
    ps.key = pairs[p];
    ps.n_obs = ctx.observation_counts()[p];
    const auto it = std::find(active.begin(), active.end(), static_cast<int>(p));
    if (it == active.end()) {
      const double mu = priors.mu_for(pairs[p]);
      const double sd = priors.sigma_for(pairs[p]);
      ps.frozen = true;
      ps.median = std::exp(mu);
      ps.mean = std::exp(mu + 0.5 * sd * sd);
      ps.lo90 = std::exp(mu - 1.6448536269514722 * sd);
      ps.hi90 = std::exp(mu + 1.6448536269514722 * sd);
      ps.log_sd = sd;
    } else {
      const auto& theta = pooled[it - active.begin()];
      ps.median = std::exp(quantile(theta, 0.5));
      ps.lo90 = std::exp(quantile(theta, 0.05));
      ps.hi90 = std::exp(quantile(theta, 0.95));
      double mean_s = 0.0, mean_t = 0.0;
      for (double t : theta) {
        mean_s += std::exp(t);
        mean_t += t;
      }
      mean_s /= static_cast<double>(theta.size());
      mean_t /= static_cast<double>(theta.size());
      double var_t = 0.0;
      for (double t : theta) var_t += (t - mean_t) * (t - mean_t);
      ps.mean = mean_s;
      ps.log_sd = std::sqrt(var_t / std::max<size_t>(1, theta.size() - 1));
    }
    summary.pairs.push_back(ps);
    SynergyEntry entry{ps.median, ps.lo90, ps.hi90, ps.n_obs};
    out.matrix.set(pairs[p].robot_agent, pairs[p].robot_task, pairs[p].human_task,
                   entry);
  }

  // sigma_m summary from the transformed last coordinate.
  std::vector<double> sig_samples;
  for (double phi : pooled[dim - 1]) sig_samples.push_back(lo + (hi - lo) * sigmoid(phi));
  summary.sigma_m_median = quantile(sig_samples, 0.5);
  summary.sigma_m_lo90 = quantile(sig_samples, 0.05);
  summary.sigma_m_hi90 = quantile(sig_samples, 0.95);

  out.raw_chains = chains;
  out.param_names.clear();
  for (int a : active) {
    const auto& k = pairs[a];
    out.param_names.push_back("log_s_r" + std::to_string(k.robot_agent) + "_i" +
                              std::to_string(k.robot_task) + "_k" +
                              std::to_string(k.human_task));
  }
  out.param_names.push_back("phi_sigma_m");
  return out;
}

EstimateResult estimate_synergies(const std::vector<sim::ExecutionTrace>& traces,
                                  const std::vector<Plan>& plans,
                                  const ProcessSpec& spec, const Priors& priors,
                                  const EstimateConfig& config) {
  if (traces.size() != plans.size())
    throw learn_error("traces and plans must be parallel arrays");
  if (traces.empty()) throw learn_error("empty trace dataset");
  std::vector<Observation> all;
  for (size_t i = 0; i < traces.size(); ++i) {
    auto obs = extract_observations(traces[i], plans[i], spec);
    all.insert(all.end(), obs.begin(), obs.end());
  }
  return estimate_synergies_from_observations(all, priors, config);
}

Priors update_priors(const PosteriorSummary& previous, const Priors& priors) {
  Priors next = priors;
  for (const auto& ps : previous.pairs) {
    const double mu = std::log(ps.median);
    const double sigma = std::max(0.05, ps.log_sd);
    next.per_pair[ps.key] = {mu, sigma};
  }
  return next;
}

std::string chains_csv(const McmcResult& chains,
                       const std::vector<std::string>& param_names) {
  std::ostringstream os;
  os.precision(10);
  os << "chain,step";
  for (const auto& n : param_names) os << ',' << n;
  os << '\n';
  for (size_t c = 0; c < chains.chains.size(); ++c) {
    const auto& samples = chains.chains[c].samples;
    for (size_t t = 0; t < samples.size(); ++t) {
      os << c << ',' << t;
      for (double v : samples[t]) os << ',' << v;
      os << '\n';
    }
  }
  return os.str();
}

}  // namespace synplan::learn
