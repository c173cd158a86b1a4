#include "synplan/learn/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace synplan::learn {

namespace {
constexpr double kLogSqrt2Pi = 0.9189385332046727;  // log(sqrt(2*pi))
}

std::vector<PairKey> collect_pairs(const std::vector<Observation>& observations) {
  std::set<PairKey> keys;
  for (const auto& obs : observations)
    for (const auto& row : obs.rows)
      keys.insert({row.robot_agent, row.robot_task, obs.human_task});
  return {keys.begin(), keys.end()};
}

PosteriorContext::PosteriorContext(const std::vector<Observation>& observations,
                                   std::vector<PairKey> pairs, Priors priors)
    : pairs_(std::move(pairs)), priors_(std::move(priors)) {
  priors_.validate();
  std::map<PairKey, int> index;
  for (size_t p = 0; p < pairs_.size(); ++p) index[pairs_[p]] = static_cast<int>(p);
  total_ov_.assign(pairs_.size(), 0.0);
  n_obs_.assign(pairs_.size(), 0);
  for (const auto& obs : observations) {
    Ob ob;
    ob.duration = obs.measured_duration;
    ob.idle = obs.idle;
    for (const auto& row : obs.rows) {
      const auto it = index.find({row.robot_agent, row.robot_task, obs.human_task});
      if (it == index.end()) throw learn_error("observation row has no pair entry");
      ob.rows.push_back({it->second, row.planned_ov, row.a_flag});
      total_ov_[it->second] += row.planned_ov * row.a_flag;
      if (row.planned_ov > 0.0 && row.a_flag != 0.0) ++n_obs_[it->second];
    }
    obs_.push_back(std::move(ob));
  }
}

double PosteriorContext::log_density(const std::vector<double>& log_s,
                                     double sigma_m) const {
  if (log_s.size() != pairs_.size())
    throw learn_error("log_s size does not match the pair list");
  if (!(sigma_m > priors_.sigma_m_lo) || !(sigma_m < priors_.sigma_m_hi))
    return -std::numeric_limits<double>::infinity();

  std::vector<double> s(log_s.size());
  for (size_t p = 0; p < log_s.size(); ++p) s[p] = std::exp(log_s[p]);

  double lp = -std::log(priors_.sigma_m_hi - priors_.sigma_m_lo);
  const double inv_var = 1.0 / (sigma_m * sigma_m);
  const double log_sigma = std::log(sigma_m);
  for (const auto& ob : obs_) {
    double mean = 0.0;
    for (const auto& row : ob.rows) mean += (ob.idle + s[row.pair] * row.ov) * row.a;
    const double r = ob.duration - mean;
    lp += -0.5 * r * r * inv_var - log_sigma - kLogSqrt2Pi;
  }
  for (size_t p = 0; p < pairs_.size(); ++p) {
    const double mu = priors_.mu_for(pairs_[p]);
    const double sd = priors_.sigma_for(pairs_[p]);
    const double z = (log_s[p] - mu) / sd;
    lp += -0.5 * z * z - std::log(sd) - kLogSqrt2Pi;
  }
  return lp;
}

std::vector<double> PosteriorContext::grad_log_s(const std::vector<double>& log_s,
                                                 double sigma_m) const {
  if (log_s.size() != pairs_.size())
    throw learn_error("log_s size does not match the pair list");
  std::vector<double> s(log_s.size());
  for (size_t p = 0; p < log_s.size(); ++p) s[p] = std::exp(log_s[p]);

  std::vector<double> grad(pairs_.size(), 0.0);
  const double inv_var = 1.0 / (sigma_m * sigma_m);
  for (const auto& ob : obs_) {
    double mean = 0.0;
    for (const auto& row : ob.rows) mean += (ob.idle + s[row.pair] * row.ov) * row.a;
    const double r = ob.duration - mean;
    // d mean / d log s_p = s_p * ov * a
    for (const auto& row : ob.rows)
      grad[row.pair] += r * inv_var * s[row.pair] * row.ov * row.a;
  }
  for (size_t p = 0; p < pairs_.size(); ++p) {
    const double mu = priors_.mu_for(pairs_[p]);
    const double sd = priors_.sigma_for(pairs_[p]);
    grad[p] += -(log_s[p] - mu) / (sd * sd);
  }
  return grad;
}

double log_posterior(const std::vector<double>& log_s, double sigma_m,
                     const std::vector<Observation>& observations,
                     const std::vector<PairKey>& pairs, const Priors& priors) {
  return PosteriorContext(observations, pairs, priors).log_density(log_s, sigma_m);
}

std::vector<double> log_posterior_grad(const std::vector<double>& log_s,
                                       double sigma_m,
                                       const std::vector<Observation>& observations,
                                       const std::vector<PairKey>& pairs,
                                       const Priors& priors) {
  return PosteriorContext(observations, pairs, priors).grad_log_s(log_s, sigma_m);
}

}  // namespace synplan::learn
