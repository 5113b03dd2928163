#include "uavnet/ruin.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "uavnet/rng.hpp"

namespace uavnet {

double ruin_probability(const SurplusModel& m) {
  if (m.horizon_ttis < 1) throw std::invalid_argument("ruin: horizon must be >= 1");
  if (m.claim_rate_mu <= 0.0) throw std::invalid_argument("ruin: claim rate must be > 0");
  if (m.launch_w < 0.0 || m.premium_w < 0.0)
    throw std::invalid_argument("ruin: negative capital or premium");

  const double c1 = m.launch_w + m.premium_w;
  if (c1 == 0.0) return 1.0; // no capital, no income: the first claim ruins

  double psi = 0.0;
  for (int s = 1; s <= m.horizon_ttis; ++s) {
    const double cs = m.launch_w + s * m.premium_w;
    // term = (mu*cs)^(s-1)/(s-1)! * exp(-mu*cs) * c1/cs, in log space
    const double log_term = (s - 1) * std::log(m.claim_rate_mu * cs) -
                            std::lgamma(static_cast<double>(s)) -
                            m.claim_rate_mu * cs + std::log(c1) - std::log(cs);
    psi += std::exp(log_term);
  }
  return std::clamp(psi, 0.0, 1.0);
}

double survival_factor(double psi, double gamma, double alpha) {
  return alpha * (1.0 - psi) * gamma;
}

SurplusTrace simulate_surplus(const SurplusModel& m,
                              const std::function<double()>& claims_per_tti) {
  SurplusTrace trace;
  trace.level_w.reserve(static_cast<std::size_t>(m.horizon_ttis) + 1);
  double level = m.launch_w;
  trace.level_w.push_back(level);
  for (int s = 1; s <= m.horizon_ttis; ++s) {
    level += m.premium_w - claims_per_tti();
    trace.level_w.push_back(level);
    if (level < 0.0 && trace.ruined_at < 0) {
      trace.ruined_at = s;
      break;
    }
  }
  return trace;
}

McRuinEstimate mc_ruin_probability(const SurplusModel& m,
                                   const ClaimSampler& sampler,
                                   std::uint64_t n_paths, std::uint64_t seed) {
  if (n_paths == 0) throw std::invalid_argument("mc ruin: need at least one path");
  std::uint64_t ruined = 0;
  for (std::uint64_t p = 0; p < n_paths; ++p) {
    Rng rng(derive_seed(seed, p));
    auto draw = [&]() -> double {
      if (sampler.convention == ClaimConvention::one_per_tti)
        return rng.exponential(m.claim_rate_mu);
      const std::uint64_t n = rng.poisson(sampler.arrival_rate);
      double total = 0.0;
      for (std::uint64_t i = 0; i < n; ++i) total += rng.exponential(sampler.size_rate);
      return total;
    };
    const SurplusTrace trace = simulate_surplus(m, draw);
    if (trace.ruined_at >= 0) ++ruined;
  }
  McRuinEstimate est;
  est.paths = n_paths;
  est.psi = static_cast<double>(ruined) / static_cast<double>(n_paths);
  est.stderr_ = std::sqrt(est.psi * (1.0 - est.psi) / static_cast<double>(n_paths));
  return est;
}

bool surplus_feasibility_equiv(double spend_w, double launch_w, double premium_w,
                               int ttis) {
  const double income = launch_w + premium_w * ttis;
  const bool budget_ok = spend_w <= income;
  const bool surplus_ok = (income - spend_w) >= 0.0;
  return budget_ok == surplus_ok;
}

}  // namespace uavnet
