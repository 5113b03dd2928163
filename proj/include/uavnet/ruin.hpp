#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace uavnet {

/// Discrete-time surplus process: level(s) = launch + premium*s - claims(s),
/// checked at integer TTI boundaries over a finite horizon.
struct SurplusModel {
  double launch_w = 0.0;       // initial capital rho_0
  double premium_w = 0.0;      // income per TTI
  double claim_rate_mu = 1.0;  // exponential claim-size rate
  int horizon_ttis = 1;
};

/// Finite-horizon ruin probability of the surplus model under one
/// exponential claim per TTI:
///   psi = sum_{s=1..horizon} (mu*c_s)^(s-1)/(s-1)! * exp(-mu*c_s) * c_1/c_s
/// with c_s = launch + s*premium. Evaluated in log space; clamped to [0, 1].
double ruin_probability(const SurplusModel& m);

/// alpha * (1 - psi) * gamma, the survival-weighted link quality.
double survival_factor(double psi, double gamma, double alpha);

struct SurplusTrace {
  std::vector<double> level_w; // level_w[0] = launch, one entry per TTI after
  int ruined_at = -1;          // first TTI with negative level, -1 if none
};

/// Rolls the surplus forward, drawing total claims once per TTI from the
/// given sampler.
SurplusTrace simulate_surplus(const SurplusModel& m,
                              const std::function<double()>& claims_per_tti);

/// Claim-arrival conventions for the Monte Carlo estimator.
enum class ClaimConvention {
  one_per_tti, // exactly one Exp(mu) claim per TTI; matches the closed form
  poisson      // Poisson(arrival_rate) claims of Exp(size_rate) per TTI
};

struct ClaimSampler {
  ClaimConvention convention = ClaimConvention::one_per_tti;
  double arrival_rate = 1.0; // poisson convention only
  double size_rate = 1.0;
};

struct McRuinEstimate {
  double psi = 0.0;
  double stderr_ = 0.0; // binomial standard error sqrt(p(1-p)/n)
  std::uint64_t paths = 0;
};

/// Independent Monte Carlo estimate of the ruin probability; one derived RNG
/// stream per path so results do not depend on evaluation order.
McRuinEstimate mc_ruin_probability(const SurplusModel& m,
                                   const ClaimSampler& sampler,
                                   std::uint64_t n_paths, std::uint64_t seed);

/// The budget-feasibility and surplus-positivity views of the same TTI are
/// equivalent: spend <= launch + premium*ttis iff the post-spend surplus is
/// nonnegative. Returns whether both predicates agree on this instance.
bool surplus_feasibility_equiv(double spend_w, double launch_w,
                               double premium_w, int ttis);

}  // namespace uavnet
