#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "uavnet/association.hpp"
#include "uavnet/matrix.hpp"
#include "uavnet/scenario.hpp"

namespace uavnet {

/// Raised when a URLLC user cannot be served at the required reliability:
/// either the link has zero gain or the needed power exceeds the cap.
struct UrllcInfeasible : std::runtime_error {
  enum class Reason { dead_link, power_limit };
  Reason reason;
  double required_w;
  UrllcInfeasible(Reason r, double required, const std::string& what)
      : std::runtime_error(what), reason(r), required_w(required) {}
};

/// Deterministic-equivalent inflation of the SINR threshold so the outage
/// constraint Pr(sinr >= zeta) >= 1-epsilon holds under the fading model.
/// none -> 1; rayleigh (unit-mean power fading) -> 1 / -ln(1-epsilon).
double fading_quantile_scale(FadingModel fading, double epsilon);

/// Closed-form URLLC power against a frozen interference snapshot.
/// standard: P = zeta_eff * I / h, so the re-evaluated SINR equals zeta_eff.
/// as_written: P = zeta_eff * (1 + I) / h.
/// I is the SINR denominator (interference + noise) in watts.
/// Throws UrllcInfeasible on h <= 0 or P > p_max; never clamps.
double urllc_power(double gain, double interference_plus_noise_w, double zeta,
                   double epsilon, UrllcPowerRule rule, FadingModel fading,
                   double p_max_w);

/// Effective gain feeding the waterfill utility log(1 + theta*P).
/// sinr_consistent: h / (I + noise), so theta*P is the link SINR.
/// as_written: h / (1 + I + share_hz*noise).
double effective_gain(double gain, double interference_w, double noise_w,
                      double share_hz, EffectiveGainRule rule);

struct WaterfillResult {
  std::vector<double> power_w;
  // Marginal price lambda of the budget constraint:
  // power_k = min(p_max, max(0, omega_k/water_level - 1/theta_k)).
  double water_level = 0.0;
  bool budget_slack = false; // every active user capped with budget left over
};

/// Capped water-filling: maximizes sum omega_k*log(1+theta_k*P_k) subject to
/// sum P <= budget and 0 <= P <= p_max. Monotone bisection on the water
/// level, run until the price bracket collapses to adjacent doubles, so the
/// budget binds to floating-point resolution unless slack.
WaterfillResult waterfill(const std::vector<double>& theta,
                          const std::vector<double>& omega, double budget_w,
                          double p_max_w);

struct KktCertificate {
  double water_level = 0.0;
  // All residuals are dimensionless (normalized by the price scale or the
  // budget); a valid solution keeps every one at or below 1e-6.
  double stationarity_residual = 0.0;
  double primal_residual = 0.0;
  double complementary_residual = 0.0;
  double budget_residual = 0.0;
  bool budget_slack = false;
  double max_residual() const;
};

/// Certifies a candidate power row against the stationarity system
///   -omega*theta/(1 + theta*P) + lambda - mu + nu = 0,  mu, nu >= 0,
///   mu*P = 0,  nu*(P - p_max) = 0,  sum P = budget (unless slack).
/// Reports residuals; never throws.
KktCertificate kkt_check(const std::vector<double>& power_w,
                         const std::vector<double>& theta,
                         const std::vector<double>& omega, double budget_w,
                         double p_max_w);

struct EmbbAllocation {
  Matrix power_w;                        // rows BSs, cols users
  std::vector<double> water_level;       // per BS; 0 where no users
  std::vector<std::uint8_t> budget_slack;
};

/// Per-BS waterfill over the associated users at the given effective gains.
/// share_hz[j] is the per-user bandwidth at BS j (uniform split), used as the
/// waterfill weight. residual_budget_w[j] is rho_j minus the URLLC spend.
EmbbAllocation allocate_embb(const AssociationMatrix& assoc,
                             const Matrix& theta,
                             const std::vector<double>& share_hz,
                             const std::vector<double>& residual_budget_w,
                             double p_max_w);

}  // namespace uavnet
