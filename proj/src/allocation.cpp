#include "uavnet/allocation.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

#include "uavnet/kernels.hpp"

namespace uavnet {

double fading_quantile_scale(FadingModel fading, double epsilon) {
  switch (fading) {
    case FadingModel::none:
      return 1.0;
    case FadingModel::rayleigh: {
      if (epsilon <= 0.0 || epsilon >= 1.0)
        throw std::invalid_argument("fading scale: epsilon must be in (0,1)");
      return 1.0 / -std::log1p(-epsilon);
    }
  }
  throw std::logic_error("fading scale: unknown model");
}

double urllc_power(double gain, double interference_plus_noise_w, double zeta,
                   double epsilon, UrllcPowerRule rule, FadingModel fading,
                   double p_max_w) {
  if (zeta < 0.0) throw std::invalid_argument("urllc power: negative threshold");
  if (interference_plus_noise_w < 0.0)
    throw std::invalid_argument("urllc power: negative interference");
  if (gain <= 0.0)
    throw UrllcInfeasible(UrllcInfeasible::Reason::dead_link,
                          std::numeric_limits<double>::infinity(),
                          "urllc power: link has no gain");
  const double zeta_eff = zeta * fading_quantile_scale(fading, epsilon);
  const double numerator = rule == UrllcPowerRule::standard
                               ? zeta_eff * interference_plus_noise_w
                               : zeta_eff * (1.0 + interference_plus_noise_w);
  const double power = numerator / gain;
  if (power > p_max_w)
    throw UrllcInfeasible(UrllcInfeasible::Reason::power_limit, power,
                          "urllc power: required " + std::to_string(power) +
                              " W exceeds cap " + std::to_string(p_max_w) + " W");
  return power;
}

double effective_gain(double gain, double interference_w, double noise_w,
                      double share_hz, EffectiveGainRule rule) {
  switch (rule) {
    case EffectiveGainRule::sinr_consistent:
      return gain / (interference_w + noise_w);
    case EffectiveGainRule::as_written:
      return gain / (1.0 + interference_w + share_hz * noise_w);
  }
  throw std::logic_error("effective gain: unknown rule");
}

double KktCertificate::max_residual() const {
  return std::max({stationarity_residual, primal_residual,
                   complementary_residual, budget_residual});
}

WaterfillResult waterfill(const std::vector<double>& theta,
                          const std::vector<double>& omega, double budget_w,
                          double p_max_w) {
  if (theta.size() != omega.size())
    throw std::invalid_argument("waterfill: theta/omega size mismatch");
  if (budget_w < 0.0) throw std::domain_error("waterfill: negative budget");
  if (p_max_w <= 0.0) throw std::invalid_argument("waterfill: p_max must be > 0");
  const std::size_t n = theta.size();

  WaterfillResult result;
  result.power_w.assign(n, 0.0);
  if (n == 0) {
    result.budget_slack = budget_w > 0.0;
    return result;
  }

  for (std::size_t k = 0; k < n; ++k) {
    if (theta[k] < 0.0 || omega[k] < 0.0)
      throw std::invalid_argument("waterfill: negative theta or omega");
  }

  // Price brackets over users that can absorb power at all.
  double lambda_all_capped = std::numeric_limits<double>::infinity();
  double lambda_all_zero = 0.0;
  std::size_t n_active = 0;
  std::vector<double> floors(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double wt = omega[k] * theta[k];
    floors[k] = theta[k] > 0.0 ? 1.0 / theta[k]
                               : std::numeric_limits<double>::infinity();
    if (wt <= 0.0) continue;
    ++n_active;
    lambda_all_capped = std::min(lambda_all_capped, wt / (1.0 + theta[k] * p_max_w));
    lambda_all_zero = std::max(lambda_all_zero, wt);
  }

  if (n_active == 0) {
    result.budget_slack = budget_w > 0.0;
    return result;
  }
  if (budget_w == 0.0) {
    result.water_level = lambda_all_zero;
    return result;
  }

  const double cap_total = static_cast<double>(n_active) * p_max_w;
  if (budget_w >= cap_total) {
    for (std::size_t k = 0; k < n; ++k)
      if (omega[k] * theta[k] > 0.0) result.power_w[k] = p_max_w;
    result.budget_slack = budget_w > cap_total;
    return result;
  }

  // Sum of powers is piecewise linear and nondecreasing in 1/lambda, so the
  // price is bisected until the bracket collapses to adjacent doubles; the
  // budget then binds to floating-point resolution.
  double inv_lo = 1.0 / lambda_all_zero;   // all powers zero here
  double inv_hi = 1.0 / lambda_all_capped; // all powers capped here
  double inv_mid = 0.5 * (inv_lo + inv_hi);
  for (int it = 0; it < 400; ++it) {
    inv_mid = 0.5 * (inv_lo + inv_hi);
    if (inv_mid <= inv_lo || inv_mid >= inv_hi) break;
    const double sum = kernels::waterfill_sum(omega.data(), floors.data(),
                                              inv_mid, p_max_w, n);
    if (sum == budget_w) break;
    if (sum > budget_w)
      inv_hi = inv_mid;
    else
      inv_lo = inv_mid;
  }
  kernels::waterfill_fill(result.power_w.data(), omega.data(), floors.data(),
                          inv_mid, p_max_w, n);
  result.water_level = 1.0 / inv_mid;
  return result;
}

KktCertificate kkt_check(const std::vector<double>& power_w,
                         const std::vector<double>& theta,
                         const std::vector<double>& omega, double budget_w,
                         double p_max_w) {
  KktCertificate cert;
  const std::size_t n = power_w.size();
  if (theta.size() != n || omega.size() != n || p_max_w <= 0.0) {
    cert.stationarity_residual = std::numeric_limits<double>::infinity();
    return cert;
  }
  if (n == 0) {
    cert.budget_slack = budget_w > 0.0;
    return cert;
  }

  const double band = 1e-10 * std::max(1.0, p_max_w);
  double sum = 0.0;
  for (double p : power_w) sum += p;

  enum class Cls { zero, interior, capped };
  std::vector<Cls> cls(n);
  double interior_price_sum = 0.0;
  std::size_t n_interior = 0;
  double min_cap_bound = std::numeric_limits<double>::infinity();
  double max_zero_price = 0.0;
  bool any_capped = false;
  for (std::size_t k = 0; k < n; ++k) {
    const double wt = omega[k] * theta[k];
    if (power_w[k] <= band) {
      cls[k] = Cls::zero;
      max_zero_price = std::max(max_zero_price, wt);
    } else if (power_w[k] >= p_max_w - band) {
      cls[k] = Cls::capped;
      any_capped = true;
      min_cap_bound = std::min(min_cap_bound, wt / (1.0 + theta[k] * p_max_w));
    } else {
      cls[k] = Cls::interior;
      ++n_interior;
      interior_price_sum += wt / (1.0 + theta[k] * power_w[k]);
    }
  }

  bool zero_user_could_absorb = false;
  for (std::size_t k = 0; k < n; ++k)
    if (cls[k] == Cls::zero && omega[k] * theta[k] > 0.0) zero_user_could_absorb = true;
  cert.budget_slack = sum < budget_w - 1e-9 * std::max(budget_w, 1.0) &&
                      n_interior == 0 && !zero_user_could_absorb;
  double lambda;
  if (n_interior > 0)
    lambda = interior_price_sum / static_cast<double>(n_interior);
  else if (cert.budget_slack)
    lambda = 0.0;
  else if (any_capped)
    lambda = min_cap_bound;
  else
    lambda = max_zero_price;
  cert.water_level = lambda;
  const double price_scale = std::max(lambda, 1e-300);

  double stationarity = 0.0;
  double complementary = 0.0;
  double primal = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double wt = omega[k] * theta[k];
    const double marginal = wt / (1.0 + theta[k] * power_w[k]);
    switch (cls[k]) {
      case Cls::interior:
        stationarity = std::max(stationarity, std::abs(marginal - lambda) / price_scale);
        break;
      case Cls::capped: {
        // nu = marginal-at-cap deficit must be nonnegative
        stationarity = std::max(stationarity, std::max(0.0, lambda - marginal) / price_scale);
        const double nu = std::max(0.0, marginal - lambda);
        complementary = std::max(complementary, nu * (p_max_w - power_w[k]) /
                                                    (price_scale * p_max_w));
        break;
      }
      case Cls::zero: {
        stationarity = std::max(stationarity, std::max(0.0, wt - lambda) / price_scale);
        const double mu = std::max(0.0, lambda - wt);
        complementary = std::max(complementary, mu * power_w[k] / (price_scale * p_max_w));
        break;
      }
    }
    primal = std::max({primal, -power_w[k] / p_max_w, (power_w[k] - p_max_w) / p_max_w});
  }
  cert.stationarity_residual = stationarity;
  cert.complementary_residual = complementary;

  const double budget_denom = budget_w > 0.0 ? budget_w : 1.0;
  primal = std::max(primal, (sum - budget_w) / budget_denom);
  cert.primal_residual = primal;
  cert.budget_residual = cert.budget_slack ? std::max(0.0, (sum - budget_w) / budget_denom)
                                           : std::abs(sum - budget_w) / budget_denom;
  return cert;
}

EmbbAllocation allocate_embb(const AssociationMatrix& assoc,
                             const Matrix& theta,
                             const std::vector<double>& share_hz,
                             const std::vector<double>& residual_budget_w,
                             double p_max_w) {
  const std::size_t n_bs = assoc.n_bs();
  const std::size_t n_users = assoc.n_users();
  if (theta.rows() != n_bs || theta.cols() != n_users)
    throw std::invalid_argument("embb allocation: theta shape mismatch");
  if (share_hz.size() != n_bs || residual_budget_w.size() != n_bs)
    throw std::invalid_argument("embb allocation: per-BS vector size mismatch");

  EmbbAllocation out{Matrix(n_bs, n_users), std::vector<double>(n_bs, 0.0),
                     std::vector<std::uint8_t>(n_bs, 0)};
  for (std::size_t j = 0; j < n_bs; ++j) {
    if (residual_budget_w[j] < 0.0)
      throw std::domain_error("embb allocation: negative residual budget at bs " +
                              std::to_string(j));
    const std::vector<std::size_t> users = assoc.users_on(j);
    if (users.empty()) continue;
    std::vector<double> th(users.size()), om(users.size(), share_hz[j]);
    for (std::size_t i = 0; i < users.size(); ++i) th[i] = theta(j, users[i]);
    const WaterfillResult wf = waterfill(th, om, residual_budget_w[j], p_max_w);
    for (std::size_t i = 0; i < users.size(); ++i)
      out.power_w(j, users[i]) = wf.power_w[i];
    out.water_level[j] = wf.water_level;
    out.budget_slack[j] = wf.budget_slack ? 1 : 0;
  }
  return out;
}

}  // namespace uavnet
