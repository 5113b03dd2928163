#include "uavnet/oracle.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "uavnet/allocation.hpp"
#include "uavnet/channel.hpp"

namespace uavnet {

OracleResult solve_exact(const NetworkScenario& s, const TtiState& state,
                         const RunConfig& cfg) {
  const std::size_t n_bs = s.n_bs();
  const std::size_t n_users = s.n_users();
  const std::vector<std::size_t> embb_users = s.embb_class_user_indices();
  if (n_bs > 3 || n_users > 8)
    throw std::invalid_argument(
        "oracle: instance exceeds the 3-station / 8-user enumeration bound "
        "(at most 3^8 = 6561 assignments)");
  if (state.uav_avail_w.size() != s.uav_indices().size())
    throw std::invalid_argument("oracle: uav_avail_w size mismatch");

  const ChannelState ch = compute_channel(s);
  const UrllcStage urllc =
      urllc_stage(s, ch.gain, state.active_urllc, cfg.drop_infeasible_urllc,
                  tti_budgets(s, state));

  OracleResult best;
  best.assoc = AssociationMatrix(n_bs, n_users);
  best.power_w = Matrix(n_bs, n_users);
  bool have_best = false;

  // Odometer over the eMBB users, last user fastest: lexicographic order of
  // the assignment tuple, so the first maximum seen is the smallest tie.
  std::vector<std::size_t> digits(embb_users.size(), 0);
  while (true) {
    ++best.n_enumerated;

    AssociationMatrix assoc = urllc.pins;
    for (std::size_t i = 0; i < embb_users.size(); ++i)
      assoc.assign(embb_users[i], digits[i]);

    const std::vector<double> share = embb_share_hz(s, assoc);
    // At a fixed assignment each user draws power from one station only, so
    // the interference term other stations contribute on that user is zero.
    Matrix theta(n_bs, n_users);
    for (std::size_t j = 0; j < n_bs; ++j)
      for (std::size_t k = 0; k < n_users; ++k)
        theta(j, k) = effective_gain(ch.gain(j, k), 0.0, s.radio.noise_w,
                                     share[j], s.radio.gain_rule);

    AssociationMatrix embb_only(n_bs, n_users);
    for (std::size_t i = 0; i < embb_users.size(); ++i)
      embb_only.assign(embb_users[i], digits[i]);
    const EmbbAllocation alloc = allocate_embb(embb_only, theta, share,
                                               urllc.residual_w, s.radio.p_max_w);

    for (std::size_t j = 0; j < n_bs; ++j) {
      const std::vector<std::size_t> users = embb_only.users_on(j);
      if (users.empty()) continue;
      std::vector<double> p(users.size()), th(users.size()), om(users.size(), share[j]);
      for (std::size_t i = 0; i < users.size(); ++i) {
        p[i] = alloc.power_w(j, users[i]);
        th[i] = theta(j, users[i]);
      }
      const KktCertificate cert =
          kkt_check(p, th, om, urllc.residual_w[j], s.radio.p_max_w);
      best.kkt_max_residual = std::max(best.kkt_max_residual, cert.max_residual());
    }

    Matrix power = urllc.power_w;
    for (std::size_t j = 0; j < n_bs; ++j)
      for (std::size_t k = 0; k < n_users; ++k) power(j, k) += alloc.power_w(j, k);

    const double obj = objective_value(assoc, power, s, state, cfg.varsigma, cfg.xi);
    if (!have_best || obj > best.objective) {
      have_best = true;
      best.objective = obj;
      best.assoc = assoc;
      best.power_w = power;
    }

    if (embb_users.empty()) break;
    bool advanced = false;
    for (std::size_t i = embb_users.size(); i-- > 0;) {
      if (++digits[i] < n_bs) {
        advanced = true;
        break;
      }
      digits[i] = 0;
    }
    if (!advanced) break;
  }
  return best;
}

}  // namespace uavnet
