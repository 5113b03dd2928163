#include "uavnet/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "uavnet/allocation.hpp"
#include "uavnet/channel.hpp"
#include "uavnet/rng.hpp"
#include "uavnet/ruin.hpp"

namespace uavnet {

const char* to_string(Scheme s) { return s == Scheme::ruin ? "ruin" : "sinr"; }

UrllcInfeasibleUsers::UrllcInfeasibleUsers(std::vector<std::size_t> u)
    : std::runtime_error("urllc power infeasible for " + std::to_string(u.size()) +
                         " user(s)"),
      users(std::move(u)) {}

TtiState TtiState::defaults(const NetworkScenario& s) {
  TtiState st;
  st.uav_avail_w.assign(s.uav_indices().size(), s.energy.launch_w);
  st.active_urllc = s.urllc_user_indices();
  return st;
}

namespace {

std::size_t mini_slots(const RadioParams& r) {
  return static_cast<std::size_t>(std::llround(r.embb_tti_s / r.urllc_tti_s));
}

int ruin_window(const NetworkScenario& s, int remaining_ttis) {
  const int w = s.energy.ruin_horizon_ttis;
  return remaining_ttis > 0 ? std::min(w, remaining_ttis) : w;
}

// Ruin probability over the coming window given the capital available this
// TTI (premium already included, so the model starts one premium back).
double uav_psi(const NetworkScenario& s, double avail_w, int remaining_ttis) {
  if (avail_w <= 0.0) return 1.0;
  SurplusModel m;
  m.launch_w = std::max(0.0, avail_w - s.energy.premium_w);
  m.premium_w = s.energy.premium_w;
  m.claim_rate_mu = s.energy.claim_rate_mu;
  m.horizon_ttis = ruin_window(s, remaining_ttis);
  return ruin_probability(m);
}

}  // namespace

std::vector<double> embb_share_hz(const NetworkScenario& s,
                                  const AssociationMatrix& assoc) {
  std::vector<double> share(s.n_bs(), 0.0);
  std::vector<std::size_t> count(s.n_bs(), 0);
  for (std::size_t k = 0; k < s.n_users(); ++k) {
    if (!s.users[k].embb_class()) continue;
    if (const auto j = assoc.bs_of(k)) ++count[*j];
  }
  for (std::size_t j = 0; j < s.n_bs(); ++j)
    if (count[j] > 0) share[j] = s.base_stations[j].bandwidth_hz / count[j];
  return share;
}

UrllcStage urllc_stage(const NetworkScenario& s, const Matrix& gain,
                       const std::vector<std::size_t>& active_urllc,
                       bool drop_infeasible, const std::vector<double>& rho) {
  const std::size_t n_bs = s.n_bs();
  const std::size_t n_users = s.n_users();
  if (rho.size() != n_bs)
    throw std::invalid_argument("urllc stage: rho size mismatch");
  UrllcStage st;
  st.pins = AssociationMatrix(n_bs, n_users);
  st.power_w = Matrix(n_bs, n_users);
  st.spend_w.assign(n_bs, 0.0);
  st.residual_w.resize(n_bs);
  st.gamma.assign(n_users, 0.0);

  Matrix uniform(n_bs, n_users);
  for (std::size_t j = 0; j < n_bs; ++j)
    for (std::size_t k = 0; k < n_users; ++k)
      uniform(j, k) = rho[j] / static_cast<double>(n_users);
  const Matrix denom0 = interference_plus_noise(
      uniform, gain, s.radio.noise_w, s.radio.interference_includes_mbs);

  std::vector<std::size_t> active = active_urllc;
  std::sort(active.begin(), active.end());
  for (std::size_t id : active)
    if (id >= n_users || s.users[id].kind != UserKind::urllc)
      throw std::invalid_argument("urllc stage: active list has a non-URLLC user");
  st.lambda_u = std::min(active.size(), mini_slots(s.radio));

  Matrix gamma0(n_bs, n_users);
  for (std::size_t j = 0; j < n_bs; ++j)
    for (std::size_t k = 0; k < n_users; ++k)
      gamma0(j, k) = uniform(j, k) * gain(j, k) / denom0(j, k);

  std::vector<std::size_t> infeasible;
  const std::vector<std::size_t> pinned = associate_urllc(gamma0, active);
  for (std::size_t i = 0; i < active.size(); ++i) {
    const std::size_t k = active[i];
    const std::size_t j = pinned[i];
    try {
      const double p =
          urllc_power(gain(j, k), denom0(j, k), s.radio.urllc_sinr_threshold,
                      s.radio.urllc_epsilon, s.radio.urllc_rule, s.radio.fading,
                      s.radio.p_max_w);
      if (st.spend_w[j] + p > rho[j]) {
        infeasible.push_back(k);
        continue;
      }
      st.power_w(j, k) = p;
      st.spend_w[j] += p;
      st.gamma[k] = p * gain(j, k) / denom0(j, k);
      st.pins.assign(k, j);
    } catch (const UrllcInfeasible&) {
      infeasible.push_back(k);
    }
  }
  if (!infeasible.empty()) {
    if (!drop_infeasible) throw UrllcInfeasibleUsers(infeasible);
    st.dropped = infeasible;
  }
  for (std::size_t j = 0; j < n_bs; ++j)
    st.residual_w[j] = rho[j] - st.spend_w[j];
  return st;
}

UrllcStage urllc_stage(const NetworkScenario& s, const Matrix& gain,
                       const std::vector<std::size_t>& active_urllc,
                       bool drop_infeasible) {
  std::vector<double> rho(s.n_bs());
  for (std::size_t j = 0; j < rho.size(); ++j)
    rho[j] = s.base_stations[j].power_budget_w;
  return urllc_stage(s, gain, active_urllc, drop_infeasible, rho);
}

// Per-TTI budgets: nominal transmit power for terrestrial stations; a UAV
// can only transmit with whatever surplus it has left.
std::vector<double> tti_budgets(const NetworkScenario& s,
                                const TtiState& state) {
  std::vector<double> rho(s.n_bs());
  for (std::size_t j = 0; j < rho.size(); ++j)
    rho[j] = s.base_stations[j].power_budget_w;
  const std::vector<std::size_t> uavs = s.uav_indices();
  for (std::size_t u = 0; u < uavs.size(); ++u)
    rho[uavs[u]] = std::max(0.0, state.uav_avail_w[u]);
  return rho;
}

TtiResult run_tti(const NetworkScenario& s, const TtiState& state,
                  Scheme scheme, const RunConfig& cfg) {
  const std::size_t n_bs = s.n_bs();
  const std::size_t n_users = s.n_users();
  const std::vector<std::size_t> uavs = s.uav_indices();
  if (state.uav_avail_w.size() != uavs.size())
    throw std::invalid_argument("run_tti: uav_avail_w size mismatch");

  TtiResult res;
  res.assoc = AssociationMatrix(n_bs, n_users);
  res.power_w = Matrix(n_bs, n_users);
  res.rate_bps.assign(n_users, 0.0);
  res.gamma.assign(n_users, 0.0);
  res.embb_bits.assign(n_users, 0.0);
  res.uav_surplus_w = state.uav_avail_w;
  res.psi.assign(uavs.size(), 0.0);
  res.water_level.assign(n_bs, 0.0);
  if (n_users == 0) {
    res.converged = true;
    return res;
  }

  const ChannelState ch = compute_channel(s);
  const double noise = s.radio.noise_w;
  const bool inc_mbs = s.radio.interference_includes_mbs;

  const std::vector<double> rho = tti_budgets(s, state);

  // Uniform snapshot: every station offers every user an equal slice.
  Matrix power(n_bs, n_users);
  for (std::size_t j = 0; j < n_bs; ++j)
    for (std::size_t k = 0; k < n_users; ++k)
      power(j, k) = rho[j] / static_cast<double>(n_users);

  const UrllcStage urllc = urllc_stage(s, ch.gain, state.active_urllc,
                                       cfg.drop_infeasible_urllc, rho);
  res.lambda_u = urllc.lambda_u;
  res.dropped_urllc = urllc.dropped;
  const Matrix& urllc_power_w = urllc.power_w;
  const std::vector<double>& urllc_gamma = urllc.gamma;
  const std::vector<double>& residual = urllc.residual_w;
  for (std::size_t k = 0; k < n_users; ++k)
    if (const auto j = urllc.pins.bs_of(k)) res.assoc.assign(k, *j);

  Matrix gamma(n_bs, n_users);

  // Ruin state is fixed for the TTI: capital does not move mid-allocation.
  std::vector<double> psi_bs(n_bs, 0.0);
  for (std::size_t u = 0; u < uavs.size(); ++u) {
    res.psi[u] = uav_psi(s, state.uav_avail_w[u], state.remaining_ttis);
    psi_bs[uavs[u]] = res.psi[u];
  }

  Matrix candidate(n_bs, n_users);
  for (std::size_t j = 0; j < n_bs; ++j)
    for (std::size_t k = 0; k < n_users; ++k)
      candidate(j, k) = rho[j] / static_cast<double>(n_users);

  const std::vector<std::size_t> embb_users = s.embb_class_user_indices();
  AssociationMatrix embb_assoc(n_bs, n_users);

  for (int it = 1; it <= cfg.t_max; ++it) {
    res.iterations = it;

    // Association at current powers.
    Matrix denom = interference_plus_noise(power, ch.gain, noise, inc_mbs);
    for (std::size_t j = 0; j < n_bs; ++j)
      for (std::size_t k = 0; k < n_users; ++k)
        gamma(j, k) = power(j, k) * ch.gain(j, k) / denom(j, k);
    const AssociationResult ar =
        scheme == Scheme::ruin
            ? associate_ruin(gamma, psi_bs, candidate, residual, cfg.alpha, embb_users)
            : associate_sinr(gamma, candidate, residual, embb_users);
    embb_assoc = ar.assoc;

    // Allocation at the fresh association against the same snapshot.
    const std::vector<double> share = embb_share_hz(s, embb_assoc);
    Matrix theta(n_bs, n_users);
    for (std::size_t j = 0; j < n_bs; ++j)
      for (std::size_t k = 0; k < n_users; ++k) {
        const double interf = std::max(0.0, denom(j, k) - noise);
        theta(j, k) = effective_gain(ch.gain(j, k), interf, noise, share[j],
                                     s.radio.gain_rule);
      }
    const EmbbAllocation alloc =
        allocate_embb(embb_assoc, theta, share, residual, s.radio.p_max_w);

    Matrix next = urllc_power_w;
    double step = 0.0;
    for (std::size_t j = 0; j < n_bs; ++j) {
      res.water_level[j] = alloc.water_level[j];
      for (std::size_t k = 0; k < n_users; ++k) {
        next(j, k) += alloc.power_w(j, k);
        step = std::max(step, std::abs(next(j, k) - power(j, k)));
      }
    }
    power = next;
    if (step < cfg.eps0_w) {
      res.converged = true;
      break;
    }
  }

  res.power_w = power;
  for (std::size_t k = 0; k < n_users; ++k) {
    if (const auto j = embb_assoc.bs_of(k)) res.assoc.assign(k, *j);
  }

  // Rates: eMBB users at the converged powers; URLLC users against the
  // snapshot they were provisioned for (their SINR is held at the threshold).
  const std::vector<double> share = embb_share_hz(s, embb_assoc);
  const Matrix denom_final = interference_plus_noise(power, ch.gain, noise, inc_mbs);
  for (std::size_t k = 0; k < n_users; ++k) {
    const auto jopt = res.assoc.bs_of(k);
    if (!jopt) continue;
    const std::size_t j = *jopt;
    if (s.users[k].embb_class()) {
      const double g = power(j, k) * ch.gain(j, k) / denom_final(j, k);
      res.gamma[k] = g;
      res.rate_bps[k] = rate_bps(share[j], g);
      res.embb_bits[k] = embb_data(res.rate_bps[k], s.radio.embb_tti_s,
                                   s.radio.urllc_tti_s,
                                   static_cast<int>(res.lambda_u))
                             .bits;
    } else {
      res.gamma[k] = urllc_gamma[k];
      res.rate_bps[k] =
          rate_bps(s.base_stations[j].bandwidth_hz, urllc_gamma[k]);
    }
  }

  for (std::size_t u = 0; u < uavs.size(); ++u) {
    double spend = 0.0;
    for (std::size_t k = 0; k < n_users; ++k) spend += power(uavs[u], k);
    res.uav_surplus_w[u] = state.uav_avail_w[u] - spend;
  }
  res.objective = objective_value(res.assoc, power, s, state, cfg.varsigma, cfg.xi);
  return res;
}

double objective_value(const AssociationMatrix& assoc, const Matrix& power_w,
                       const NetworkScenario& s, const TtiState& state,
                       double varsigma, double xi) {
  const std::size_t n_users = s.n_users();
  const std::vector<std::size_t> uavs = s.uav_indices();
  if (assoc.n_users() != n_users || power_w.cols() != n_users ||
      power_w.rows() != s.n_bs())
    throw std::invalid_argument("objective: shape mismatch");

  const ChannelState ch = compute_channel(s);
  const Matrix denom = interference_plus_noise(power_w, ch.gain, s.radio.noise_w,
                                               s.radio.interference_includes_mbs);
  const std::vector<double> share = embb_share_hz(s, assoc);
  const std::size_t lambda_u =
      std::min(state.active_urllc.size(), mini_slots(s.radio));

  double bits = 0.0;
  for (std::size_t k = 0; k < n_users; ++k) {
    if (!s.users[k].embb_class()) continue;
    const auto jopt = assoc.bs_of(k);
    if (!jopt) continue;
    const std::size_t j = *jopt;
    const double g = power_w(j, k) * ch.gain(j, k) / denom(j, k);
    bits += embb_data(rate_bps(share[j], g), s.radio.embb_tti_s,
                      s.radio.urllc_tti_s, static_cast<int>(lambda_u))
                .bits;
  }

  double psi_sum = 0.0;
  for (std::size_t u = 0; u < uavs.size(); ++u) {
    double spend = 0.0;
    for (std::size_t k = 0; k < n_users; ++k) spend += power_w(uavs[u], k);
    const double after = state.uav_avail_w[u] - spend;
    psi_sum += uav_psi(s, after + s.energy.premium_w, state.remaining_ttis);
  }
  return varsigma * bits - xi * psi_sum;
}

FlightReport run_flight(const NetworkScenario& s, int horizon_ttis,
                        Scheme scheme, std::uint64_t seed,
                        const RunConfig& cfg) {
  if (horizon_ttis < 1)
    throw std::invalid_argument("run_flight: horizon must be >= 1");
  const std::vector<std::size_t> uavs = s.uav_indices();
  const std::vector<std::size_t> urllc_users = s.urllc_user_indices();
  const std::size_t slots = mini_slots(s.radio);

  RunConfig flight_cfg = cfg;
  flight_cfg.drop_infeasible_urllc = true;

  FlightReport rep;
  rep.scheme = scheme;
  rep.seed = seed;

  std::vector<double> surplus(uavs.size(), cfg.flight_launch_w);
  Rng rng(seed);
  std::vector<std::size_t> pool = urllc_users;

  for (int t = 1; t <= horizon_ttis; ++t) {
    TtiState state;
    state.uav_avail_w.resize(uavs.size());
    for (std::size_t u = 0; u < uavs.size(); ++u)
      state.uav_avail_w[u] = surplus[u] + s.energy.premium_w;
    state.remaining_ttis = horizon_ttis - t + 1;

    const std::uint64_t raw = rng.poisson(s.urllc_arrivals_per_tti);
    const std::size_t n_arr =
        std::min({static_cast<std::size_t>(raw), slots, pool.size()});
    rep.arrival_overflow_total += raw - n_arr;
    for (std::size_t i = 0; i < n_arr; ++i) {
      const std::size_t pick = i + rng.index(pool.size() - i);
      std::swap(pool[i], pool[pick]);
    }
    state.active_urllc.assign(pool.begin(), pool.begin() + n_arr);
    std::sort(state.active_urllc.begin(), state.active_urllc.end());

    const TtiResult res = run_tti(s, state, scheme, flight_cfg);
    rep.urllc_dropped_total += res.dropped_urllc.size();

    bool ruin_event = false;
    double total_surplus = 0.0;
    for (std::size_t u = 0; u < uavs.size(); ++u) {
      const std::size_t j = uavs[u];
      // Ledger bill: the eMBB spend on each associated user is drawn as an
      // exponential claim, the URLLC spend is the provisioned power.
      double bill = 0.0;
      for (std::size_t k = 0; k < s.n_users(); ++k) {
        const auto jo = res.assoc.bs_of(k);
        if (!jo || *jo != j) continue;
        bill += s.users[k].embb_class()
                    ? rng.exponential(s.energy.claim_rate_mu)
                    : res.power_w(j, k);
      }
      const double after = state.uav_avail_w[u] - bill;
      FlightRow row;
      row.tti = t;
      row.uav_bs_id = s.base_stations[j].id;
      row.surplus_w = after;
      row.psi = res.psi[u];
      row.n_assoc = res.assoc.count_on(j);
      row.sum_power_w = bill;
      rep.rows.push_back(row);
      total_surplus += after;
      if (after < 0.0) ruin_event = true;
      surplus[u] = after;
    }
    rep.total_surplus_by_tti.push_back(total_surplus);

    if (ruin_event) {
      rep.ruined = true;
      rep.ruin_tti = t;
      break;
    }

    rep.flight_ttis = t;
    rep.final_total_surplus_w = total_surplus;
    for (std::size_t k = 0; k < s.n_users(); ++k) {
      const auto jopt = res.assoc.bs_of(k);
      if (!jopt) continue;
      if (s.base_stations[*jopt].aerial() && res.power_w(*jopt, k) > 0.0)
        ++rep.users_served_total;
    }
  }
  return rep;
}

}  // namespace uavnet
