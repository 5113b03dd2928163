#include "uavnet/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "uavnet/allocation.hpp"
#include "uavnet/association.hpp"
#include "uavnet/channel.hpp"
#include "uavnet/io.hpp"
#include "uavnet/oracle.hpp"
#include "uavnet/rng.hpp"
#include "uavnet/ruin.hpp"

namespace uavnet {

namespace {

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double ci95_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  const double sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  return 1.96 * sd / std::sqrt(static_cast<double>(v.size()));
}

}  // namespace

TtiState sample_tti_state(const NetworkScenario& s, std::uint64_t seed) {
  TtiState state;
  state.uav_avail_w.assign(s.uav_indices().size(),
                           s.energy.launch_w + s.energy.premium_w);
  state.remaining_ttis = 0;

  const std::size_t slots = static_cast<std::size_t>(
      std::llround(s.radio.embb_tti_s / s.radio.urllc_tti_s));
  std::vector<std::size_t> pool = s.urllc_user_indices();
  Rng rng(seed);
  const std::size_t raw =
      static_cast<std::size_t>(rng.poisson(s.urllc_arrivals_per_tti));
  const std::size_t n_arr = std::min({raw, slots, pool.size()});
  for (std::size_t i = 0; i < n_arr; ++i) {
    const std::size_t pick = i + rng.index(pool.size() - i);
    std::swap(pool[i], pool[pick]);
  }
  state.active_urllc.assign(pool.begin(), pool.begin() + n_arr);
  std::sort(state.active_urllc.begin(), state.active_urllc.end());
  return state;
}

std::string association_csv(const NetworkScenario& s, const TtiResult& r,
                            double alpha) {
  const std::vector<std::size_t> uavs = s.uav_indices();
  std::vector<double> psi_bs(s.n_bs(), 0.0);
  for (std::size_t u = 0; u < uavs.size(); ++u) psi_bs[uavs[u]] = r.psi[u];

  std::string out = csv_row({"user_id", "bs_id", "eta", "gamma", "psi"});
  for (std::size_t k = 0; k < s.n_users(); ++k) {
    const auto j = r.assoc.bs_of(k);
    if (!j) continue;
    const double psi = psi_bs[*j];
    const double gamma = r.gamma[k];
    out += csv_row({std::to_string(s.users[k].id),
                    std::to_string(s.base_stations[*j].id),
                    fmt_double(survival_factor(psi, gamma, alpha)),
                    fmt_double(gamma), fmt_double(psi)});
  }
  return out;
}

std::string power_csv(const NetworkScenario& s, const TtiResult& r) {
  std::string out = csv_row({"bs_id", "user_id", "class", "power_w", "water_level"});
  for (std::size_t j = 0; j < s.n_bs(); ++j)
    for (std::size_t k = 0; k < s.n_users(); ++k) {
      const auto jo = r.assoc.bs_of(k);
      if (!jo || *jo != j) continue;
      out += csv_row({std::to_string(s.base_stations[j].id),
                      std::to_string(s.users[k].id), to_string(s.users[k].kind),
                      fmt_double(r.power_w(j, k)),
                      fmt_double(r.water_level[j])});
    }
  return out;
}

std::vector<RuinTableRow> ruin_table(std::size_t n_paths, std::uint64_t seed) {
  const double mus[] = {0.5, 1.0, 2.0};
  const double rho0s[] = {0.0, 0.5, 1.0, 2.0};
  const double premiums[] = {0.25, 0.5, 1.0};
  const int horizons[] = {3, 5, 8};

  std::vector<RuinTableRow> rows;
  std::uint64_t grid_index = 0;
  for (double mu : mus)
    for (double rho0 : rho0s)
      for (double premium : premiums)
        for (int horizon : horizons) {
          ++grid_index;  // counted before the filter so row seeds are stable
          SurplusModel m;
          m.launch_w = rho0;
          m.premium_w = premium;
          m.claim_rate_mu = mu;
          m.horizon_ttis = horizon;
          const double psi = ruin_probability(m);
          if (psi < 0.05 || psi > 0.95) continue;
          ClaimSampler sampler;
          sampler.size_rate = mu;
          const McRuinEstimate est =
              mc_ruin_probability(m, sampler, n_paths, derive_seed(seed, grid_index));
          RuinTableRow row;
          row.rho0_w = rho0;
          row.premium_w = premium;
          row.mu = mu;
          row.horizon_ttis = horizon;
          row.psi_analytic = psi;
          row.psi_mc = est.psi;
          row.mc_stderr = est.stderr_;
          rows.push_back(row);
        }
  return rows;
}

std::string ruin_table_csv(const std::vector<RuinTableRow>& rows) {
  std::string out = csv_row(
      {"rho0", "premium", "mu", "horizon", "psi_analytic", "psi_mc", "mc_stderr"});
  for (const RuinTableRow& r : rows)
    out += csv_row({fmt_double(r.rho0_w), fmt_double(r.premium_w),
                    fmt_double(r.mu), std::to_string(r.horizon_ttis),
                    fmt_double(r.psi_analytic), fmt_double(r.psi_mc),
                    fmt_double(r.mc_stderr)});
  return out;
}

NetworkScenario make_small_instance(std::size_t n_bs, std::size_t n_users,
                                    std::uint64_t seed) {
  if (n_bs < 1 || n_bs > 3 || n_users < 1 || n_users > 8)
    throw std::invalid_argument(
        "make_small_instance: expects 1-3 stations and 1-8 users");

  NetworkScenario s;
  s.area_side_m = 4000.0;
  s.urllc_arrivals_per_tti = 0.0;
  s.seed = seed;

  const double mid = s.area_side_m / 2.0;
  const double anchor_x[3] = {mid, 1000.0, 3000.0};
  const double anchor_y[3] = {mid, 1000.0, 3000.0};

  BaseStation mbs;
  mbs.id = 0;
  mbs.kind = BsKind::mbs;
  mbs.position = {anchor_x[0], anchor_y[0], 0.0};
  mbs.power_budget_w = 40.0;
  mbs.bandwidth_hz = 50.0e6;
  s.base_stations.push_back(mbs);
  for (std::size_t j = 1; j < n_bs; ++j) {
    BaseStation ubs;
    ubs.id = static_cast<int>(j);
    ubs.kind = BsKind::ubs;
    ubs.position = {anchor_x[j], anchor_y[j], 200.0};
    ubs.power_budget_w = s.energy.launch_w;
    ubs.bandwidth_hz = 50.0e6;
    s.base_stations.push_back(ubs);
  }

  // A narrow ring keeps each cluster's link quality homogeneous, so greedy
  // per-user choices coincide with the jointly best assignment.
  constexpr double two_pi = 6.283185307179586476925287;
  Rng rng(seed);
  for (std::size_t i = 0; i < n_users; ++i) {
    const std::size_t home = i % n_bs;
    const double radius = rng.uniform(80.0, 120.0);
    const double phi = rng.uniform(0.0, two_pi);
    User u;
    u.id = static_cast<int>(i);
    u.kind = UserKind::embb;
    u.x = anchor_x[home] + radius * std::cos(phi);
    u.y = anchor_y[home] + radius * std::sin(phi);
    s.users.push_back(u);
  }
  return s;
}

GapRow gap_case(std::size_t n_bs, std::size_t n_users, std::uint64_t seed,
                const RunConfig& cfg) {
  const NetworkScenario s = make_small_instance(n_bs, n_users, seed);
  TtiState state;
  state.uav_avail_w.assign(s.uav_indices().size(),
                           s.energy.launch_w + s.energy.premium_w);
  const TtiResult heur = run_tti(s, state, Scheme::ruin, cfg);
  const OracleResult best = solve_exact(s, state, cfg);

  GapRow row;
  row.n_bs = n_bs;
  row.n_users = n_users;
  row.seed = seed;
  row.heuristic_obj = heur.objective;
  row.oracle_obj = best.objective;
  row.gap_rel = (best.objective - heur.objective) /
                std::max(std::abs(best.objective), 1e-300);
  return row;
}

std::vector<GapRow> gap_experiment(const std::vector<std::size_t>& bs_counts,
                                   const std::vector<std::size_t>& user_counts,
                                   std::size_t n_seeds, const RunConfig& cfg) {
  std::vector<GapRow> rows;
  for (std::size_t b = 0; b < bs_counts.size(); ++b)
    for (std::size_t n : user_counts)
      for (std::size_t i = 1; i <= n_seeds; ++i)
        rows.push_back(gap_case(bs_counts[b], n, 100 * b + i, cfg));
  return rows;
}

std::string gap_csv(const std::vector<GapRow>& rows) {
  std::string out =
      csv_row({"n_users", "seed", "heuristic_obj", "oracle_obj", "gap_rel"});
  for (const GapRow& r : rows)
    out += csv_row({std::to_string(r.n_users), std::to_string(r.seed),
                    fmt_double(r.heuristic_obj), fmt_double(r.oracle_obj),
                    fmt_double(r.gap_rel)});
  return out;
}

std::string flight_trace_csv(const FlightReport& rep) {
  std::string out =
      csv_row({"tti", "uav_id", "surplus_w", "psi", "n_assoc", "sum_power_w"});
  for (const FlightRow& r : rep.rows)
    out += csv_row({std::to_string(r.tti), std::to_string(r.uav_bs_id),
                    fmt_double(r.surplus_w), fmt_double(r.psi),
                    std::to_string(r.n_assoc), fmt_double(r.sum_power_w)});
  return out;
}

std::string flight_summary_csv(const std::vector<FlightReport>& reports) {
  std::string out = csv_row({"scheme", "seed", "flight_ttis", "users_served",
                             "ruined", "ruin_tti", "final_surplus_w",
                             "urllc_dropped", "arrival_overflow"});
  for (const FlightReport& r : reports)
    out += csv_row({to_string(r.scheme), std::to_string(r.seed),
                    std::to_string(r.flight_ttis),
                    std::to_string(r.users_served_total),
                    r.ruined ? "1" : "0", std::to_string(r.ruin_tti),
                    fmt_double(r.final_total_surplus_w),
                    std::to_string(r.urllc_dropped_total),
                    std::to_string(r.arrival_overflow_total)});
  return out;
}

std::vector<PsiSweepRow> psi_association_sweep(
    const NetworkScenario& s, const std::vector<double>& psi_values,
    const RunConfig& cfg) {
  const std::size_t n_bs = s.n_bs();
  const std::size_t n_users = s.n_users();
  if (n_users == 0) throw std::invalid_argument("psi sweep: no users");
  const ChannelState ch = compute_channel(s);
  const std::vector<std::size_t> uavs = s.uav_indices();
  const std::vector<std::size_t> embb_users = s.embb_class_user_indices();

  std::vector<double> rho(n_bs);
  for (std::size_t j = 0; j < n_bs; ++j)
    rho[j] = s.base_stations[j].power_budget_w;
  Matrix power(n_bs, n_users);
  for (std::size_t j = 0; j < n_bs; ++j)
    for (std::size_t k = 0; k < n_users; ++k)
      power(j, k) = rho[j] / static_cast<double>(n_users);
  const Matrix denom = interference_plus_noise(
      power, ch.gain, s.radio.noise_w, s.radio.interference_includes_mbs);
  Matrix gamma(n_bs, n_users);
  for (std::size_t j = 0; j < n_bs; ++j)
    for (std::size_t k = 0; k < n_users; ++k)
      gamma(j, k) = power(j, k) * ch.gain(j, k) / denom(j, k);

  std::vector<PsiSweepRow> rows;
  for (double v : psi_values) {
    std::vector<double> psi_bs(n_bs, 0.0);
    for (std::size_t u : uavs) psi_bs[u] = v;
    const AssociationResult ar =
        associate_ruin(gamma, psi_bs, power, rho, cfg.alpha, embb_users);
    PsiSweepRow row;
    row.psi = v;
    for (std::size_t u : uavs) row.n_assoc += ar.assoc.count_on(u);
    rows.push_back(row);
  }
  return rows;
}

std::string psi_sweep_csv(const std::vector<PsiSweepRow>& rows) {
  std::string out = csv_row({"psi", "n_assoc"});
  for (const PsiSweepRow& r : rows)
    out += csv_row({fmt_double(r.psi), std::to_string(r.n_assoc)});
  return out;
}

std::vector<SweepRow> sweep_users(const std::vector<std::size_t>& counts,
                                  const std::vector<Scheme>& schemes,
                                  std::size_t n_seeds, const RunConfig& cfg) {
  RunConfig run_cfg = cfg;
  run_cfg.drop_infeasible_urllc = true;

  struct Arm {
    std::string label;
    Scheme scheme;
    int n_ubs;
  };
  std::vector<Arm> arms;
  for (Scheme sc : schemes)
    arms.push_back({to_string(sc), sc, GenerationParams{}.n_ubs});
  arms.push_back({"terrestrial", Scheme::ruin, 0});

  std::vector<SweepRow> rows;
  for (std::size_t count : counts) {
    GenerationParams gp;
    if (count < static_cast<std::size_t>(gp.n_urllc) + 1)
      throw std::invalid_argument("sweep_users: count below the URLLC load");
    gp.n_embb = static_cast<int>(count) - gp.n_urllc - 1;

    for (const Arm& arm : arms) {
      GenerationParams agp = gp;
      agp.n_ubs = arm.n_ubs;
      std::vector<double> embb_means;
      std::vector<double> urllc_means;
      for (std::size_t i = 1; i <= n_seeds; ++i) {
        const std::uint64_t sseed = derive_seed(count, i);
        const NetworkScenario s = generate_scenario(agp, sseed);
        const TtiState state = sample_tti_state(s, derive_seed(sseed, 1));
        const TtiResult res = run_tti(s, state, arm.scheme, run_cfg);

        double esum = 0.0, usum = 0.0;
        std::size_t ecnt = 0, ucnt = 0;
        for (std::size_t k = 0; k < s.n_users(); ++k) {
          if (!s.users[k].embb_class()) continue;
          esum += res.rate_bps[k];
          ++ecnt;
        }
        for (std::size_t k : state.active_urllc) {
          if (!res.assoc.bs_of(k)) continue;
          usum += res.rate_bps[k];
          ++ucnt;
        }
        if (ecnt > 0) embb_means.push_back(esum / static_cast<double>(ecnt));
        if (ucnt > 0) urllc_means.push_back(usum / static_cast<double>(ucnt));
      }
      rows.push_back({count, arm.label, "embb", mean_of(embb_means),
                      ci95_of(embb_means)});
      rows.push_back({count, arm.label, "urllc", mean_of(urllc_means),
                      ci95_of(urllc_means)});
    }
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out =
      csv_row({"n_users", "scheme", "class", "rate_bps_mean", "rate_bps_ci95"});
  for (const SweepRow& r : rows)
    out += csv_row({std::to_string(r.n_users), r.scheme, r.cls,
                    fmt_double(r.rate_bps_mean), fmt_double(r.rate_bps_ci95)});
  return out;
}

std::vector<WaterfillDemoRow> waterfill_demo() {
  struct Regime {
    const char* name;
    std::vector<double> theta;
    double budget_w;
    double p_max_w;
  };
  const Regime regimes[] = {
      {"sufficient", {2.0, 1.5, 1.2, 1.0}, 4.0, 10.0},
      {"capped", {2.0, 1.5, 1.2, 1.0}, 3.2, 1.0},
      {"scarce", {5.0, 4.0, 0.05, 0.04}, 0.5, 10.0},
  };
  std::vector<WaterfillDemoRow> rows;
  for (const Regime& r : regimes) {
    const std::vector<double> omega(r.theta.size(), 1.0);
    const WaterfillResult res = waterfill(r.theta, omega, r.budget_w, r.p_max_w);
    for (std::size_t k = 0; k < r.theta.size(); ++k) {
      WaterfillDemoRow row;
      row.regime = r.name;
      row.user_id = k;
      row.inv_theta = 1.0 / r.theta[k];
      row.power_w = res.power_w[k];
      row.water_level = res.water_level;
      rows.push_back(row);
    }
  }
  return rows;
}

std::string waterfill_demo_csv(const std::vector<WaterfillDemoRow>& rows) {
  std::string out =
      csv_row({"regime", "user_id", "inv_theta", "power_w", "water_level"});
  for (const WaterfillDemoRow& r : rows)
    out += csv_row({r.regime, std::to_string(r.user_id),
                    fmt_double(r.inv_theta), fmt_double(r.power_w),
                    fmt_double(r.water_level)});
  return out;
}

}  // namespace uavnet
