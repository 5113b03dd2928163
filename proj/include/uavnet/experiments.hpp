#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uavnet/engine.hpp"
#include "uavnet/scenario.hpp"

namespace uavnet {

/// TTI inputs for a standalone run: every UAV at launch capital plus one
/// premium, URLLC arrivals Poisson-sampled from the seed exactly as the first
/// TTI of a flight samples them.
TtiState sample_tti_state(const NetworkScenario& s, std::uint64_t seed);

/// One row per associated user: user_id,bs_id,eta,gamma,psi.
std::string association_csv(const NetworkScenario& s, const TtiResult& r,
                            double alpha);

/// One row per assigned (BS, user) link: bs_id,user_id,class,power_w,water_level.
std::string power_csv(const NetworkScenario& s, const TtiResult& r);

struct RuinTableRow {
  double rho0_w = 0.0;
  double premium_w = 0.0;
  double mu = 0.0;
  int horizon_ttis = 0;
  double psi_analytic = 0.0;
  double psi_mc = 0.0;
  double mc_stderr = 0.0;
};

/// Analytic vs Monte-Carlo ruin probability over a fixed parameter grid,
/// keeping the points with analytic psi in [0.05, 0.95].
std::vector<RuinTableRow> ruin_table(std::size_t n_paths, std::uint64_t seed);

std::string ruin_table_csv(const std::vector<RuinTableRow>& rows);

/// Clustered small scenario for exhaustive comparison: MBS at the center,
/// n_bs - 1 aerial stations over well-separated hotspots, users ring-placed
/// around the stations round-robin. All users are eMBB class so every
/// instance associates everyone and power caps stay slack.
NetworkScenario make_small_instance(std::size_t n_bs, std::size_t n_users,
                                    std::uint64_t seed);

struct GapRow {
  std::size_t n_bs = 0;
  std::size_t n_users = 0;
  std::uint64_t seed = 0;
  double heuristic_obj = 0.0;
  double oracle_obj = 0.0;
  double gap_rel = 0.0;
};

GapRow gap_case(std::size_t n_bs, std::size_t n_users, std::uint64_t seed,
                const RunConfig& cfg);

/// Every (bs count, user count, seed) combination; seeds are offset per BS
/// count so rows stay distinguishable in the CSV.
std::vector<GapRow> gap_experiment(const std::vector<std::size_t>& bs_counts,
                                   const std::vector<std::size_t>& user_counts,
                                   std::size_t n_seeds, const RunConfig& cfg);

std::string gap_csv(const std::vector<GapRow>& rows);

/// Per-TTI per-UAV trace: tti,uav_id,surplus_w,psi,n_assoc,sum_power_w.
std::string flight_trace_csv(const FlightReport& rep);

/// One row per (scheme, seed) flight.
std::string flight_summary_csv(const std::vector<FlightReport>& reports);

struct PsiSweepRow {
  double psi = 0.0;
  std::size_t n_assoc = 0;
};

/// UAV-associated head count as a function of a ruin probability imposed on
/// every UAV, association evaluated once against the uniform-power snapshot.
std::vector<PsiSweepRow> psi_association_sweep(
    const NetworkScenario& s, const std::vector<double>& psi_values,
    const RunConfig& cfg);

std::string psi_sweep_csv(const std::vector<PsiSweepRow>& rows);

struct SweepRow {
  std::size_t n_users = 0;
  std::string scheme;  // ruin | sinr | terrestrial
  std::string cls;     // embb | urllc
  double rate_bps_mean = 0.0;
  double rate_bps_ci95 = 0.0;
};

/// Mean per-user rate by class for each user count and scheme, plus a
/// terrestrial-only baseline (no aerial stations, same user population).
/// Mean and CI are across per-seed means.
std::vector<SweepRow> sweep_users(const std::vector<std::size_t>& counts,
                                  const std::vector<Scheme>& schemes,
                                  std::size_t n_seeds, const RunConfig& cfg);

std::string sweep_csv(const std::vector<SweepRow>& rows);

struct WaterfillDemoRow {
  std::string regime;  // sufficient | capped | scarce
  std::size_t user_id = 0;
  double inv_theta = 0.0;
  double power_w = 0.0;
  double water_level = 0.0;
};

/// Three canonical water-filling regimes: everyone interior, someone at the
/// cap, someone shut off.
std::vector<WaterfillDemoRow> waterfill_demo();

std::string waterfill_demo_csv(const std::vector<WaterfillDemoRow>& rows);

}  // namespace uavnet
