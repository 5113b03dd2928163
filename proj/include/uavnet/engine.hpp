#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "uavnet/association.hpp"
#include "uavnet/matrix.hpp"
#include "uavnet/scenario.hpp"

namespace uavnet {

enum class Scheme { ruin, sinr };
const char* to_string(Scheme s);

struct RunConfig {
  double eps0_w = 1e-6;  // power convergence threshold, infinity norm
  int t_max = 100;       // iteration cap per TTI
  double alpha = 1.0;    // association weight
  double varsigma = 1.0; // objective rate weight
  double xi = 1.0;       // objective ruin weight
  // Stored capital per UAV at the start of a flight.
  double flight_launch_w = 100.0;
  // Flights and sweeps drop users whose reliability power is unattainable
  // (dead link or above p_max) instead of aborting the whole experiment.
  bool drop_infeasible_urllc = false;
};

/// Mutable per-TTI inputs. uav_avail_w follows scenario.uav_indices() order
/// and holds each UAV's spendable capital at the TTI start (premium included).
struct TtiState {
  std::vector<double> uav_avail_w;
  std::vector<std::size_t> active_urllc; // user ids scheduled this TTI
  int remaining_ttis = 0;                // 0 = no flight bound on the ruin window
  static TtiState defaults(const NetworkScenario& s);
};

struct TtiResult {
  AssociationMatrix assoc;              // all classes; inactive URLLC left out
  Matrix power_w;                       // rows BSs, cols users
  std::vector<double> rate_bps;         // per user, 0 if unassociated
  std::vector<double> gamma;            // per-user SINR behind rate_bps
  std::vector<double> embb_bits;        // per-user D', 0 for URLLC users
  std::vector<double> uav_surplus_w;    // avail minus spend, may be negative
  std::vector<double> psi;              // per UAV, as used for association
  std::vector<double> water_level;      // per BS
  std::vector<std::size_t> dropped_urllc;
  std::size_t lambda_u = 0;             // scheduled URLLC count, capped at T/t
  int iterations = 0;
  bool converged = false;
  double objective = 0.0;
};

/// URLLC users whose reliability power cannot be provided.
struct UrllcInfeasibleUsers : std::runtime_error {
  std::vector<std::size_t> users;
  explicit UrllcInfeasibleUsers(std::vector<std::size_t> u);
};

/// Per-user bandwidth at each BS under the given association, counting only
/// eMBB-class users (URLLC traffic rides mini-slots at full band).
std::vector<double> embb_share_hz(const NetworkScenario& s,
                                  const AssociationMatrix& assoc);

/// Outcome of the URLLC provisioning stage shared by the orchestrator and
/// the exhaustive solver: pins, closed-form powers and spend against the
/// uniform-power snapshot, and what that leaves per BS.
struct UrllcStage {
  AssociationMatrix pins;
  Matrix power_w;
  std::vector<double> spend_w;
  std::vector<double> residual_w;
  std::vector<double> gamma; // per user, SINR as provisioned
  std::vector<std::size_t> dropped;
  std::size_t lambda_u = 0;
};

/// Per-TTI budget vector: nominal transmit power for terrestrial stations,
/// the state's live capital for UAVs.
std::vector<double> tti_budgets(const NetworkScenario& s,
                                const TtiState& state);

/// rho holds the per-BS power budget for the TTI. The convenience overload
/// takes every budget from the nominal station records.
UrllcStage urllc_stage(const NetworkScenario& s, const Matrix& gain,
                       const std::vector<std::size_t>& active_urllc,
                       bool drop_infeasible, const std::vector<double>& rho);
UrllcStage urllc_stage(const NetworkScenario& s, const Matrix& gain,
                       const std::vector<std::size_t>& active_urllc,
                       bool drop_infeasible);

/// One TTI of the iterative association/allocation orchestrator:
/// uniform init, URLLC pinning and closed-form powers against the uniform
/// snapshot, then alternate eMBB association and per-BS waterfill until the
/// power matrix moves less than eps0 or t_max iterations pass.
/// Terrestrial budgets are the nominal transmit budgets; a UAV's budget is
/// whatever capital the state says it has left, so a drained UAV offers,
/// admits and allocates less.
TtiResult run_tti(const NetworkScenario& s, const TtiState& state,
                  Scheme scheme, const RunConfig& cfg);

/// Objective: varsigma * sum of eMBB D' bits - xi * sum of per-UAV ruin
/// probabilities, with psi recomputed from the post-allocation surplus.
double objective_value(const AssociationMatrix& assoc, const Matrix& power_w,
                       const NetworkScenario& s, const TtiState& state,
                       double varsigma, double xi);

struct FlightRow {
  int tti = 0;
  std::size_t uav_bs_id = 0;
  double surplus_w = 0.0;
  double psi = 0.0;
  std::size_t n_assoc = 0;
  double sum_power_w = 0.0;
};

struct FlightReport {
  Scheme scheme = Scheme::ruin;
  std::uint64_t seed = 0;
  int flight_ttis = 0;            // completed TTIs before ruin or horizon end
  long long users_served_total = 0; // UAV-served user-TTIs over completed TTIs
  bool ruined = false;
  int ruin_tti = -1;              // 1-based TTI of the ruin event
  double final_total_surplus_w = 0.0; // after the last completed TTI
  std::vector<FlightRow> rows;    // every executed TTI, ruin TTI included
  std::vector<double> total_surplus_by_tti; // after each executed TTI
  std::uint64_t urllc_dropped_total = 0;
  std::uint64_t arrival_overflow_total = 0;
};

/// Simulates one flight starting from cfg.flight_launch_w per UAV: per TTI
/// add the premium, sample Poisson URLLC arrivals (capped at the T/t
/// mini-slot count, overflow counted), run the TTI, then bill each UAV's
/// ledger. The bill is the provisioned URLLC power plus one exponential
/// claim of rate claim_mu per associated eMBB-class user, so the drain a
/// UAV sees is the claim process its ruin probability models, and a UAV
/// that sheds its users stops draining. The flight ends at the horizon or
/// at the first TTI that leaves any UAV's surplus negative.
FlightReport run_flight(const NetworkScenario& s, int horizon_ttis,
                        Scheme scheme, std::uint64_t seed,
                        const RunConfig& cfg);

}  // namespace uavnet
