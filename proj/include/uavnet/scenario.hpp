#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace uavnet {

enum class BsKind { mbs, sbs, ubs };
enum class UserKind { embb, urllc, mmtc };

const char* to_string(BsKind k);
const char* to_string(UserKind k);

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

struct BaseStation {
  int id = 0;
  BsKind kind = BsKind::mbs;
  Vec3 position;               // meters; terrestrial stations sit at z = 0
  double power_budget_w = 0.0; // per-TTI transmit energy budget (watt-TTI)
  double bandwidth_hz = 0.0;

  bool aerial() const { return kind == BsKind::ubs; }
};

struct User {
  int id = 0;
  UserKind kind = UserKind::embb;
  double x = 0.0;
  double y = 0.0;

  /// mMTC demand is carried on the eMBB resource path.
  bool embb_class() const { return kind != UserKind::urllc; }
};

/// How the URLLC reliability power is computed.
enum class UrllcPowerRule {
  standard,   // p = zeta * I / h, so the re-evaluated SINR is exactly zeta
  as_written  // p = zeta * (1 + I) / h, the literal formula
};

/// How the effective gain feeding the water-filler is computed.
enum class EffectiveGainRule {
  sinr_consistent, // theta = h / (I + sigma^2); gamma == theta * p exactly
  as_written       // theta = h / (1 + I + share * sigma^2)
};

/// Optional fast-fading hook for the URLLC quantile mode. The deterministic
/// default keeps the reliability threshold untouched.
enum class FadingModel { none, rayleigh };

struct RadioParams {
  double frequency_hz = 2.0e9;
  double noise_w = 1.778279410038923e-13;      // -97.5 dBm total in-band
  double urllc_sinr_threshold = 1.0;           // zeta, linear
  double urllc_epsilon = 0.01;                 // outage budget
  double embb_tti_s = 1.0e-3;                  // frame length T
  double urllc_tti_s = 0.125e-3;               // mini-slot length t
  double p_max_w = 0.04;                       // per-link transmit cap
  double terrestrial_intercept_db = 15.3;      // pathloss intercept for MBS/SBS
  bool interference_includes_mbs = false;      // macro row joins the sum when set
  UrllcPowerRule urllc_rule = UrllcPowerRule::standard;
  EffectiveGainRule gain_rule = EffectiveGainRule::sinr_consistent;
  FadingModel fading = FadingModel::none;
};

struct EnergyParams {
  double launch_w = 0.5;        // UAV surplus at launch (rho_0)
  double premium_w = 0.05;      // harvested per TTI (rho)
  double claim_rate_mu = 10.0;  // exponential claim-size rate
  int ruin_horizon_ttis = 12;   // look-ahead window for survival probability
};

struct NetworkScenario {
  std::vector<BaseStation> base_stations;
  std::vector<User> users;
  RadioParams radio;
  EnergyParams energy;
  double area_side_m = 4000.0;
  double urllc_arrivals_per_tti = 2.0; // Poisson mean per TTI
  std::uint64_t seed = 1;

  std::size_t n_bs() const { return base_stations.size(); }
  std::size_t n_users() const { return users.size(); }
  std::vector<std::size_t> uav_indices() const;
  std::vector<std::size_t> urllc_user_indices() const;
  std::vector<std::size_t> embb_class_user_indices() const;
};

struct GenerationParams {
  int n_sbs = 10;
  int n_ubs = 5;
  int n_embb = 40;
  int n_urllc = 8;
  double area_side_m = 4000.0;
  double ubs_height_m = 200.0;
  double mbs_power_w = 40.0;
  double sbs_power_w = 1.0;
  double bandwidth_hz = 50.0e6;
  double urllc_arrivals_per_tti = 2.0;
  RadioParams radio;
  EnergyParams energy;
};

/// Uniform placement over the square area: MBS at the center, SBS/UBS/users
/// i.i.d. uniform, UBS at the configured altitude. The mMTC user is always
/// materialized as user id 0. Identical (params, seed) give identical output.
NetworkScenario generate_scenario(const GenerationParams& params,
                                  std::uint64_t seed);

struct Violation {
  std::string code;
  std::string message;
};

/// Structural checks (id uniqueness, altitude conventions, parameter ranges).
/// Total function: never throws, returns every violation found.
std::vector<Violation> validate(const NetworkScenario& s);

struct ScenarioConfig {
  GenerationParams params;
  std::uint64_t seed = 1;
};

/// Parses the flat `key = value` generation config. Unknown keys, malformed
/// lines and unparsable values are hard errors (std::invalid_argument).
/// Omitted keys keep their defaults. dB/dBm-valued keys are converted to
/// linear units here and nowhere else.
ScenarioConfig parse_generation_config(const std::string& text);

/// Line-record scenario serialization:
///   BS,id,kind,x,y,z,power_w,bw_hz
///   USER,id,kind,x,y
/// preceded by `key = value` lines for the scalar parameters in linear units.
/// Doubles are printed with enough digits to round-trip bit-exactly.
std::string serialize_scenario(const NetworkScenario& s);

/// Inverse of serialize_scenario. Throws std::invalid_argument on malformed
/// input or unknown keys.
NetworkScenario parse_scenario(const std::string& text);

/// Reads either representation from disk: files containing BS,/USER, records
/// are parsed as explicit scenarios, anything else as a generation config
/// (which is then expanded with its seed).
NetworkScenario load_scenario_file(const std::string& path);

double dbm_to_watts(double dbm);
double db_to_linear(double db);

}  // namespace uavnet
