#include "uavnet/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "uavnet/io.hpp"
#include "uavnet/rng.hpp"

namespace uavnet {

const char* to_string(BsKind k) {
  switch (k) {
    case BsKind::mbs: return "mbs";
    case BsKind::sbs: return "sbs";
    case BsKind::ubs: return "ubs";
  }
  return "?";
}

const char* to_string(UserKind k) {
  switch (k) {
    case UserKind::embb: return "embb";
    case UserKind::urllc: return "urllc";
    case UserKind::mmtc: return "mmtc";
  }
  return "?";
}

double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

std::vector<std::size_t> NetworkScenario::uav_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < base_stations.size(); ++j)
    if (base_stations[j].aerial()) out.push_back(j);
  return out;
}

std::vector<std::size_t> NetworkScenario::urllc_user_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < users.size(); ++k)
    if (users[k].kind == UserKind::urllc) out.push_back(k);
  return out;
}

std::vector<std::size_t> NetworkScenario::embb_class_user_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < users.size(); ++k)
    if (users[k].embb_class()) out.push_back(k);
  return out;
}

NetworkScenario generate_scenario(const GenerationParams& params,
                                  std::uint64_t seed) {
  if (params.n_sbs < 0 || params.n_ubs < 0 || params.n_embb < 0 ||
      params.n_urllc < 0)
    throw std::invalid_argument("generate_scenario: negative entity count");
  if (!(params.area_side_m > 0.0))
    throw std::invalid_argument("generate_scenario: area_side_m must be > 0");

  NetworkScenario s;
  s.radio = params.radio;
  s.energy = params.energy;
  s.area_side_m = params.area_side_m;
  s.urllc_arrivals_per_tti = params.urllc_arrivals_per_tti;
  s.seed = seed;

  Rng rng(seed);
  const double side = params.area_side_m;

  int bs_id = 0;
  BaseStation mbs;
  mbs.id = bs_id++;
  mbs.kind = BsKind::mbs;
  mbs.position = {side / 2.0, side / 2.0, 0.0};
  mbs.power_budget_w = params.mbs_power_w;
  mbs.bandwidth_hz = params.bandwidth_hz;
  s.base_stations.push_back(mbs);

  for (int i = 0; i < params.n_sbs; ++i) {
    BaseStation bs;
    bs.id = bs_id++;
    bs.kind = BsKind::sbs;
    bs.position = {rng.uniform(0.0, side), rng.uniform(0.0, side), 0.0};
    bs.power_budget_w = params.sbs_power_w;
    bs.bandwidth_hz = params.bandwidth_hz;
    s.base_stations.push_back(bs);
  }
  for (int i = 0; i < params.n_ubs; ++i) {
    BaseStation bs;
    bs.id = bs_id++;
    bs.kind = BsKind::ubs;
    bs.position = {rng.uniform(0.0, side), rng.uniform(0.0, side),
                   params.ubs_height_m};
    bs.power_budget_w = params.energy.launch_w;
    bs.bandwidth_hz = params.bandwidth_hz;
    s.base_stations.push_back(bs);
  }

  int user_id = 0;
  User mmtc;
  mmtc.id = user_id++;
  mmtc.kind = UserKind::mmtc;
  mmtc.x = rng.uniform(0.0, side);
  mmtc.y = rng.uniform(0.0, side);
  s.users.push_back(mmtc);

  for (int i = 0; i < params.n_embb; ++i) {
    User u;
    u.id = user_id++;
    u.kind = UserKind::embb;
    u.x = rng.uniform(0.0, side);
    u.y = rng.uniform(0.0, side);
    s.users.push_back(u);
  }
  for (int i = 0; i < params.n_urllc; ++i) {
    User u;
    u.id = user_id++;
    u.kind = UserKind::urllc;
    u.x = rng.uniform(0.0, side);
    u.y = rng.uniform(0.0, side);
    s.users.push_back(u);
  }
  return s;
}

std::vector<Violation> validate(const NetworkScenario& s) {
  std::vector<Violation> v;
  auto add = [&v](const char* code, std::string msg) {
    v.push_back({code, std::move(msg)});
  };

  std::set<int> bs_ids;
  int mbs_count = 0;
  for (const auto& bs : s.base_stations) {
    if (!bs_ids.insert(bs.id).second)
      add("duplicate_bs_id", "base station id " + std::to_string(bs.id) +
                                 " appears more than once");
    if (bs.kind == BsKind::mbs) {
      ++mbs_count;
      if (bs.id != 0)
        add("mbs_id", "macro station must have id 0, found " +
                          std::to_string(bs.id));
    }
    if (bs.aerial() && !(bs.position.z > 0.0))
      add("ubs_altitude", "aerial station " + std::to_string(bs.id) +
                              " must have positive altitude");
    if (!bs.aerial() && bs.position.z != 0.0)
      add("terrestrial_altitude", "terrestrial station " +
                                      std::to_string(bs.id) +
                                      " must sit at z = 0");
    if (bs.power_budget_w < 0.0)
      add("negative_power", "base station " + std::to_string(bs.id) +
                                " has negative power budget");
    if (!(bs.bandwidth_hz > 0.0))
      add("bad_bandwidth", "base station " + std::to_string(bs.id) +
                               " must have positive bandwidth");
  }
  if (mbs_count != 1)
    add("mbs_count",
        "expected exactly one macro station, found " + std::to_string(mbs_count));

  std::set<int> user_ids;
  int mmtc_count = 0;
  for (const auto& u : s.users) {
    if (!user_ids.insert(u.id).second)
      add("duplicate_user_id",
          "user id " + std::to_string(u.id) + " appears more than once");
    if (u.kind == UserKind::mmtc) {
      ++mmtc_count;
      if (u.id != 0)
        add("mmtc_id", "mMTC user must have id 0, found " + std::to_string(u.id));
    }
  }
  if (mmtc_count > 1)
    add("mmtc_count",
        "at most one mMTC user allowed, found " + std::to_string(mmtc_count));

  const RadioParams& r = s.radio;
  if (!(r.frequency_hz > 0.0)) add("bad_frequency", "frequency must be > 0");
  if (!(r.noise_w > 0.0)) add("bad_noise", "noise power must be > 0");
  if (!(r.urllc_sinr_threshold > 0.0))
    add("bad_zeta", "URLLC SINR threshold must be > 0");
  if (!(r.urllc_epsilon > 0.0 && r.urllc_epsilon < 1.0))
    add("bad_epsilon", "URLLC outage budget must lie in (0, 1)");
  if (!(r.embb_tti_s > 0.0 && r.urllc_tti_s > 0.0))
    add("bad_tti", "TTI durations must be > 0");
  if (r.urllc_tti_s > r.embb_tti_s)
    add("bad_tti", "URLLC mini-slot cannot exceed the eMBB frame");
  if (!(r.p_max_w > 0.0)) add("bad_p_max", "per-link power cap must be > 0");

  const EnergyParams& e = s.energy;
  if (e.launch_w < 0.0) add("bad_launch", "launch surplus must be >= 0");
  if (e.premium_w < 0.0) add("bad_premium", "premium must be >= 0");
  if (!(e.claim_rate_mu > 0.0)) add("bad_claim_mu", "claim rate must be > 0");
  if (e.ruin_horizon_ttis < 1)
    add("bad_ruin_horizon", "ruin look-ahead must be >= 1 TTI");

  if (s.urllc_arrivals_per_tti < 0.0)
    add("bad_urllc_arrivals", "URLLC arrival rate must be >= 0");
  if (!(s.area_side_m > 0.0)) add("bad_area", "area side must be > 0");

  for (const auto& bs : s.base_stations) {
    if (bs.position.x < 0.0 || bs.position.x > s.area_side_m ||
        bs.position.y < 0.0 || bs.position.y > s.area_side_m)
      add("position_out_of_area",
          "base station " + std::to_string(bs.id) + " lies outside the area");
  }
  for (const auto& u : s.users) {
    if (u.x < 0.0 || u.x > s.area_side_m || u.y < 0.0 || u.y > s.area_side_m)
      add("position_out_of_area",
          "user " + std::to_string(u.id) + " lies outside the area");
  }
  return v;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  errno = 0;
  char* end = nullptr;
  double d = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0' || errno == ERANGE)
    throw std::invalid_argument("config key '" + key +
                                "': cannot parse number '" + value + "'");
  return d;
}

long long parse_int(const std::string& key, const std::string& value) {
  errno = 0;
  char* end = nullptr;
  long long i = std::strtoll(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0' || errno == ERANGE)
    throw std::invalid_argument("config key '" + key +
                                "': cannot parse integer '" + value + "'");
  return i;
}

/// Splits text into (key, value) pairs, skipping comments and blank lines.
/// Lines starting with BS, or USER, are returned through `records`.
void split_lines(const std::string& text,
                 std::vector<std::pair<std::string, std::string>>& kv,
                 std::vector<std::string>* records) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.rfind("BS,", 0) == 0 || t.rfind("USER,", 0) == 0) {
      if (records == nullptr)
        throw std::invalid_argument("line " + std::to_string(lineno) +
                                    ": entity records not allowed here");
      records->push_back(t);
      continue;
    }
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("line " + std::to_string(lineno) +
                                  ": expected 'key = value', got '" + t + "'");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::invalid_argument("line " + std::to_string(lineno) +
                                  ": empty key or value");
    kv.emplace_back(key, value);
  }
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

ScenarioConfig parse_generation_config(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> kv;
  split_lines(text, kv, nullptr);

  ScenarioConfig cfg;
  GenerationParams& p = cfg.params;
  std::set<std::string> seen;
  for (const auto& [key, value] : kv) {
    if (!seen.insert(key).second)
      throw std::invalid_argument("config key '" + key + "' repeated");
    if (key == "area_side_m") p.area_side_m = parse_double(key, value);
    else if (key == "n_sbs") p.n_sbs = static_cast<int>(parse_int(key, value));
    else if (key == "n_ubs") p.n_ubs = static_cast<int>(parse_int(key, value));
    else if (key == "n_embb") p.n_embb = static_cast<int>(parse_int(key, value));
    else if (key == "n_urllc") p.n_urllc = static_cast<int>(parse_int(key, value));
    else if (key == "ubs_height_m") p.ubs_height_m = parse_double(key, value);
    else if (key == "frequency_hz") p.radio.frequency_hz = parse_double(key, value);
    else if (key == "bandwidth_hz") p.bandwidth_hz = parse_double(key, value);
    else if (key == "noise_dbm") p.radio.noise_w = dbm_to_watts(parse_double(key, value));
    else if (key == "p_max_w") p.radio.p_max_w = parse_double(key, value);
    else if (key == "mbs_power_w") p.mbs_power_w = parse_double(key, value);
    else if (key == "sbs_power_w") p.sbs_power_w = parse_double(key, value);
    else if (key == "uav_launch_w") p.energy.launch_w = parse_double(key, value);
    else if (key == "premium_w") p.energy.premium_w = parse_double(key, value);
    else if (key == "claim_mu") p.energy.claim_rate_mu = parse_double(key, value);
    else if (key == "zeta_db") p.radio.urllc_sinr_threshold = db_to_linear(parse_double(key, value));
    else if (key == "epsilon") p.radio.urllc_epsilon = parse_double(key, value);
    else if (key == "embb_tti_ms") p.radio.embb_tti_s = parse_double(key, value) * 1e-3;
    else if (key == "urllc_tti_ms") p.radio.urllc_tti_s = parse_double(key, value) * 1e-3;
    else if (key == "urllc_arrivals") p.urllc_arrivals_per_tti = parse_double(key, value);
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
    else
      throw std::invalid_argument("unknown config key '" + key + "'");
  }
  return cfg;
}

std::string serialize_scenario(const NetworkScenario& s) {
  std::ostringstream out;
  out << "# network scenario\n";
  out << "area_side_m = " << fmt_double(s.area_side_m) << "\n";
  out << "seed = " << s.seed << "\n";
  out << "urllc_arrivals = " << fmt_double(s.urllc_arrivals_per_tti) << "\n";
  out << "frequency_hz = " << fmt_double(s.radio.frequency_hz) << "\n";
  out << "noise_w = " << fmt_double(s.radio.noise_w) << "\n";
  out << "zeta = " << fmt_double(s.radio.urllc_sinr_threshold) << "\n";
  out << "epsilon = " << fmt_double(s.radio.urllc_epsilon) << "\n";
  out << "embb_tti_s = " << fmt_double(s.radio.embb_tti_s) << "\n";
  out << "urllc_tti_s = " << fmt_double(s.radio.urllc_tti_s) << "\n";
  out << "p_max_w = " << fmt_double(s.radio.p_max_w) << "\n";
  out << "terrestrial_intercept_db = "
      << fmt_double(s.radio.terrestrial_intercept_db) << "\n";
  out << "interference_includes_mbs = "
      << (s.radio.interference_includes_mbs ? 1 : 0) << "\n";
  out << "urllc_rule = "
      << (s.radio.urllc_rule == UrllcPowerRule::standard ? "standard"
                                                         : "as_written")
      << "\n";
  out << "gain_rule = "
      << (s.radio.gain_rule == EffectiveGainRule::sinr_consistent
              ? "sinr_consistent"
              : "as_written")
      << "\n";
  out << "fading = "
      << (s.radio.fading == FadingModel::none ? "none" : "rayleigh") << "\n";
  out << "launch_w = " << fmt_double(s.energy.launch_w) << "\n";
  out << "premium_w = " << fmt_double(s.energy.premium_w) << "\n";
  out << "claim_mu = " << fmt_double(s.energy.claim_rate_mu) << "\n";
  out << "ruin_horizon_ttis = " << s.energy.ruin_horizon_ttis << "\n";
  for (const auto& bs : s.base_stations) {
    out << "BS," << bs.id << "," << to_string(bs.kind) << ","
        << fmt_double(bs.position.x) << "," << fmt_double(bs.position.y) << ","
        << fmt_double(bs.position.z) << "," << fmt_double(bs.power_budget_w)
        << "," << fmt_double(bs.bandwidth_hz) << "\n";
  }
  for (const auto& u : s.users) {
    out << "USER," << u.id << "," << to_string(u.kind) << "," << fmt_double(u.x)
        << "," << fmt_double(u.y) << "\n";
  }
  return out.str();
}

NetworkScenario parse_scenario(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> kv;
  std::vector<std::string> records;
  split_lines(text, kv, &records);

  NetworkScenario s;
  for (const auto& [key, value] : kv) {
    if (key == "area_side_m") s.area_side_m = parse_double(key, value);
    else if (key == "seed") s.seed = static_cast<std::uint64_t>(parse_int(key, value));
    else if (key == "urllc_arrivals") s.urllc_arrivals_per_tti = parse_double(key, value);
    else if (key == "frequency_hz") s.radio.frequency_hz = parse_double(key, value);
    else if (key == "noise_w") s.radio.noise_w = parse_double(key, value);
    else if (key == "zeta") s.radio.urllc_sinr_threshold = parse_double(key, value);
    else if (key == "epsilon") s.radio.urllc_epsilon = parse_double(key, value);
    else if (key == "embb_tti_s") s.radio.embb_tti_s = parse_double(key, value);
    else if (key == "urllc_tti_s") s.radio.urllc_tti_s = parse_double(key, value);
    else if (key == "p_max_w") s.radio.p_max_w = parse_double(key, value);
    else if (key == "terrestrial_intercept_db") s.radio.terrestrial_intercept_db = parse_double(key, value);
    else if (key == "interference_includes_mbs") s.radio.interference_includes_mbs = parse_int(key, value) != 0;
    else if (key == "urllc_rule") {
      if (value == "standard") s.radio.urllc_rule = UrllcPowerRule::standard;
      else if (value == "as_written") s.radio.urllc_rule = UrllcPowerRule::as_written;
      else throw std::invalid_argument("urllc_rule: unknown value '" + value + "'");
    } else if (key == "gain_rule") {
      if (value == "sinr_consistent") s.radio.gain_rule = EffectiveGainRule::sinr_consistent;
      else if (value == "as_written") s.radio.gain_rule = EffectiveGainRule::as_written;
      else throw std::invalid_argument("gain_rule: unknown value '" + value + "'");
    } else if (key == "fading") {
      if (value == "none") s.radio.fading = FadingModel::none;
      else if (value == "rayleigh") s.radio.fading = FadingModel::rayleigh;
      else throw std::invalid_argument("fading: unknown value '" + value + "'");
    }
    else if (key == "launch_w") s.energy.launch_w = parse_double(key, value);
    else if (key == "premium_w") s.energy.premium_w = parse_double(key, value);
    else if (key == "claim_mu") s.energy.claim_rate_mu = parse_double(key, value);
    else if (key == "ruin_horizon_ttis") s.energy.ruin_horizon_ttis = static_cast<int>(parse_int(key, value));
    else
      throw std::invalid_argument("unknown scenario key '" + key + "'");
  }

  for (const std::string& rec : records) {
    std::vector<std::string> f = split_csv(rec);
    if (f[0] == "BS") {
      if (f.size() != 8)
        throw std::invalid_argument("BS record needs 8 fields: '" + rec + "'");
      BaseStation bs;
      bs.id = static_cast<int>(parse_int("BS.id", f[1]));
      if (f[2] == "mbs") bs.kind = BsKind::mbs;
      else if (f[2] == "sbs") bs.kind = BsKind::sbs;
      else if (f[2] == "ubs") bs.kind = BsKind::ubs;
      else throw std::invalid_argument("BS record: unknown kind '" + f[2] + "'");
      bs.position.x = parse_double("BS.x", f[3]);
      bs.position.y = parse_double("BS.y", f[4]);
      bs.position.z = parse_double("BS.z", f[5]);
      bs.power_budget_w = parse_double("BS.power_w", f[6]);
      bs.bandwidth_hz = parse_double("BS.bw_hz", f[7]);
      s.base_stations.push_back(bs);
    } else {
      if (f.size() != 5)
        throw std::invalid_argument("USER record needs 5 fields: '" + rec + "'");
      User u;
      u.id = static_cast<int>(parse_int("USER.id", f[1]));
      if (f[2] == "embb") u.kind = UserKind::embb;
      else if (f[2] == "urllc") u.kind = UserKind::urllc;
      else if (f[2] == "mmtc") u.kind = UserKind::mmtc;
      else throw std::invalid_argument("USER record: unknown kind '" + f[2] + "'");
      u.x = parse_double("USER.x", f[3]);
      u.y = parse_double("USER.y", f[4]);
      s.users.push_back(u);
    }
  }
  return s;
}

NetworkScenario load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();

  // Entity records mark an explicit scenario; otherwise treat the file as a
  // generation config.
  bool has_records = false;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    std::string t = trim(line);
    if (t.rfind("BS,", 0) == 0 || t.rfind("USER,", 0) == 0) {
      has_records = true;
      break;
    }
  }
  if (has_records) return parse_scenario(text);
  ScenarioConfig cfg = parse_generation_config(text);
  return generate_scenario(cfg.params, cfg.seed);
}

}  // namespace uavnet
