#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "uavnet/engine.hpp"
#include "uavnet/experiments.hpp"
#include "uavnet/scenario.hpp"

using namespace uavnet;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

std::size_t field_count(const std::string& line) {
  return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
}

}  // namespace

TEST_CASE("sample_tti_state is a funded, sorted, capped arrival draw") {
  const NetworkScenario s = generate_scenario(GenerationParams{}, 1);
  const TtiState a = sample_tti_state(s, 9);
  const TtiState b = sample_tti_state(s, 9);
  CHECK(a.uav_avail_w == b.uav_avail_w);
  CHECK(a.active_urllc == b.active_urllc);

  REQUIRE(a.uav_avail_w.size() == s.uav_indices().size());
  for (double w : a.uav_avail_w)
    CHECK(w == s.energy.launch_w + s.energy.premium_w);
  CHECK(std::is_sorted(a.active_urllc.begin(), a.active_urllc.end()));
  CHECK(a.active_urllc.size() <= 8);
  const std::vector<std::size_t> urllc = s.urllc_user_indices();
  for (std::size_t k : a.active_urllc)
    CHECK(std::find(urllc.begin(), urllc.end(), k) != urllc.end());

  // Different seeds should eventually disagree on the draw.
  bool differs = false;
  for (std::uint64_t seed = 10; seed < 20 && !differs; ++seed)
    differs = sample_tti_state(s, seed).active_urllc != a.active_urllc;
  CHECK(differs);
}

TEST_CASE("small instances are valid clustered all-eMBB scenarios") {
  CHECK_THROWS_AS(make_small_instance(4, 5, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_small_instance(2, 9, 1), std::invalid_argument);

  const NetworkScenario s = make_small_instance(3, 8, 7);
  CHECK(validate(s).empty());
  REQUIRE(s.n_bs() == 3);
  REQUIRE(s.n_users() == 8);
  CHECK(s.base_stations[0].kind == BsKind::mbs);
  CHECK(s.base_stations[1].kind == BsKind::ubs);
  CHECK(s.urllc_user_indices().empty());

  for (std::size_t i = 0; i < s.n_users(); ++i) {
    CHECK(s.users[i].kind == UserKind::embb);
    const BaseStation& home = s.base_stations[i % 3];
    const double dx = s.users[i].x - home.position.x;
    const double dy = s.users[i].y - home.position.y;
    const double r = std::sqrt(dx * dx + dy * dy);
    CHECK(r >= 80.0 - 1e-9);
    CHECK(r <= 120.0 + 1e-9);
  }

  // Same seed, same instance; different seed, different user draw.
  const NetworkScenario t = make_small_instance(3, 8, 7);
  CHECK(serialize_scenario(s) == serialize_scenario(t));
  CHECK(serialize_scenario(make_small_instance(3, 8, 8)) !=
        serialize_scenario(s));
}

TEST_CASE("ruin table keeps the mid-range grid points") {
  const std::vector<RuinTableRow> rows = ruin_table(2000, 42);
  CHECK(rows.size() >= 20);
  for (const RuinTableRow& r : rows) {
    CHECK(r.psi_analytic >= 0.05);
    CHECK(r.psi_analytic <= 0.95);
    CHECK(r.psi_mc >= 0.0);
    CHECK(r.psi_mc <= 1.0);
    CHECK(r.mc_stderr > 0.0);
  }
  const std::vector<RuinTableRow> again = ruin_table(2000, 42);
  REQUIRE(again.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    CHECK(again[i].psi_mc == rows[i].psi_mc);

  const std::vector<std::string> csv = lines_of(ruin_table_csv(rows));
  REQUIRE(csv.size() == rows.size() + 1);
  CHECK(csv[0] == "rho0,premium,mu,horizon,psi_analytic,psi_mc,mc_stderr");
  for (const std::string& line : csv) CHECK(field_count(line) == 7);
}

TEST_CASE("gap rows stay within the acceptance tolerance on spot checks") {
  const RunConfig cfg;
  for (std::uint64_t seed : {101, 102}) {
    const GapRow row = gap_case(2, 4, seed, cfg);
    CAPTURE(seed);
    CHECK(row.gap_rel >= -1e-12);
    CHECK(row.gap_rel <= 1e-6);
  }

  const std::vector<GapRow> rows = gap_experiment({2}, {3, 4}, 2, cfg);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].seed == 1);
  CHECK(rows[1].seed == 2);
  const std::vector<std::string> csv = lines_of(gap_csv(rows));
  CHECK(csv[0] == "n_users,seed,heuristic_obj,oracle_obj,gap_rel");
  REQUIRE(csv.size() == 5);
  for (const std::string& line : csv) CHECK(field_count(line) == 5);
}

TEST_CASE("flight CSVs carry one row per UAV-TTI and one per flight") {
  const NetworkScenario s = generate_scenario(GenerationParams{}, 1);
  const FlightReport rep = run_flight(s, 6, Scheme::ruin, 3, RunConfig{});
  const std::vector<std::string> trace = lines_of(flight_trace_csv(rep));
  CHECK(trace[0] == "tti,uav_id,surplus_w,psi,n_assoc,sum_power_w");
  REQUIRE(trace.size() == rep.rows.size() + 1);
  for (const std::string& line : trace) CHECK(field_count(line) == 6);

  const FlightReport rep2 = run_flight(s, 6, Scheme::sinr, 3, RunConfig{});
  const std::vector<std::string> summary =
      lines_of(flight_summary_csv({rep, rep2}));
  REQUIRE(summary.size() == 3);
  CHECK(summary[0] ==
        "scheme,seed,flight_ttis,users_served,ruined,ruin_tti,final_surplus_w,"
        "urllc_dropped,arrival_overflow");
  CHECK(summary[1].substr(0, 5) == "ruin,");
  CHECK(summary[2].substr(0, 5) == "sinr,");
}

TEST_CASE("UAV attachment shrinks as the imposed ruin risk grows") {
  const NetworkScenario s = generate_scenario(GenerationParams{}, 1);
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(0.1 * i);
  const std::vector<PsiSweepRow> rows =
      psi_association_sweep(s, grid, RunConfig{});
  REQUIRE(rows.size() == grid.size());
  for (std::size_t i = 1; i < rows.size(); ++i)
    CHECK(rows[i].n_assoc <= rows[i - 1].n_assoc);
  CHECK(rows.front().n_assoc > 0);
  // At psi = 1 the survival factor zeroes every aerial score.
  CHECK(rows.back().n_assoc == 0);

  const std::vector<std::string> csv = lines_of(psi_sweep_csv(rows));
  CHECK(csv[0] == "psi,n_assoc");
  REQUIRE(csv.size() == rows.size() + 1);
}

TEST_CASE("user sweep emits one row per count, arm and class") {
  const std::vector<SweepRow> rows =
      sweep_users({25}, {Scheme::ruin}, 2, RunConfig{});
  REQUIRE(rows.size() == 4); // (ruin, terrestrial) x (embb, urllc)
  CHECK(rows[0].scheme == "ruin");
  CHECK(rows[0].cls == "embb");
  CHECK(rows[1].scheme == "ruin");
  CHECK(rows[1].cls == "urllc");
  CHECK(rows[2].scheme == "terrestrial");
  CHECK(rows[3].scheme == "terrestrial");
  for (const SweepRow& r : rows) {
    CHECK(r.n_users == 25);
    CHECK(r.rate_bps_mean > 0.0);
  }
  // Provisioned URLLC links sit exactly at the unit threshold, so their rate
  // is one bandwidth worth of bits per second.
  CHECK(rows[1].rate_bps_mean == doctest::Approx(50.0e6).epsilon(1e-9));

  const std::vector<std::string> csv = lines_of(sweep_csv(rows));
  CHECK(csv[0] == "n_users,scheme,class,rate_bps_mean,rate_bps_ci95");
  REQUIRE(csv.size() == 5);

  CHECK_THROWS_AS(sweep_users({8}, {Scheme::ruin}, 1, RunConfig{}),
                  std::invalid_argument);
}

TEST_CASE("waterfill demo freezes the three textbook regimes") {
  const std::vector<WaterfillDemoRow> rows = waterfill_demo();
  REQUIRE(rows.size() == 12);
  CHECK(rows[0].regime == "sufficient");
  CHECK(rows[4].regime == "capped");
  CHECK(rows[8].regime == "scarce");

  const double expected[12] = {1.25, 1.25 - 1.0 / 6.0, 1.25 - 1.0 / 3.0, 0.75,
                               1.0,  0.9,  2.2 / 3.0,  1.7 / 3.0,
                               0.275, 0.225, 0.0, 0.0};
  for (std::size_t i = 0; i < 12; ++i) {
    CAPTURE(i);
    CHECK(rows[i].power_w == doctest::Approx(expected[i]).epsilon(1e-9));
  }
  // Inside one regime the water level is shared and floors are increasing.
  for (std::size_t i = 1; i < 12; ++i) {
    if (rows[i].regime != rows[i - 1].regime) continue;
    CHECK(rows[i].water_level == rows[i - 1].water_level);
    CHECK(rows[i].inv_theta >= rows[i - 1].inv_theta);
  }

  const std::vector<std::string> csv = lines_of(waterfill_demo_csv(rows));
  CHECK(csv[0] == "regime,user_id,inv_theta,power_w,water_level");
  REQUIRE(csv.size() == 13);
}

TEST_CASE("snapshot CSVs mirror the TTI result") {
  const NetworkScenario s = generate_scenario(GenerationParams{}, 1);
  const TtiState st = sample_tti_state(s, 2);
  const RunConfig cfg;
  const TtiResult res = run_tti(s, st, Scheme::ruin, cfg);

  std::size_t n_assoc = 0;
  for (std::size_t k = 0; k < s.n_users(); ++k)
    if (res.assoc.bs_of(k)) ++n_assoc;

  const std::vector<std::string> assoc =
      lines_of(association_csv(s, res, cfg.alpha));
  CHECK(assoc[0] == "user_id,bs_id,eta,gamma,psi");
  REQUIRE(assoc.size() == n_assoc + 1);
  for (const std::string& line : assoc) CHECK(field_count(line) == 5);

  const std::vector<std::string> power = lines_of(power_csv(s, res));
  CHECK(power[0] == "bs_id,user_id,class,power_w,water_level");
  REQUIRE(power.size() == n_assoc + 1);
  bool saw_urllc = false, saw_embb = false;
  for (std::size_t i = 1; i < power.size(); ++i) {
    CHECK(field_count(power[i]) == 5);
    if (power[i].find(",urllc,") != std::string::npos) saw_urllc = true;
    if (power[i].find(",embb,") != std::string::npos) saw_embb = true;
  }
  CHECK(saw_embb);
  if (!st.active_urllc.empty()) CHECK(saw_urllc);
}
