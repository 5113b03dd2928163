#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <stdexcept>
#include <string>

#include "uavnet/scenario.hpp"

using namespace uavnet;

TEST_CASE("default generation matches the documented layout") {
  const NetworkScenario s = generate_scenario(GenerationParams{}, 1);

  REQUIRE(s.n_bs() == 16);  // 1 MBS + 10 SBS + 5 UBS
  REQUIRE(s.n_users() == 49);  // 1 mMTC + 40 eMBB + 8 URLLC

  CHECK(s.base_stations[0].kind == BsKind::mbs);
  CHECK(s.base_stations[0].id == 0);
  CHECK(s.base_stations[0].position.x == 2000.0);
  CHECK(s.base_stations[0].position.y == 2000.0);
  CHECK(s.base_stations[0].position.z == 0.0);
  CHECK(s.base_stations[0].power_budget_w == 40.0);
  CHECK(s.base_stations[0].bandwidth_hz == 50.0e6);

  for (std::size_t j = 1; j <= 10; ++j) {
    CHECK(s.base_stations[j].kind == BsKind::sbs);
    CHECK(s.base_stations[j].position.z == 0.0);
    CHECK(s.base_stations[j].power_budget_w == 1.0);
  }
  for (std::size_t j = 11; j <= 15; ++j) {
    CHECK(s.base_stations[j].kind == BsKind::ubs);
    CHECK(s.base_stations[j].position.z == 200.0);
    CHECK(s.base_stations[j].power_budget_w == 0.5);
  }

  CHECK(s.users[0].kind == UserKind::mmtc);
  CHECK(s.users[0].id == 0);
  CHECK(s.users[0].embb_class());
  CHECK(s.uav_indices() == std::vector<std::size_t>({11, 12, 13, 14, 15}));
  CHECK(s.urllc_user_indices().size() == 8);
  CHECK(s.embb_class_user_indices().size() == 41);

  CHECK(validate(s).empty());
}

TEST_CASE("generation is seed-deterministic") {
  const NetworkScenario a = generate_scenario(GenerationParams{}, 7);
  const NetworkScenario b = generate_scenario(GenerationParams{}, 7);
  const NetworkScenario c = generate_scenario(GenerationParams{}, 8);
  CHECK(serialize_scenario(a) == serialize_scenario(b));
  CHECK(serialize_scenario(a) != serialize_scenario(c));
}

TEST_CASE("serialize/parse round trip is byte-exact") {
  const NetworkScenario s = generate_scenario(GenerationParams{}, 3);
  const std::string text = serialize_scenario(s);
  const NetworkScenario parsed = parse_scenario(text);
  CHECK(serialize_scenario(parsed) == text);
  CHECK(parsed.n_bs() == s.n_bs());
  CHECK(parsed.n_users() == s.n_users());
  CHECK(parsed.seed == s.seed);
}

TEST_CASE("validate flags structural problems") {
  NetworkScenario s = generate_scenario(GenerationParams{}, 1);

  SUBCASE("duplicate station id") {
    s.base_stations[2].id = s.base_stations[1].id;
    bool found = false;
    for (const Violation& v : validate(s)) found |= v.code == "duplicate_bs_id";
    CHECK(found);
  }
  SUBCASE("aerial station on the ground") {
    s.base_stations[11].position.z = 0.0;
    bool found = false;
    for (const Violation& v : validate(s)) found |= v.code == "ubs_altitude";
    CHECK(found);
  }
  SUBCASE("negative budget") {
    s.base_stations[1].power_budget_w = -1.0;
    bool found = false;
    for (const Violation& v : validate(s)) found |= v.code == "negative_power";
    CHECK(found);
  }
  SUBCASE("second mMTC user") {
    s.users[5].kind = UserKind::mmtc;
    bool found = false;
    for (const Violation& v : validate(s))
      found |= v.code == "mmtc_count" || v.code == "mmtc_id";
    CHECK(found);
  }
  SUBCASE("user outside the area") {
    s.users[3].x = s.area_side_m + 1.0;
    bool found = false;
    for (const Violation& v : validate(s))
      found |= v.code == "position_out_of_area";
    CHECK(found);
  }
}

TEST_CASE("generation config parses and converts units") {
  const ScenarioConfig cfg = parse_generation_config(
      "n_sbs = 3\n"
      "n_ubs = 2\n"
      "n_embb = 10\n"
      "n_urllc = 4\n"
      "noise_dbm = -97.5\n"
      "zeta_db = 0\n"
      "seed = 7\n");
  CHECK(cfg.params.n_sbs == 3);
  CHECK(cfg.params.n_ubs == 2);
  CHECK(cfg.params.n_embb == 10);
  CHECK(cfg.params.n_urllc == 4);
  CHECK(cfg.params.radio.noise_w == doctest::Approx(1.778279410038923e-13).epsilon(1e-12));
  CHECK(cfg.params.radio.urllc_sinr_threshold == 1.0);
  CHECK(cfg.seed == 7);

  // omitted keys keep defaults
  CHECK(cfg.params.area_side_m == 4000.0);
  CHECK(cfg.params.energy.premium_w == 0.05);

  CHECK_THROWS_AS(parse_generation_config("not_a_key = 1\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_generation_config("n_sbs ="), std::invalid_argument);
  CHECK_THROWS_AS(parse_generation_config("n_sbs = banana\n"),
                  std::invalid_argument);
}

TEST_CASE("unit conversions") {
  CHECK(dbm_to_watts(-97.5) == doctest::Approx(1.778279410038923e-13).epsilon(1e-15));
  CHECK(dbm_to_watts(0.0) == doctest::Approx(1e-3).epsilon(1e-15));
  CHECK(db_to_linear(0.0) == 1.0);
  CHECK(db_to_linear(3.0) == doctest::Approx(1.9952623149688795).epsilon(1e-15));
  CHECK(db_to_linear(10.0) == doctest::Approx(10.0).epsilon(1e-15));
}
