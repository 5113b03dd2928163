#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "uavnet/allocation.hpp"
#include "uavnet/rng.hpp"

using namespace uavnet;

TEST_CASE("fading scale is one when fading is off") {
  CHECK(fading_quantile_scale(FadingModel::none, 0.01) == 1.0);
  CHECK(fading_quantile_scale(FadingModel::none, 0.5) == 1.0);
}

TEST_CASE("rayleigh scale inverts the outage quantile") {
  const double eps = 0.01;
  CHECK(fading_quantile_scale(FadingModel::rayleigh, eps) ==
        doctest::Approx(1.0 / -std::log1p(-eps)).epsilon(1e-15));
  // tighter outage budgets need more headroom
  CHECK(fading_quantile_scale(FadingModel::rayleigh, 0.001) >
        fading_quantile_scale(FadingModel::rayleigh, 0.01));
}

TEST_CASE("urllc power holds the re-evaluated sinr at the threshold") {
  const double h = 1e-9;
  const double denom = 2e-13;
  const double zeta = 1.0;
  const double p = urllc_power(h, denom, zeta, 0.01, UrllcPowerRule::standard,
                               FadingModel::none, 1.0);
  CHECK(p == doctest::Approx(2e-4).epsilon(1e-15));
  CHECK(p * h / denom == doctest::Approx(zeta).epsilon(1e-12));

  Rng rng(7);
  for (int rep = 0; rep < 1000; ++rep) {
    const double gain = std::pow(10.0, rng.uniform(-13.0, -6.0));
    const double d = std::pow(10.0, rng.uniform(-14.0, -9.0));
    const double z = rng.uniform(0.5, 4.0);
    const double power = urllc_power(gain, d, z, 0.01, UrllcPowerRule::standard,
                                     FadingModel::none, 1e9);
    CHECK(power * gain / d == doctest::Approx(z).epsilon(1e-9));
  }
}

TEST_CASE("the literal power formula carries the unit constant") {
  const double h = 0.5;
  const double denom = 3.0;
  const double p = urllc_power(h, denom, 2.0, 0.01, UrllcPowerRule::as_written,
                               FadingModel::none, 100.0);
  CHECK(p == doctest::Approx(2.0 * (1.0 + 3.0) / 0.5).epsilon(1e-15));
}

TEST_CASE("urllc infeasibility is surfaced, never clamped") {
  CHECK_THROWS_AS(urllc_power(0.0, 1e-13, 1.0, 0.01, UrllcPowerRule::standard,
                              FadingModel::none, 1.0),
                  UrllcInfeasible);
  try {
    urllc_power(0.0, 1e-13, 1.0, 0.01, UrllcPowerRule::standard,
                FadingModel::none, 1.0);
  } catch (const UrllcInfeasible& e) {
    CHECK(e.reason == UrllcInfeasible::Reason::dead_link);
  }
  try {
    urllc_power(1e-12, 1e-3, 1.0, 0.01, UrllcPowerRule::standard,
                FadingModel::none, 0.04);
  } catch (const UrllcInfeasible& e) {
    CHECK(e.reason == UrllcInfeasible::Reason::power_limit);
    CHECK(e.required_w == doctest::Approx(1e9).epsilon(1e-12));
  }
}

TEST_CASE("effective gain variants") {
  const double h = 1e-8;
  const double interf = 3e-13;
  const double noise = 1e-13;
  CHECK(effective_gain(h, interf, noise, 1e7, EffectiveGainRule::sinr_consistent) ==
        doctest::Approx(h / (interf + noise)).epsilon(1e-15));
  CHECK(effective_gain(h, interf, noise, 1e7, EffectiveGainRule::as_written) ==
        doctest::Approx(h / (1.0 + interf + 1e7 * noise)).epsilon(1e-15));
}

TEST_CASE("waterfill splits a slack-free budget by channel quality") {
  const WaterfillResult r = waterfill({1.0, 1.0}, {1.0, 1.0}, 2.0, 10.0);
  REQUIRE(r.power_w.size() == 2);
  CHECK(r.power_w[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.power_w[1] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.water_level == doctest::Approx(0.5).epsilon(1e-9));
  CHECK_FALSE(r.budget_slack);
}

TEST_CASE("waterfill respects the per-user cap") {
  const WaterfillResult r = waterfill({10.0, 0.1}, {1.0, 1.0}, 3.0, 2.0);
  CHECK(r.power_w[0] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(r.power_w[1] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.water_level == doctest::Approx(1.0 / 11.0).epsilon(1e-8));
}

TEST_CASE("waterfill shuts off hopeless channels under scarcity") {
  const WaterfillResult r = waterfill({1.0, 1e-6}, {1.0, 1.0}, 0.5, 10.0);
  CHECK(r.power_w[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(r.power_w[1] == 0.0);
  CHECK(r.water_level == doctest::Approx(2.0 / 3.0).epsilon(1e-8));
}

TEST_CASE("waterfill edge cases") {
  SUBCASE("zero budget") {
    const WaterfillResult r = waterfill({1.0, 2.0}, {1.0, 1.0}, 0.0, 1.0);
    CHECK(r.power_w == std::vector<double>({0.0, 0.0}));
  }
  SUBCASE("slack budget caps everyone") {
    const WaterfillResult r = waterfill({1.0, 2.0}, {1.0, 1.0}, 10.0, 0.5);
    CHECK(r.power_w == std::vector<double>({0.5, 0.5}));
    CHECK(r.budget_slack);
    CHECK(r.water_level == 0.0);
  }
  SUBCASE("dead links get nothing") {
    const WaterfillResult r = waterfill({0.0, 1.0}, {1.0, 1.0}, 1.0, 10.0);
    CHECK(r.power_w[0] == 0.0);
    CHECK(r.power_w[1] == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("no users") {
    const WaterfillResult r = waterfill({}, {}, 1.0, 1.0);
    CHECK(r.power_w.empty());
    CHECK(r.budget_slack);
  }
}

TEST_CASE("binding budgets are met to high relative accuracy") {
  Rng rng(37);
  for (int rep = 0; rep < 500; ++rep) {
    const std::size_t n = 1 + rng.index(32);
    std::vector<double> theta(n), omega(n);
    for (std::size_t i = 0; i < n; ++i) {
      theta[i] = std::pow(10.0, rng.uniform(-3.0, 3.0));
      omega[i] = rng.uniform(0.1, 10.0);
    }
    const double pmax = rng.uniform(0.01, 1.0);
    // keep the budget strictly below the all-capped spend so it binds
    const double budget = rng.uniform(0.1, 0.9) * pmax * static_cast<double>(n);
    const WaterfillResult r = waterfill(theta, omega, budget, pmax);
    const double sum = std::accumulate(r.power_w.begin(), r.power_w.end(), 0.0);
    CHECK(sum == doctest::Approx(budget).epsilon(1e-9));
  }
}

TEST_CASE("fuzzed instances pass the certificate") {
  Rng rng(43);
  double worst = 0.0;
  for (int rep = 0; rep < 300; ++rep) {
    const std::size_t n = 1 + rng.index(32);
    std::vector<double> theta(n), omega(n);
    for (std::size_t i = 0; i < n; ++i) {
      theta[i] = std::pow(10.0, rng.uniform(-3.0, 3.0));
      omega[i] = rng.uniform(0.1, 10.0);
    }
    const double pmax = rng.uniform(0.01, 2.0);
    const double budget = rng.uniform(0.0, 1.2) * pmax * static_cast<double>(n);
    const WaterfillResult r = waterfill(theta, omega, budget, pmax);
    const KktCertificate cert = kkt_check(r.power_w, theta, omega, budget, pmax);
    worst = std::max(worst, cert.max_residual());
    CHECK(cert.max_residual() <= 1e-6);
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("the certificate rejects tampered solutions") {
  const std::vector<double> theta = {2.0, 1.5, 1.2, 1.0};
  const std::vector<double> omega(4, 1.0);
  const double budget = 4.0;
  const double pmax = 10.0;
  WaterfillResult r = waterfill(theta, omega, budget, pmax);
  REQUIRE(kkt_check(r.power_w, theta, omega, budget, pmax).max_residual() <= 1e-6);

  // shift power between two interior users, keeping the budget exact
  r.power_w[0] += 0.2;
  r.power_w[3] -= 0.2;
  CHECK(kkt_check(r.power_w, theta, omega, budget, pmax).max_residual() > 1e-3);
}

TEST_CASE("waterfill is permutation equivariant") {
  Rng rng(53);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 2 + rng.index(12);
    std::vector<double> theta(n), omega(n);
    for (std::size_t i = 0; i < n; ++i) {
      theta[i] = std::pow(10.0, rng.uniform(-2.0, 2.0));
      omega[i] = rng.uniform(0.5, 2.0);
    }
    const double pmax = rng.uniform(0.05, 1.0);
    const double budget = rng.uniform(0.2, 1.1) * pmax * static_cast<double>(n);

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = n; i-- > 1;) std::swap(perm[i], perm[rng.index(i + 1)]);

    std::vector<double> ptheta(n), pomega(n);
    for (std::size_t i = 0; i < n; ++i) {
      ptheta[i] = theta[perm[i]];
      pomega[i] = omega[perm[i]];
    }
    const WaterfillResult a = waterfill(theta, omega, budget, pmax);
    const WaterfillResult b = waterfill(ptheta, pomega, budget, pmax);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(b.power_w[i] ==
            doctest::Approx(a.power_w[perm[i]]).epsilon(1e-9).scale(pmax));
  }
}

TEST_CASE("total allocated power is nondecreasing in the budget") {
  const std::vector<double> theta = {3.0, 1.0, 0.3, 0.05};
  const std::vector<double> omega = {1.0, 1.0, 1.0, 1.0};
  double prev = -1.0;
  for (double budget = 0.0; budget <= 1.0; budget += 0.05) {
    const WaterfillResult r = waterfill(theta, omega, budget, 0.2);
    const double sum = std::accumulate(r.power_w.begin(), r.power_w.end(), 0.0);
    CHECK(sum >= prev - 1e-12);
    prev = sum;
  }
}

TEST_CASE("allocate_embb runs one waterfill per station") {
  AssociationMatrix assoc(2, 4);
  assoc.assign(0, 0);
  assoc.assign(1, 0);
  assoc.assign(2, 1);
  assoc.assign(3, 1);
  Matrix theta(2, 4, 0.0);
  theta(0, 0) = 1.0;
  theta(0, 1) = 1.0;
  theta(1, 2) = 10.0;
  theta(1, 3) = 0.1;
  const std::vector<double> share = {1.0, 1.0};
  const std::vector<double> residual = {2.0, 3.0};

  const EmbbAllocation a = allocate_embb(assoc, theta, share, residual, 10.0);
  CHECK(a.power_w(0, 0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(a.power_w(0, 1) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(a.power_w(1, 2) > a.power_w(1, 3));
  CHECK(a.power_w(0, 2) == 0.0);  // unassigned pairs get nothing
  const double row1 = a.power_w(1, 2) + a.power_w(1, 3);
  CHECK(row1 == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(a.water_level[0] == doctest::Approx(0.5).epsilon(1e-9));

  CHECK_THROWS_AS(allocate_embb(assoc, theta, share, {-0.1, 3.0}, 10.0),
                  std::domain_error);
}
