#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "uavnet/association.hpp"
#include "uavnet/rng.hpp"

using namespace uavnet;

namespace {

std::vector<std::size_t> all_users(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

}  // namespace

TEST_CASE("survival weighting can override raw link quality") {
  Matrix gamma(2, 1);
  gamma(0, 0) = 10.0;
  gamma(1, 0) = 8.0;
  Matrix candidate(2, 1, 0.1);
  const std::vector<double> budgets = {1.0, 1.0};

  const AssociationResult risky =
      associate_ruin(gamma, {0.5, 0.0}, candidate, budgets, 1.0, all_users(1));
  CHECK(risky.assoc.bs_of(0) == std::size_t{1});  // eta 5 vs 8

  const AssociationResult baseline =
      associate_sinr(gamma, candidate, budgets, all_users(1));
  CHECK(baseline.assoc.bs_of(0) == std::size_t{0});  // gamma 10 vs 8
}

TEST_CASE("equal scores go to the lower station index") {
  Matrix gamma(3, 1, 4.0);
  Matrix candidate(3, 1, 0.1);
  const std::vector<double> budgets = {1.0, 1.0, 1.0};
  const AssociationResult r = associate_sinr(gamma, candidate, budgets, all_users(1));
  CHECK(r.assoc.bs_of(0) == std::size_t{0});
}

TEST_CASE("admission is by descending link quality under the budget") {
  // Both users want station 0 but only one candidate slice fits; the weaker
  // link is re-offered to station 1.
  Matrix gamma(2, 2);
  gamma(0, 0) = 3.0;
  gamma(0, 1) = 5.0;
  gamma(1, 0) = 1.0;
  gamma(1, 1) = 1.0;
  Matrix candidate(2, 2, 0.6);
  const std::vector<double> budgets = {1.0, 10.0};

  const AssociationResult r = associate_sinr(gamma, candidate, budgets, all_users(2));
  CHECK(r.assoc.bs_of(1) == std::size_t{0});  // stronger link admitted first
  CHECK(r.assoc.bs_of(0) == std::size_t{1});  // re-offered and admitted
  CHECK(r.unassociated.empty());
}

TEST_CASE("admission ties break toward the lower user index") {
  Matrix gamma(2, 2, 2.0);  // identical links
  Matrix candidate(2, 2, 0.6);
  const std::vector<double> budgets = {1.0, 10.0};
  const AssociationResult r = associate_sinr(gamma, candidate, budgets, all_users(2));
  CHECK(r.assoc.bs_of(0) == std::size_t{0});
  CHECK(r.assoc.bs_of(1) == std::size_t{1});
}

TEST_CASE("users out of options are reported unassociated") {
  Matrix gamma(1, 2, 2.0);
  Matrix candidate(1, 2, 0.6);
  const std::vector<double> budgets = {1.0};
  const AssociationResult r = associate_sinr(gamma, candidate, budgets, all_users(2));
  CHECK(r.assoc.bs_of(0) == std::size_t{0});
  CHECK_FALSE(r.assoc.bs_of(1).has_value());
  REQUIRE(r.unassociated.size() == 1);
  CHECK(r.unassociated[0] == 1);
}

TEST_CASE("only listed users are touched") {
  Matrix gamma(2, 3, 1.0);
  Matrix candidate(2, 3, 0.1);
  const std::vector<double> budgets = {1.0, 1.0};
  const AssociationResult r =
      associate_sinr(gamma, candidate, budgets, {0, 2});
  CHECK(r.assoc.bs_of(0).has_value());
  CHECK_FALSE(r.assoc.bs_of(1).has_value());
  CHECK(r.assoc.bs_of(2).has_value());
}

TEST_CASE("the association weight does not change the outcome") {
  Rng rng(13);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n_bs = 1 + rng.index(4);
    const std::size_t n_users = 1 + rng.index(10);
    Matrix gamma(n_bs, n_users);
    Matrix candidate(n_bs, n_users);
    std::vector<double> psi(n_bs, 0.0);
    std::vector<double> budgets(n_bs);
    for (std::size_t j = 0; j < n_bs; ++j) {
      psi[j] = j == 0 ? 0.0 : rng.uniform(0.0, 1.0);
      budgets[j] = rng.uniform(0.2, 2.0);
      for (std::size_t k = 0; k < n_users; ++k) {
        gamma(j, k) = rng.uniform(0.0, 50.0);
        candidate(j, k) = rng.uniform(0.01, 0.4);
      }
    }
    const AssociationResult a =
        associate_ruin(gamma, psi, candidate, budgets, 1.0, all_users(n_users));
    const AssociationResult b =
        associate_ruin(gamma, psi, candidate, budgets, 3.7, all_users(n_users));
    CHECK(a.assoc == b.assoc);
  }
}

TEST_CASE("zero ruin probability reduces the scheme to the baseline") {
  Rng rng(19);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n_bs = 1 + rng.index(4);
    const std::size_t n_users = 1 + rng.index(10);
    Matrix gamma(n_bs, n_users);
    Matrix candidate(n_bs, n_users);
    std::vector<double> budgets(n_bs);
    for (std::size_t j = 0; j < n_bs; ++j) {
      budgets[j] = rng.uniform(0.2, 2.0);
      for (std::size_t k = 0; k < n_users; ++k) {
        gamma(j, k) = rng.uniform(0.0, 50.0);
        candidate(j, k) = rng.uniform(0.01, 0.4);
      }
    }
    const std::vector<double> psi(n_bs, 0.0);
    const AssociationResult a =
        associate_ruin(gamma, psi, candidate, budgets, 1.0, all_users(n_users));
    const AssociationResult b =
        associate_sinr(gamma, candidate, budgets, all_users(n_users));
    CHECK(a.assoc == b.assoc);
  }
}

TEST_CASE("admitted candidates never exceed any budget") {
  Rng rng(29);
  for (int rep = 0; rep < 300; ++rep) {
    const std::size_t n_bs = 1 + rng.index(5);
    const std::size_t n_users = 1 + rng.index(14);
    Matrix gamma(n_bs, n_users);
    Matrix candidate(n_bs, n_users);
    std::vector<double> psi(n_bs, 0.0);
    std::vector<double> budgets(n_bs);
    for (std::size_t j = 0; j < n_bs; ++j) {
      if (j > 0) psi[j] = rng.uniform(0.0, 1.0);
      budgets[j] = rng.uniform(0.1, 1.5);
      for (std::size_t k = 0; k < n_users; ++k) {
        gamma(j, k) = rng.uniform(0.0, 50.0);
        candidate(j, k) = rng.uniform(0.05, 0.5);
      }
    }
    const AssociationResult r =
        associate_ruin(gamma, psi, candidate, budgets, 1.0, all_users(n_users));

    // each user sits on at most one station, and spend fits the budget
    std::vector<double> spend(n_bs, 0.0);
    std::size_t assigned = 0;
    for (std::size_t k = 0; k < n_users; ++k)
      if (const auto j = r.assoc.bs_of(k)) {
        spend[*j] += candidate(*j, k);
        ++assigned;
      }
    for (std::size_t j = 0; j < n_bs; ++j) CHECK(spend[j] <= budgets[j] + 1e-12);
    CHECK(assigned + r.unassociated.size() == n_users);
  }
}

TEST_CASE("urllc attachment is plain argmax with stable ties") {
  Matrix gamma(3, 4);
  for (std::size_t j = 0; j < 3; ++j)
    for (std::size_t k = 0; k < 4; ++k) gamma(j, k) = 0.0;
  gamma(1, 0) = 5.0;
  gamma(2, 1) = 5.0;
  gamma(1, 1) = 5.0;  // tie with station 2: lower index wins
  gamma(0, 3) = 0.5;

  const std::vector<std::size_t> users = {0, 1, 3};
  const std::vector<std::size_t> picks = associate_urllc(gamma, users);
  REQUIRE(picks.size() == 3);
  CHECK(picks[0] == 1);
  CHECK(picks[1] == 1);
  CHECK(picks[2] == 0);
}
