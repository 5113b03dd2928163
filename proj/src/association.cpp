#include "uavnet/association.hpp"

#include <algorithm>
#include <stdexcept>

namespace uavnet {

namespace {

struct PendingUser {
  std::size_t user;
  std::size_t next_choice; // position in its preference order
};

}  // namespace

AssociationResult associate_ruin(const Matrix& gamma,
                                 const std::vector<double>& psi,
                                 const Matrix& candidate_power,
                                 const std::vector<double>& budgets,
                                 double alpha,
                                 const std::vector<std::size_t>& users) {
  const std::size_t J = gamma.rows();
  const std::size_t K = gamma.cols();
  if (psi.size() != J || budgets.size() != J)
    throw std::invalid_argument("associate_ruin: per-BS vector size mismatch");
  if (!candidate_power.same_shape(gamma))
    throw std::invalid_argument("associate_ruin: candidate power shape mismatch");
  if (!(alpha > 0.0))
    throw std::invalid_argument("associate_ruin: alpha must be > 0");

  AssociationResult res;
  res.assoc = AssociationMatrix(J, K);
  res.eta = Matrix(J, K);

  for (std::size_t j = 0; j < J; ++j) {
    const double w = alpha * (1.0 - psi[j]);
    for (std::size_t k = 0; k < K; ++k) res.eta(j, k) = w * gamma(j, k);
  }

  // Preference order per user: descending eta, ties toward the lower BS id.
  std::vector<std::vector<std::size_t>> prefs(K);
  for (std::size_t k : users) {
    std::vector<std::size_t> order(J);
    for (std::size_t j = 0; j < J; ++j) order[j] = j;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return res.eta(a, k) > res.eta(b, k);
                     });
    prefs[k] = std::move(order);
  }

  std::vector<double> residual = budgets;
  std::vector<PendingUser> pending;
  pending.reserve(users.size());
  for (std::size_t k : users) pending.push_back({k, 0});

  // Offer rounds: every pending user nominates its best untried station whose
  // residual budget still covers its candidate power; each station admits its
  // nominees in descending gamma while the budget lasts. Budgets only shrink,
  // so a rejected (station, user) pair can never become feasible again and is
  // simply skipped in later rounds.
  while (!pending.empty()) {
    std::vector<std::vector<std::size_t>> nominees(J);
    std::vector<PendingUser> offered;
    for (PendingUser& pu : pending) {
      bool nominated = false;
      while (pu.next_choice < J) {
        std::size_t j = prefs[pu.user][pu.next_choice];
        ++pu.next_choice;
        if (candidate_power(j, pu.user) <= residual[j]) {
          nominees[j].push_back(pu.user);
          nominated = true;
          break;
        }
      }
      if (!nominated) res.unassociated.push_back(pu.user);
      else offered.push_back(pu);
    }

    std::vector<PendingUser> next_round;
    for (std::size_t j = 0; j < J; ++j) {
      std::vector<std::size_t>& cand = nominees[j];
      std::stable_sort(cand.begin(), cand.end(),
                       [&](std::size_t a, std::size_t b) {
                         return gamma(j, a) > gamma(j, b);
                       });
      for (std::size_t k : cand) {
        if (candidate_power(j, k) <= residual[j]) {
          residual[j] -= candidate_power(j, k);
          res.assoc.assign(k, j);
        } else {
          for (const PendingUser& pu : offered)
            if (pu.user == k) next_round.push_back(pu);
        }
      }
    }
    pending = std::move(next_round);
  }

  std::sort(res.unassociated.begin(), res.unassociated.end());
  return res;
}

AssociationResult associate_sinr(const Matrix& gamma,
                                 const Matrix& candidate_power,
                                 const std::vector<double>& budgets,
                                 const std::vector<std::size_t>& users) {
  std::vector<double> zero_psi(gamma.rows(), 0.0);
  return associate_ruin(gamma, zero_psi, candidate_power, budgets, 1.0, users);
}

std::vector<std::size_t> associate_urllc(const Matrix& gamma,
                                         const std::vector<std::size_t>& users) {
  std::vector<std::size_t> out;
  out.reserve(users.size());
  for (std::size_t k : users) {
    std::size_t best = 0;
    double best_gamma = gamma(0, k);
    for (std::size_t j = 1; j < gamma.rows(); ++j) {
      if (gamma(j, k) > best_gamma) {
        best_gamma = gamma(j, k);
        best = j;
      }
    }
    out.push_back(best);
  }
  return out;
}

}  // namespace uavnet
