#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "uavnet/matrix.hpp"

namespace uavnet {

/// Binary user-to-BS assignment. Stored as one BS index per user so that the
/// at-most-one-station invariant holds by construction; columns left
/// unassigned represent users no station admitted (or users not present).
class AssociationMatrix {
public:
  AssociationMatrix() = default;
  AssociationMatrix(std::size_t n_bs, std::size_t n_users)
      : n_bs_(n_bs), bs_of_(n_users) {}

  std::size_t n_bs() const { return n_bs_; }
  std::size_t n_users() const { return bs_of_.size(); }

  void assign(std::size_t user, std::size_t bs) {
    bs_of_.at(user) = bs;
  }
  void clear(std::size_t user) { bs_of_.at(user).reset(); }

  std::optional<std::size_t> bs_of(std::size_t user) const {
    return bs_of_.at(user);
  }
  bool x(std::size_t bs, std::size_t user) const {
    return bs_of_.at(user) == bs;
  }

  std::size_t count_on(std::size_t bs) const {
    std::size_t n = 0;
    for (const auto& b : bs_of_)
      if (b == bs) ++n;
    return n;
  }
  std::vector<std::size_t> users_on(std::size_t bs) const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < bs_of_.size(); ++k)
      if (bs_of_[k] == bs) out.push_back(k);
    return out;
  }

  bool operator==(const AssociationMatrix& o) const {
    return n_bs_ == o.n_bs_ && bs_of_ == o.bs_of_;
  }

private:
  std::size_t n_bs_ = 0;
  std::vector<std::optional<std::size_t>> bs_of_;
};

struct AssociationResult {
  AssociationMatrix assoc;
  /// Users every candidate station turned away for lack of budget.
  std::vector<std::size_t> unassociated;
  /// Score actually used for the shortlist (survival-weighted SINR).
  Matrix eta;
};

/// Survival-weighted association. Each listed user shortlists the station
/// maximizing eta = alpha * (1 - psi) * gamma, then every station admits its
/// shortlisted users in descending gamma while the candidate power fits the
/// remaining budget; users turned away are re-offered to their next-best
/// station until admitted or out of options. Ties break toward the lower BS
/// index (shortlist) and lower user index (admission). psi must be 0 for
/// terrestrial stations.
AssociationResult associate_ruin(const Matrix& gamma,
                                 const std::vector<double>& psi,
                                 const Matrix& candidate_power,
                                 const std::vector<double>& budgets,
                                 double alpha,
                                 const std::vector<std::size_t>& users);

/// Same procedure with the survival factor forced to 1 (psi = 0 everywhere):
/// the max-SINR baseline.
AssociationResult associate_sinr(const Matrix& gamma,
                                 const Matrix& candidate_power,
                                 const std::vector<double>& budgets,
                                 const std::vector<std::size_t>& users);

/// URLLC attachment: plain argmax-SINR per listed user, no admission gate
/// (power feasibility is enforced later, at allocation). Returns the chosen
/// BS per listed user, aligned with `users`.
std::vector<std::size_t> associate_urllc(const Matrix& gamma,
                                         const std::vector<std::size_t>& users);

}  // namespace uavnet
