#pragma once

#include <cstdint>

#include "uavnet/engine.hpp"

namespace uavnet {

struct OracleResult {
  AssociationMatrix assoc; // enumerated eMBB assignment plus URLLC pins
  Matrix power_w;
  double objective = 0.0;
  // Largest KKT residual across every inner waterfill certified during the
  // search; the certificate substitutes for an independent convex solver.
  double kkt_max_residual = 0.0;
  std::uint64_t n_enumerated = 0;
};

/// Exhaustive exact solver for small instances: URLLC users are pinned and
/// powered exactly as the orchestrator pins them, then every full eMBB
/// assignment (each user on exactly one station) is enumerated, solved by
/// per-BS waterfill, and scored with the shared objective. Ties go to the
/// lexicographically smallest assignment. Instances beyond 3 stations or 8
/// users are refused.
OracleResult solve_exact(const NetworkScenario& s, const TtiState& state,
                         const RunConfig& cfg);

}  // namespace uavnet
