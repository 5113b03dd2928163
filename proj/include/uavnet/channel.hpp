#pragma once

#include <vector>

#include "uavnet/association.hpp"
#include "uavnet/matrix.hpp"
#include "uavnet/scenario.hpp"

namespace uavnet {

/// Distance-dependent link state; static for a scenario since positions do
/// not move within an experiment.
struct ChannelState {
  Matrix distance_m;    // 3-D distance, BS x user
  Matrix pathloss_db;
  Matrix gain;          // linear 10^(-pathloss/10)
};

/// Air-to-ground links use free-space loss 20*log10(d*f) - 147.55 (d in
/// meters, f in Hz); terrestrial links use intercept + 37.6*log10(d).
/// Zero distance is a domain error.
double pathloss_db(const BaseStation& bs, const User& u, const RadioParams& r);

ChannelState compute_channel(const NetworkScenario& s);

/// SINR of the (j, k) link under the given power matrix. Interference sums
/// power other stations direct at the same user; the macro row (index 0)
/// is excluded from that sum unless include_mbs is set.
double sinr(const Matrix& power, const Matrix& gain, double noise_w,
            std::size_t j, std::size_t k, bool include_mbs);

/// SINR of every link; same semantics as sinr().
Matrix sinr_matrix(const Matrix& power, const Matrix& gain, double noise_w,
                   bool include_mbs);

/// Per-user interference-plus-noise (the SINR denominator) for each link.
Matrix interference_plus_noise(const Matrix& power, const Matrix& gain,
                               double noise_w, bool include_mbs);

/// Equal split of each station's bandwidth over the users the given matrix
/// associates to it: share[j][k] = W_j / |users on j| if x[j][k], else 0.
Matrix bandwidth_shares(const AssociationMatrix& assoc,
                        const std::vector<double>& bs_bandwidth_hz);

/// Shannon rate in bit/s over the allotted share.
double rate_bps(double share_hz, double sinr_value);

struct EmbbVolume {
  double bits = 0.0;
  bool saturated = false; // URLLC mini-slots consumed the whole frame
};

/// Frame-level eMBB data volume after URLLC preemption: the frame of length
/// embb_tti_s loses urllc_tti_s per scheduled URLLC arrival.
EmbbVolume embb_data(double rate_bps, double embb_tti_s, double urllc_tti_s,
                     int n_urllc);

}  // namespace uavnet
