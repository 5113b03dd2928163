#include "uavnet/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "uavnet/kernels.hpp"

namespace uavnet {

double pathloss_db(const BaseStation& bs, const User& u, const RadioParams& r) {
  const double dx = bs.position.x - u.x;
  const double dy = bs.position.y - u.y;
  const double dz = bs.position.z;
  const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
  if (!(d > 0.0))
    throw std::domain_error("pathloss_db: zero distance between station " +
                            std::to_string(bs.id) + " and user " +
                            std::to_string(u.id));
  if (bs.aerial())
    return 20.0 * std::log10(d * r.frequency_hz) - 147.55;
  return r.terrestrial_intercept_db + 37.6 * std::log10(d);
}

ChannelState compute_channel(const NetworkScenario& s) {
  const std::size_t J = s.n_bs();
  const std::size_t K = s.n_users();
  ChannelState ch;
  ch.distance_m = Matrix(J, K);
  ch.pathloss_db = Matrix(J, K);
  ch.gain = Matrix(J, K);
  for (std::size_t j = 0; j < J; ++j) {
    const BaseStation& bs = s.base_stations[j];
    for (std::size_t k = 0; k < K; ++k) {
      const User& u = s.users[k];
      const double dx = bs.position.x - u.x;
      const double dy = bs.position.y - u.y;
      const double dz = bs.position.z;
      ch.distance_m(j, k) = std::sqrt(dx * dx + dy * dy + dz * dz);
      ch.pathloss_db(j, k) = pathloss_db(bs, u, s.radio);
      ch.gain(j, k) = std::pow(10.0, -ch.pathloss_db(j, k) / 10.0);
    }
  }
  return ch;
}

Matrix interference_plus_noise(const Matrix& power, const Matrix& gain,
                               double noise_w, bool include_mbs) {
  if (!power.same_shape(gain))
    throw std::invalid_argument("interference: power/gain shape mismatch");
  const std::size_t J = power.rows();
  const std::size_t K = power.cols();

  // total[k] = sum_j p[j][k] * h[j][k]; each link then subtracts its own
  // term (and the macro term unless it participates).
  std::vector<double> total(K, 0.0);
  for (std::size_t j = 0; j < J; ++j)
    kernels::mul_accumulate(total.data(), power.row(j), gain.row(j), K);

  Matrix out(J, K);
  for (std::size_t j = 0; j < J; ++j) {
    for (std::size_t k = 0; k < K; ++k) {
      double inter = total[k] - power(j, k) * gain(j, k);
      if (!include_mbs && j != 0) inter -= power(0, k) * gain(0, k);
      if (inter < 0.0) inter = 0.0; // guard subtractive rounding
      out(j, k) = inter + noise_w;
    }
  }
  return out;
}

double sinr(const Matrix& power, const Matrix& gain, double noise_w,
            std::size_t j, std::size_t k, bool include_mbs) {
  double denom = noise_w;
  for (std::size_t jp = 0; jp < power.rows(); ++jp) {
    if (jp == j) continue;
    if (!include_mbs && jp == 0) continue;
    denom += power(jp, k) * gain(jp, k);
  }
  return power(j, k) * gain(j, k) / denom;
}

Matrix sinr_matrix(const Matrix& power, const Matrix& gain, double noise_w,
                   bool include_mbs) {
  Matrix denom = interference_plus_noise(power, gain, noise_w, include_mbs);
  Matrix out(power.rows(), power.cols());
  for (std::size_t j = 0; j < power.rows(); ++j)
    for (std::size_t k = 0; k < power.cols(); ++k)
      out(j, k) = power(j, k) * gain(j, k) / denom(j, k);
  return out;
}

Matrix bandwidth_shares(const AssociationMatrix& assoc,
                        const std::vector<double>& bs_bandwidth_hz) {
  const std::size_t J = assoc.n_bs();
  const std::size_t K = assoc.n_users();
  if (bs_bandwidth_hz.size() != J)
    throw std::invalid_argument("bandwidth_shares: bandwidth vector mismatch");
  std::vector<std::size_t> count(J, 0);
  for (std::size_t k = 0; k < K; ++k)
    if (auto j = assoc.bs_of(k)) ++count[*j];
  Matrix out(J, K);
  for (std::size_t k = 0; k < K; ++k) {
    if (auto j = assoc.bs_of(k))
      out(*j, k) = bs_bandwidth_hz[*j] / static_cast<double>(count[*j]);
  }
  return out;
}

double rate_bps(double share_hz, double sinr_value) {
  return share_hz * std::log2(1.0 + sinr_value);
}

EmbbVolume embb_data(double rate, double embb_tti_s, double urllc_tti_s,
                     int n_urllc) {
  EmbbVolume v;
  const double airtime = embb_tti_s - urllc_tti_s * static_cast<double>(n_urllc);
  if (airtime <= 0.0) {
    v.saturated = true;
    v.bits = 0.0;
    return v;
  }
  v.bits = airtime * rate;
  return v;
}

}  // namespace uavnet
