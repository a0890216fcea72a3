#include "uavsim/mimo.hpp"

#include <cmath>
#include <stdexcept>

namespace uavsim {

BeamformingDesign zf_design(const std::vector<CMatrix>& channels, int a_u) {
  if (channels.empty()) throw std::invalid_argument("zf_design: no channels");
  int total_streams = 0;
  for (const CMatrix& h : channels) {
    if (h.rows() != a_u) throw std::invalid_argument("zf_design: channel rows != A_u");
    total_streams += static_cast<int>(h.cols());
  }
  if (total_streams > a_u) {
    throw std::invalid_argument("zf_design: insufficient antennas");
  }
  CMatrix stacked(a_u, total_streams);
  int col = 0;
  for (const CMatrix& h : channels) {
    stacked.middleCols(col, h.cols()) = h;
    col += static_cast<int>(h.cols());
  }
  Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(stacked);
  if (cod.rank() < total_streams) {
    throw std::invalid_argument("zf_design: rank-deficient stacked channel");
  }
  const CMatrix pinv = cod.pseudoInverse();  // total_streams x a_u

  BeamformingDesign d;
  col = 0;
  for (const CMatrix& h : channels) {
    const int a_g = static_cast<int>(h.cols());
    d.combiners.push_back(pinv.middleRows(col, a_g));
    // Post-nulling effective channel is identity, so equal power over streams
    // meets the trace constraint with equality.
    d.precoders.push_back(CMatrix::Identity(a_g, a_g) / std::sqrt(double(a_g)));
    col += a_g;
  }
  return d;
}

double instantaneous_rate(const BeamformingDesign& design, int gn_index,
                          const std::vector<CMatrix>& channels, double p_tx,
                          double bandwidth_hz, double noise_power) {
  const CMatrix& h = channels[gn_index];
  const CMatrix& gamma = design.combiners[gn_index];
  const CMatrix& phi = design.precoders[gn_index];
  const int a_g = static_cast<int>(h.cols());

  CMatrix j = noise_power * gamma * gamma.adjoint();
  for (std::size_t k = 0; k < channels.size(); ++k) {
    if (static_cast<int>(k) == gn_index) continue;
    const CMatrix hp = channels[k] * design.precoders[k];
    j += p_tx * (gamma * hp) * (gamma * hp).adjoint();
  }
  Eigen::FullPivLU<CMatrix> lu(j);
  if (!lu.isInvertible()) {
    throw std::domain_error("instantaneous_rate: singular interference covariance");
  }
  const CMatrix gh = gamma * h;
  const CMatrix upsilon = CMatrix::Identity(a_g, a_g) +
                          p_tx * gh.adjoint() * lu.solve(gh) * phi * phi.adjoint();
  const double det = upsilon.determinant().real();
  return bandwidth_hz * std::log2(std::max(det, 1.0));
}

LinkThroughput average_throughput(const Vec3& p_uav,
                                  const std::vector<GroundNode>& co_served,
                                  int gn_index, int a_u, const Environment& env,
                                  int n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("average_throughput: n_samples >= 1");
  const GroundNode& target = co_served[gn_index];
  const LinkGeometry geo = link_geometry(p_uav, target.position);
  const double pl = p_los(geo.elevation_deg, env.z1, env.z2);

  double sum = 0.0;
  double sum_sq = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    Rng rng = make_rng(seed, /*stream=*/0x7468, static_cast<std::uint64_t>(s));
    std::vector<CMatrix> ch_los;
    std::vector<CMatrix> ch_nlos;
    for (const GroundNode& gn : co_served) {
      const LinkGeometry g = link_geometry(p_uav, gn.position);
      const double bl = pathloss(g.distance_m, LinkState::LoS, env);
      const double bn = pathloss(g.distance_m, LinkState::NLoS, env);
      ch_los.push_back(std::sqrt(bl) *
                       sample_fading(LinkState::LoS, g.elevation_deg, p_uav,
                                     gn.position, a_u, gn.antenna_count, env, rng));
      ch_nlos.push_back(std::sqrt(bn) *
                        sample_fading(LinkState::NLoS, g.elevation_deg, p_uav,
                                      gn.position, a_u, gn.antenna_count, env, rng));
    }
    const BeamformingDesign d_los = zf_design(ch_los, a_u);
    const BeamformingDesign d_nlos = zf_design(ch_nlos, a_u);
    const double r_los = instantaneous_rate(d_los, gn_index, ch_los,
                                            env.tx_power_eff, env.bandwidth_hz,
                                            env.noise_power);
    const double r_nlos = instantaneous_rate(d_nlos, gn_index, ch_nlos,
                                             env.tx_power_eff, env.bandwidth_hz,
                                             env.noise_power);
    const double r = pl * r_los + (1.0 - pl) * r_nlos;
    sum += r;
    sum_sq += r * r;
  }
  LinkThroughput out;
  out.sample_count = n_samples;
  out.mean_rate_bps = sum / n_samples;
  if (n_samples > 1) {
    const double var = std::max(
        0.0, (sum_sq - sum * sum / n_samples) / (n_samples - 1));
    out.half_width_bps = 1.96 * std::sqrt(var / n_samples);
  }
  return out;
}

double reward_value(const TrafficClass& tc, double latency_s) {
  return tc.priority *
         std::pow(tc.discount, (latency_s - tc.max_latency_s) / 60.0);
}

ServiceOutcome service_outcome(const GroundNode& gn, double mean_rate_bps,
                               double elapsed_before_service_s,
                               const RewardOptions& opts) {
  if (!(mean_rate_bps > 0.0)) {
    throw std::domain_error("service_outcome: zero rate");
  }
  ServiceOutcome o;
  o.harvest_time_s = gn.traffic.payload_bits / mean_rate_bps;
  o.completion_s = elapsed_before_service_s + o.harvest_time_s;
  const double latency = opts.literal_delta ? o.harvest_time_s : o.completion_s;
  o.reward = reward_value(gn.traffic, latency);
  return o;
}

}  // namespace uavsim
