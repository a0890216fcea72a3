#pragma once

#include <vector>

#include "uavsim/channel.hpp"
#include "uavsim/scenario.hpp"

namespace uavsim {

struct BeamformingDesign {
  // Per co-served GN: precoder (A_g x A_g, trace(Phi Phi^H) = 1) and
  // receive combiner (A_g x A_u).
  std::vector<CMatrix> precoders;
  std::vector<CMatrix> combiners;
};

struct LinkThroughput {
  double mean_rate_bps = 0.0;
  int sample_count = 0;
  double half_width_bps = 0.0;  // 95% confidence half-width
};

struct ServiceOutcome {
  double harvest_time_s = 0.0;  // nu / mean rate
  double reward = 0.0;          // Omega
  double completion_s = 0.0;    // from mission start
};

struct RewardOptions {
  // Default: the discount latency counts elapsed mission time plus the
  // transmission time. Literal mode discounts on transmission time alone.
  bool literal_delta = false;
};

// Receiver-side interference nulling: combiners are rows of the pseudo-inverse
// of the stacked co-served channel; precoders spread power equally over
// streams. Requires A_u >= sum of co-served A_g.
BeamformingDesign zf_design(const std::vector<CMatrix>& channels, int a_u);

// MIMO capacity of one link under a given design, with co-channel matrices of
// the other concurrently served GNs entering the interference covariance.
double instantaneous_rate(const BeamformingDesign& design, int gn_index,
                          const std::vector<CMatrix>& channels, double p_tx,
                          double bandwidth_hz, double noise_power);

// Fading-averaged throughput of one GN at a UAV position, Monte-Carlo over
// draws of the LoS/NLoS probability mixture, ZF redesigned per draw.
LinkThroughput average_throughput(const Vec3& p_uav,
                                  const std::vector<GroundNode>& co_served,
                                  int gn_index, int a_u, const Environment& env,
                                  int n_samples, std::uint64_t seed);

ServiceOutcome service_outcome(const GroundNode& gn, double mean_rate_bps,
                               double elapsed_before_service_s,
                               const RewardOptions& opts = RewardOptions{});

// Reward discount: chi * gamma^((latency - delta_max) in minutes).
double reward_value(const TrafficClass& tc, double latency_s);

}  // namespace uavsim
