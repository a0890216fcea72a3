#pragma once

#include <cstdint>
#include <vector>

#include "uavsim/mimo.hpp"
#include "uavsim/scenario.hpp"

namespace uavsim {

// Fading-averaged service figures for one GN at a fixed UAV position, within
// its concurrent-transmission batch.
struct GnService {
  int gn_id = 0;
  double mean_rate_bps = 0.0;
  double harvest_time_s = 0.0;
};

// Antenna-feasible concurrent batches, priority-descending; indices refer to
// the members list.
std::vector<std::vector<int>> plan_batches(const std::vector<GroundNode>& members,
                                           int a_u);

// Per-GN fading-averaged rate and harvest time at a service position, with ZF
// over each batch's co-served set.
std::vector<GnService> evaluate_services(const Vec3& p_uav,
                                         const std::vector<GroundNode>& members,
                                         int a_u, const Environment& env,
                                         int mc_samples, std::uint64_t seed);

struct ServedGn {
  int gn_id = 0;
  double start_s = 0.0;
  double completion_s = 0.0;
  double reward = 0.0;
};

struct ClusterServiceResult {
  std::vector<ServedGn> served;
  std::vector<int> skipped;     // could not finish before the horizon
  double end_time_s = 0.0;      // when the UAV is free again
  double total_reward = 0.0;
};

// Sequential batch service starting at arrival_time: each batch starts when
// the previous one finishes; GNs that cannot complete before the horizon are
// skipped without consuming airtime.
ClusterServiceResult serve_cluster(const std::vector<GroundNode>& members,
                                   const std::vector<GnService>& services,
                                   double arrival_time_s, double horizon_s,
                                   int a_u, const RewardOptions& opts);

// Sum of member rewards when service starts at t = 0; the fine-search and
// baseline objective.
double cluster_reward(const Vec3& p_uav, const std::vector<GroundNode>& members,
                      int a_u, const Environment& env, int mc_samples,
                      std::uint64_t seed, double horizon_s,
                      const RewardOptions& opts = RewardOptions{});

}  // namespace uavsim
