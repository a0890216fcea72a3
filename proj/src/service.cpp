#include "uavsim/service.hpp"

#include <algorithm>
#include <numeric>

#include "uavsim/rng.hpp"

namespace uavsim {

std::vector<std::vector<int>> plan_batches(const std::vector<GroundNode>& members,
                                           int a_u) {
  std::vector<int> order(members.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (members[a].traffic.priority != members[b].traffic.priority) {
      return members[a].traffic.priority > members[b].traffic.priority;
    }
    return members[a].id < members[b].id;
  });
  std::vector<std::vector<int>> batches;
  std::vector<int> current;
  int used = 0;
  for (int idx : order) {
    const int a_g = members[idx].antenna_count;
    if (!current.empty() && used + a_g > a_u) {
      batches.push_back(current);
      current.clear();
      used = 0;
    }
    current.push_back(idx);
    used += a_g;
  }
  if (!current.empty()) batches.push_back(current);
  return batches;
}

std::vector<GnService> evaluate_services(const Vec3& p_uav,
                                         const std::vector<GroundNode>& members,
                                         int a_u, const Environment& env,
                                         int mc_samples, std::uint64_t seed) {
  std::vector<GnService> out(members.size());
  for (const auto& batch : plan_batches(members, a_u)) {
    std::vector<GroundNode> co_served;
    for (int idx : batch) co_served.push_back(members[idx]);
    for (std::size_t k = 0; k < batch.size(); ++k) {
      const std::uint64_t link_seed =
          derive_seed(seed, 0x6c6b, static_cast<std::uint64_t>(members[batch[k]].id));
      const LinkThroughput lt = average_throughput(
          p_uav, co_served, static_cast<int>(k), a_u, env, mc_samples, link_seed);
      GnService s;
      s.gn_id = members[batch[k]].id;
      s.mean_rate_bps = lt.mean_rate_bps;
      s.harvest_time_s = members[batch[k]].traffic.payload_bits / lt.mean_rate_bps;
      out[batch[k]] = s;
    }
  }
  return out;
}

ClusterServiceResult serve_cluster(const std::vector<GroundNode>& members,
                                   const std::vector<GnService>& services,
                                   double arrival_time_s, double horizon_s,
                                   int a_u, const RewardOptions& opts) {
  ClusterServiceResult r;
  double t = arrival_time_s;
  for (const auto& batch : plan_batches(members, a_u)) {
    double batch_end = t;
    for (int idx : batch) {
      const double dt = services[idx].harvest_time_s;
      if (t + dt > horizon_s) {
        r.skipped.push_back(members[idx].id);
        continue;
      }
      ServedGn s;
      s.gn_id = members[idx].id;
      s.start_s = t;
      s.completion_s = t + dt;
      const double latency = opts.literal_delta ? dt : s.completion_s;
      s.reward = reward_value(members[idx].traffic, latency);
      r.served.push_back(s);
      r.total_reward += s.reward;
      batch_end = std::max(batch_end, s.completion_s);
    }
    t = batch_end;
  }
  r.end_time_s = t;
  return r;
}

double cluster_reward(const Vec3& p_uav, const std::vector<GroundNode>& members,
                      int a_u, const Environment& env, int mc_samples,
                      std::uint64_t seed, double horizon_s,
                      const RewardOptions& opts) {
  const auto services =
      evaluate_services(p_uav, members, a_u, env, mc_samples, seed);
  return serve_cluster(members, services, 0.0, horizon_s, a_u, opts).total_reward;
}

}  // namespace uavsim
