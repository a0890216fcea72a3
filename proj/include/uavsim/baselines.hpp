#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uavsim/cluster.hpp"
#include "uavsim/position_opt.hpp"
#include "uavsim/scenario.hpp"

namespace uavsim {

struct BaselineResult {
  std::string scheme;
  std::vector<Vec3> uav_positions;
  std::vector<int> associations;  // GN index -> UAV index
  double total_reward = 0.0;
  std::vector<double> per_uav_power_w;  // hover power
  std::vector<ServedGn> served;
};

enum class VoronoiMetric { Distance, RxPower };

// Hover height shared by every baseline so the comparison is controlled.
inline constexpr double kBaselineAltitude = 145.0;

// UAVs parked at their cluster centroids for the whole mission.
BaselineResult static_deployment(const ScenarioSpec& spec,
                                 const Clustering& clustering,
                                 const RewardOptions& opts, std::uint64_t seed);

// Alternating GN association / centroid relocation until stable.
BaselineResult voronoi_decomposition(const ScenarioSpec& spec,
                                     VoronoiMetric metric,
                                     const RewardOptions& opts,
                                     std::uint64_t seed);

// Finite-difference reward ascent over the continuous 3D position, projected
// into the site, best visit snapped to its voxel.
ServicePosition igd_positioning(const std::vector<GroundNode>& members,
                                int cluster_id, const ScenarioSpec& spec,
                                double step_m, int iters, std::uint64_t seed,
                                const RewardOptions& opts = RewardOptions{},
                                const Vec3* start = nullptr);

// Exhaustive reward evaluation over every site voxel, refreshed over a few
// fading-seed rounds.
ServicePosition ibf_positioning(const std::vector<GroundNode>& members,
                                int cluster_id, const ScenarioSpec& spec,
                                std::uint64_t seed, int rounds = 2,
                                const RewardOptions& opts = RewardOptions{});

// Position every cluster's UAV with a per-cluster positioner and evaluate the
// hover-and-serve reward.
BaselineResult igd_deployment(const ScenarioSpec& spec,
                              const Clustering& clustering,
                              const RewardOptions& opts, std::uint64_t seed);
BaselineResult ibf_deployment(const ScenarioSpec& spec,
                              const Clustering& clustering,
                              const RewardOptions& opts, std::uint64_t seed);

}  // namespace uavsim
