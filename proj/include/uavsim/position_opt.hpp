#pragma once

#include <cstdint>
#include <vector>

#include "uavsim/scenario.hpp"
#include "uavsim/service.hpp"

namespace uavsim {

struct ServicePosition {
  int cluster_id = 0;
  VoxelIndex voxel;
  Vec3 position = Vec3::Zero();  // voxel center
  double cluster_reward = 0.0;
  std::vector<GnService> services;  // parallel to the cluster member list
};

// Coarse stage: all voxels whose (x, y) footprint intersects the smallest
// axis-aligned rectangle containing the members, at every altitude layer.
std::vector<VoxelIndex> bounding_box_voxels(const SiteConfig& site,
                                            const std::vector<GroundNode>& members);

// Fine stage: argmax of the cluster reward over the candidate voxels, ZF in
// the inner evaluation; fading seed shared across candidates so the argmax
// reflects geometry. Ties break lexicographically on the voxel index.
ServicePosition fine_search(const std::vector<VoxelIndex>& voxels,
                            const SiteConfig& site,
                            const std::vector<GroundNode>& members,
                            int cluster_id, int a_u, const Environment& env,
                            int mc_samples, std::uint64_t seed,
                            double horizon_s,
                            const RewardOptions& opts = RewardOptions{});

}  // namespace uavsim
