#include "uavsim/position_opt.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace uavsim {

std::vector<VoxelIndex> bounding_box_voxels(const SiteConfig& site,
                                            const std::vector<GroundNode>& members) {
  if (members.empty()) {
    throw std::invalid_argument("bounding_box_voxels: empty cluster");
  }
  double x_lo = members[0].position.x(), x_hi = x_lo;
  double y_lo = members[0].position.y(), y_hi = y_lo;
  for (const GroundNode& g : members) {
    x_lo = std::min(x_lo, g.position.x());
    x_hi = std::max(x_hi, g.position.x());
    y_lo = std::min(y_lo, g.position.y());
    y_hi = std::max(y_hi, g.position.y());
  }
  auto clampi = [](int v, int n) { return std::clamp(v, 0, n - 1); };
  const int ix_lo = clampi(static_cast<int>(std::floor(x_lo / site.dx)), site.nx());
  const int ix_hi = clampi(static_cast<int>(std::floor(x_hi / site.dx)), site.nx());
  const int iy_lo = clampi(static_cast<int>(std::floor(y_lo / site.dy)), site.ny());
  const int iy_hi = clampi(static_cast<int>(std::floor(y_hi / site.dy)), site.ny());

  std::vector<VoxelIndex> out;
  for (int ix = ix_lo; ix <= ix_hi; ++ix) {
    for (int iy = iy_lo; iy <= iy_hi; ++iy) {
      for (int iz = 0; iz < site.nz(); ++iz) {
        out.push_back({ix, iy, iz});
      }
    }
  }
  return out;
}

ServicePosition fine_search(const std::vector<VoxelIndex>& voxels,
                            const SiteConfig& site,
                            const std::vector<GroundNode>& members,
                            int cluster_id, int a_u, const Environment& env,
                            int mc_samples, std::uint64_t seed,
                            double horizon_s, const RewardOptions& opts) {
  if (voxels.empty()) {
    throw std::invalid_argument("fine_search: empty candidate set");
  }
  bool found = false;
  VoxelIndex best_idx;
  double best_reward = -std::numeric_limits<double>::infinity();
  for (const VoxelIndex& v : voxels) {
    const Vec3 center = voxel_center(site, v);
    const double r =
        cluster_reward(center, members, a_u, env, mc_samples, seed, horizon_s, opts);
    if (!found || r > best_reward || (r == best_reward && v < best_idx)) {
      found = true;
      best_reward = r;
      best_idx = v;
    }
  }
  ServicePosition sp;
  sp.cluster_id = cluster_id;
  sp.voxel = best_idx;
  sp.position = voxel_center(site, best_idx);
  sp.cluster_reward = best_reward;
  sp.services =
      evaluate_services(sp.position, members, a_u, env, mc_samples, seed);
  return sp;
}

}  // namespace uavsim
