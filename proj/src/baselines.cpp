#include "uavsim/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "uavsim/channel.hpp"
#include "uavsim/power.hpp"
#include "uavsim/rng.hpp"

namespace uavsim {

namespace {

double baseline_altitude(const SiteConfig& site) {
  return std::min(kBaselineAltitude, site.z_max - site.dz / 2.0);
}

// Hover-and-serve evaluation shared by every baseline: each UAV serves its
// associated GNs from t = 0 at a fixed position.
BaselineResult hover_and_serve(const std::string& scheme,
                               const ScenarioSpec& spec,
                               const std::vector<Vec3>& positions,
                               const std::vector<std::vector<int>>& sets,
                               const RewardOptions& opts, std::uint64_t seed) {
  BaselineResult r;
  r.scheme = scheme;
  r.uav_positions = positions;
  r.associations.assign(spec.gns.size(), -1);
  const int a_u = spec.uav_template.antenna_count;
  const double hover = hover_power(spec.uav_template);
  for (std::size_t u = 0; u < positions.size(); ++u) {
    r.per_uav_power_w.push_back(hover);
    std::vector<GroundNode> members;
    for (int gi : sets[u]) {
      r.associations[gi] = static_cast<int>(u);
      members.push_back(spec.gns[gi]);
    }
    if (members.empty()) continue;
    const auto services =
        evaluate_services(positions[u], members, a_u, spec.env,
                          spec.mc_samples, derive_seed(seed, 0x6273, u));
    const ClusterServiceResult res = serve_cluster(
        members, services, 0.0, spec.mission_duration_s, a_u, opts);
    r.total_reward += res.total_reward;
    for (const ServedGn& s : res.served) r.served.push_back(s);
  }
  return r;
}

}  // namespace

BaselineResult static_deployment(const ScenarioSpec& spec,
                                 const Clustering& clustering,
                                 const RewardOptions& opts, std::uint64_t seed) {
  const double z = baseline_altitude(spec.site);
  std::vector<Vec3> positions;
  for (const auto& c : clustering.centroids) {
    positions.emplace_back(c.x(), c.y(), z);
  }
  return hover_and_serve("static", spec, positions, clustering.members(), opts,
                         seed);
}

BaselineResult voronoi_decomposition(const ScenarioSpec& spec,
                                     VoronoiMetric metric,
                                     const RewardOptions& opts,
                                     std::uint64_t seed) {
  const double z = baseline_altitude(spec.site);
  const int u_count = spec.num_uavs;
  Rng rng = make_rng(seed, /*stream=*/0x766f);
  std::uniform_real_distribution<double> ux(0.0, spec.site.x_max);
  std::uniform_real_distribution<double> uy(0.0, spec.site.y_max);
  std::vector<Vec3> positions;
  for (int u = 0; u < u_count; ++u) positions.emplace_back(ux(rng), uy(rng), z);

  auto score = [&](const Vec3& uav_pos, const GroundNode& gn) {
    const LinkGeometry g = link_geometry(uav_pos, gn.position);
    if (metric == VoronoiMetric::Distance) return -g.distance_m;
    // Expected received power: LoS/NLoS mixture of the large-scale gain.
    const double pl = p_los(g.elevation_deg, spec.env.z1, spec.env.z2);
    return pl * pathloss(g.distance_m, LinkState::LoS, spec.env) +
           (1.0 - pl) * pathloss(g.distance_m, LinkState::NLoS, spec.env);
  };

  std::vector<int> assign(spec.gns.size(), 0);
  for (int iter = 0; iter < 100; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < spec.gns.size(); ++i) {
      int best = 0;
      double best_s = -std::numeric_limits<double>::infinity();
      for (int u = 0; u < u_count; ++u) {
        const double s = score(positions[u], spec.gns[i]);
        if (s > best_s) {
          best_s = s;
          best = u;
        }
      }
      if (assign[i] != best) {
        assign[i] = best;
        changed = true;
      }
    }
    for (int u = 0; u < u_count; ++u) {
      Eigen::Vector2d sum = Eigen::Vector2d::Zero();
      int count = 0;
      for (std::size_t i = 0; i < spec.gns.size(); ++i) {
        if (assign[i] == u) {
          sum += Eigen::Vector2d(spec.gns[i].position.x(), spec.gns[i].position.y());
          ++count;
        }
      }
      if (count > 0) positions[u] = Vec3(sum.x() / count, sum.y() / count, z);
    }
    if (!changed && iter > 0) break;
  }

  std::vector<std::vector<int>> sets(u_count);
  for (std::size_t i = 0; i < spec.gns.size(); ++i) sets[assign[i]].push_back(int(i));
  const char* name =
      metric == VoronoiMetric::Distance ? "voronoi-dist" : "voronoi-rx";
  return hover_and_serve(name, spec, positions, sets, opts, seed);
}

ServicePosition igd_positioning(const std::vector<GroundNode>& members,
                                int cluster_id, const ScenarioSpec& spec,
                                double step_m, int iters, std::uint64_t seed,
                                const RewardOptions& opts, const Vec3* start) {
  const int a_u = spec.uav_template.antenna_count;
  auto reward_at = [&](const Vec3& p) {
    return cluster_reward(p, members, a_u, spec.env, spec.mc_samples, seed,
                          spec.mission_duration_s, opts);
  };
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  for (const GroundNode& g : members) {
    centroid += Eigen::Vector2d(g.position.x(), g.position.y());
  }
  centroid /= static_cast<double>(members.size());
  Vec3 p = start ? *start
                 : Vec3(centroid.x(), centroid.y(), baseline_altitude(spec.site));

  auto project = [&](Vec3 q) {
    q.x() = std::clamp(q.x(), 0.0, spec.site.x_max);
    q.y() = std::clamp(q.y(), 0.0, spec.site.y_max);
    q.z() = std::clamp(q.z(), spec.site.dz / 2.0, spec.site.z_max);
    return q;
  };
  Vec3 best_p = p;
  double best_r = reward_at(p);
  const double h = std::max(1.0, step_m / 2.0);  // finite-difference probe
  for (int k = 0; k < iters && step_m > 0.0; ++k) {
    Vec3 grad;
    for (int ax = 0; ax < 3; ++ax) {
      Vec3 lo = p, hi = p;
      lo[ax] -= h;
      hi[ax] += h;
      grad[ax] = (reward_at(project(hi)) - reward_at(project(lo))) / (2.0 * h);
    }
    const double norm = grad.norm();
    if (norm < 1e-12) break;
    p = project(p + step_m * grad / norm);
    const double r = reward_at(p);
    if (r > best_r) {
      best_r = r;
      best_p = p;
    }
  }
  ServicePosition sp;
  sp.cluster_id = cluster_id;
  sp.voxel = voxel_index(spec.site, best_p);
  sp.position = voxel_center(spec.site, sp.voxel);
  sp.cluster_reward = reward_at(sp.position);
  sp.services = evaluate_services(sp.position, members, a_u, spec.env,
                                  spec.mc_samples, seed);
  return sp;
}

ServicePosition ibf_positioning(const std::vector<GroundNode>& members,
                                int cluster_id, const ScenarioSpec& spec,
                                std::uint64_t seed, int rounds,
                                const RewardOptions& opts) {
  const int a_u = spec.uav_template.antenna_count;
  bool found = false;
  VoxelIndex best_idx;
  double best_reward = -std::numeric_limits<double>::infinity();
  std::uint64_t best_seed = seed;
  for (int r = 0; r < rounds; ++r) {
    const std::uint64_t round_seed =
        r == 0 ? seed : derive_seed(seed, 0x696266, static_cast<std::uint64_t>(r));
    for (int ix = 0; ix < spec.site.nx(); ++ix) {
      for (int iy = 0; iy < spec.site.ny(); ++iy) {
        for (int iz = 0; iz < spec.site.nz(); ++iz) {
          const VoxelIndex v{ix, iy, iz};
          const double rew = cluster_reward(
              voxel_center(spec.site, v), members, a_u, spec.env,
              spec.mc_samples, round_seed, spec.mission_duration_s, opts);
          if (!found || rew > best_reward || (rew == best_reward && v < best_idx)) {
            found = true;
            best_reward = rew;
            best_idx = v;
            best_seed = round_seed;
          }
        }
      }
    }
  }
  ServicePosition sp;
  sp.cluster_id = cluster_id;
  sp.voxel = best_idx;
  sp.position = voxel_center(spec.site, best_idx);
  sp.cluster_reward = best_reward;
  sp.services = evaluate_services(sp.position, members, a_u, spec.env,
                                  spec.mc_samples, best_seed);
  return sp;
}

namespace {

BaselineResult positioned_deployment(
    const std::string& scheme, const ScenarioSpec& spec,
    const Clustering& clustering, const RewardOptions& opts, std::uint64_t seed,
    const std::function<ServicePosition(const std::vector<GroundNode>&, int,
                                        std::uint64_t)>& positioner) {
  const auto sets = clustering.members();
  std::vector<Vec3> positions;
  for (std::size_t c = 0; c < sets.size(); ++c) {
    std::vector<GroundNode> members;
    for (int gi : sets[c]) members.push_back(spec.gns[gi]);
    const ServicePosition sp =
        positioner(members, static_cast<int>(c), derive_seed(seed, 0x706f, c));
    positions.push_back(sp.position);
  }
  return hover_and_serve(scheme, spec, positions, sets, opts, seed);
}

}  // namespace

BaselineResult igd_deployment(const ScenarioSpec& spec,
                              const Clustering& clustering,
                              const RewardOptions& opts, std::uint64_t seed) {
  return positioned_deployment(
      "igd", spec, clustering, opts, seed,
      [&](const std::vector<GroundNode>& members, int cid, std::uint64_t s) {
        return igd_positioning(members, cid, spec, /*step_m=*/spec.site.dz,
                               /*iters=*/25, s, opts);
      });
}

BaselineResult ibf_deployment(const ScenarioSpec& spec,
                              const Clustering& clustering,
                              const RewardOptions& opts, std::uint64_t seed) {
  return positioned_deployment(
      "ibf", spec, clustering, opts, seed,
      [&](const std::vector<GroundNode>& members, int cid, std::uint64_t s) {
        return ibf_positioning(members, cid, spec, s, /*rounds=*/2, opts);
      });
}

}  // namespace uavsim
