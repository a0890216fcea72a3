#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uavsim/position_opt.hpp"
#include "uavsim/service.hpp"
#include "uavsim/trajectory_opt.hpp"

namespace uavsim {

struct GraphVertex {
  int id = 0;           // 0 is the depot
  int cluster_id = -1;  // -1 for the depot
  Vec3 position = Vec3::Zero();
  std::vector<GroundNode> members;
  std::vector<GnService> services;  // parallel to members
};

struct GraphEdge {
  Trajectory trajectory;
  double lambda = 0.0;
  double travel_time() const { return trajectory.duration_s; }
};

struct FleetGraph {
  std::vector<GraphVertex> vertices;
  std::vector<std::vector<GraphEdge>> edges;  // complete, symmetric costs
  int a_u = 16;
  double horizon_s = 3000.0;
  double p_avg_w = 4500.0;
  double hover_power_w = 0.0;
  RewardOptions reward_opts;
};

struct SolverConfig {
  SwarmConfig swarm;
  LcsoOptions lcso;
  RewardOptions reward;
  int mc_samples = 256;
  int dual_max_outer = 12;
  long max_nodes = 20'000'000;  // branch-and-bound node budget
};

struct TourEval {
  bool feasible = true;  // returns to the depot within the horizon
  double reward = 0.0;
  std::vector<ServedGn> served;
  std::vector<int> skipped;
  double end_time_s = 0.0;      // back at the depot
  double flight_energy_j = 0.0;
  double hover_time_s = 0.0;
  double avg_power_w = 0.0;     // mission-average over the tour duration
};

struct FleetPlan {
  std::vector<std::vector<int>> tours;  // per UAV: cluster vertex ids
  double total_reward = 0.0;
  bool optimal = true;  // false when the node budget ran out
};

// Vertices from the per-cluster fine search plus the depot; edges from LCSO
// with dual ascent on the average-power constraint.
FleetGraph build_graph(const std::vector<ServicePosition>& service_positions,
                       const std::vector<std::vector<GroundNode>>& members,
                       const Vec3& depot, const SiteConfig& site,
                       const UavSpec& uav, const Environment& env,
                       double horizon_s, const SolverConfig& cfg,
                       std::uint64_t seed);

// Replays one UAV tour: depot -> vertices -> depot, sequential batch service
// at each stop.
TourEval evaluate_tour(const FleetGraph& graph, const std::vector<int>& tour);

// Depth-first branch and bound over (cluster, UAV) extensions; the bound
// serves every remaining cluster instantly at the earliest fleet time. Exact
// when the node budget is not exhausted.
FleetPlan bnb_mtsp(const FleetGraph& graph, int n_uavs,
                   long max_nodes = 20'000'000);

struct ConstraintViolation {
  std::string constraint;  // "C.1".."C.4"
  std::string detail;
};

struct MissionReport {
  double total_reward = 0.0;
  std::vector<double> per_uav_avg_power_w;
  std::vector<ServedGn> served;
  int collisions_detected = 0;
  int collisions_repaired = 0;
  std::vector<ConstraintViolation> violations;
  bool ok() const { return violations.empty(); }
};

// Position along an edge trajectory at elapsed time s (clamped to the ends).
Vec3 trajectory_position(const Trajectory& traj, double s);

// Shared-clock replay with voxel-time collision checks at 1 s resolution;
// conflicts trigger a one-voxel altitude offset for the lower-id UAV followed
// by re-verification.
MissionReport simulate_mission(const FleetPlan& plan, const FleetGraph& graph,
                               const SiteConfig& site, const UavSpec& uav,
                               const Environment& env);

}  // namespace uavsim
