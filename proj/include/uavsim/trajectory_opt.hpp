#pragma once

#include <cstdint>
#include <vector>

#include "uavsim/power.hpp"
#include "uavsim/scenario.hpp"

namespace uavsim {

struct Edge {
  Vec3 from = Vec3::Zero();
  Vec3 to = Vec3::Zero();
  double length() const { return (to - from).norm(); }
};

// LCSO decision vector: waypoints with pinned endpoints plus per-segment
// constant speeds.
struct Particle {
  std::vector<Vec3> waypoints;  // m_seg + 1 points
  std::vector<double> speeds;   // m_seg values in (0, v_max]
};

struct ParticleVelocity {
  std::vector<Vec3> wp_delta;
  std::vector<double> speed_delta;
};

struct Trajectory {
  std::vector<Vec3> waypoints;
  std::vector<double> speeds;
  double duration_s = 0.0;
  double energy_j = 0.0;
  double avg_power_w = 0.0;  // 0 for the degenerate zero-length trajectory

  bool degenerate() const { return speeds.empty(); }
};

enum class CostMode { Time, Power };

struct LcsoOptions {
  CostMode cost_mode = CostMode::Time;
  double p_avg_w = 4500.0;
  PowerOptions power;
};

struct DualState {
  double lambda = 0.0;
  std::vector<double> residuals_w;  // P_3D - P_avg per outer iteration
  bool converged = false;
};

// Sampled component-speed profile of a piecewise-linear constant-speed-per-
// segment trajectory; zero-length segments contribute no samples.
VelocityProfile velocity_profile(const std::vector<Vec3>& waypoints,
                                 const std::vector<double>& speeds);

Trajectory make_trajectory(const std::vector<Vec3>& waypoints,
                           const std::vector<double>& speeds, const UavSpec& uav,
                           const Environment& env,
                           const PowerOptions& opts = PowerOptions{});

// Primal objective plus hinge penalty on the average-power excess.
double lagrangian_cost(const Trajectory& traj, double lambda,
                       const LcsoOptions& opts);

// In-place clamp to the site and the speed bound, then an iterative pass that
// slows adjacent segments until the finite-difference component accelerations
// respect a_max.
void repair_particle(Particle& p, const Edge& edge, const SiteConfig& site,
                     const UavSpec& uav);

struct TournamentCoeffs {
  double r_n1 = 0.0, r_n2 = 0.0;          // runner-up velocity update
  double l_n1 = 0.0, l_n2 = 0.0, l_n3 = 0.0;  // loser velocity update
};

// The two-learner update: runner-up pulled toward the winner, loser toward
// both; the winner is never modified.
void tournament_update(const Particle& winner, Particle& runner, Particle& loser,
                       ParticleVelocity& runner_vel, ParticleVelocity& loser_vel,
                       const TournamentCoeffs& c);

Trajectory lcso_optimize(const Edge& edge, double lambda,
                         const SwarmConfig& swarm, const SiteConfig& site,
                         const UavSpec& uav, const Environment& env,
                         std::uint64_t seed,
                         const LcsoOptions& opts = LcsoOptions{});

struct DualResult {
  Trajectory trajectory;
  DualState dual;
};

// Projected subgradient ascent on the average-power multiplier, LCSO in the
// inner loop; returns the best horizon-feasible trajectory.
DualResult dual_ascent(const Edge& edge, double p_avg_w,
                       const SwarmConfig& swarm, const SiteConfig& site,
                       const UavSpec& uav, const Environment& env,
                       std::uint64_t seed, int max_outer = 12,
                       double step0 = 1e-3,
                       const LcsoOptions& base_opts = LcsoOptions{});

}  // namespace uavsim
