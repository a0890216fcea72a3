#include "uavsim/trajectory_opt.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "uavsim/rng.hpp"

namespace uavsim {

namespace {
constexpr double kMinSpeed = 0.1;
constexpr double kZeroLength = 1e-9;
}  // namespace

VelocityProfile velocity_profile(const std::vector<Vec3>& waypoints,
                                 const std::vector<double>& speeds) {
  VelocityProfile prof;
  if (waypoints.size() != speeds.size() + 1) {
    throw std::invalid_argument("velocity_profile: waypoints != speeds + 1");
  }
  double t = 0.0;
  auto push = [&](double time, const Vec3& vel) {
    const HorizontalVertical hv = decompose_velocity(vel);
    prof.times_s.push_back(time);
    prof.v_h.push_back(hv.v_h);
    prof.v_v.push_back(hv.v_v);
  };
  bool first = true;
  Vec3 last_vel = Vec3::Zero();
  for (std::size_t i = 0; i < speeds.size(); ++i) {
    const Vec3 delta = waypoints[i + 1] - waypoints[i];
    const double len = delta.norm();
    if (len < kZeroLength) continue;
    const Vec3 vel = delta / len * speeds[i];
    if (first) {
      push(t, vel);
      first = false;
    } else {
      push(t, vel);  // sample at the joint carries the outgoing segment
    }
    t += len / speeds[i];
    last_vel = vel;
  }
  if (!prof.times_s.empty()) push(t, last_vel);
  return prof;
}

Trajectory make_trajectory(const std::vector<Vec3>& waypoints,
                           const std::vector<double>& speeds, const UavSpec& uav,
                           const Environment& env, const PowerOptions& opts) {
  Trajectory traj;
  traj.waypoints = waypoints;
  traj.speeds = speeds;
  const VelocityProfile prof = velocity_profile(waypoints, speeds);
  if (prof.times_s.size() < 2) {
    // Degenerate hover trajectory of zero distance.
    traj.waypoints = {waypoints.empty() ? Vec3::Zero() : waypoints.front()};
    traj.speeds.clear();
    return traj;
  }
  const PowerReport rep = trajectory_power(prof, uav, env, opts);
  traj.duration_s = rep.duration_s;
  traj.energy_j = rep.horizontal_energy_j + rep.vertical_energy_j;
  traj.avg_power_w = rep.avg_power_w;
  return traj;
}

double lagrangian_cost(const Trajectory& traj, double lambda,
                       const LcsoOptions& opts) {
  if (traj.degenerate()) return 0.0;
  const double primal =
      opts.cost_mode == CostMode::Time ? traj.duration_s : traj.avg_power_w;
  const double excess = std::max(0.0, traj.avg_power_w - opts.p_avg_w);
  return primal + lambda * excess * traj.duration_s;
}

void repair_particle(Particle& p, const Edge& edge, const SiteConfig& site,
                     const UavSpec& uav) {
  p.waypoints.front() = edge.from;
  p.waypoints.back() = edge.to;
  for (std::size_t i = 1; i + 1 < p.waypoints.size(); ++i) {
    Vec3& w = p.waypoints[i];
    w.x() = std::clamp(w.x(), 0.0, site.x_max);
    w.y() = std::clamp(w.y(), 0.0, site.y_max);
    w.z() = std::clamp(w.z(), 0.0, site.z_max);
  }
  for (double& s : p.speeds) s = std::clamp(s, kMinSpeed, uav.v_max);

  // Finite-difference component accelerations are bounded by the slope between
  // consecutive samples; slow both segments at a violating joint until every
  // slope fits under a_max.
  for (int pass = 0; pass < 500; ++pass) {
    const VelocityProfile prof = velocity_profile(p.waypoints, p.speeds);
    if (prof.times_s.size() < 2) return;
    bool ok = true;
    // Map profile samples back to segment indices (zero-length segments are
    // skipped in the profile).
    std::vector<std::size_t> seg_of_sample;
    for (std::size_t i = 0; i < p.speeds.size(); ++i) {
      if ((p.waypoints[i + 1] - p.waypoints[i]).norm() >= kZeroLength) {
        seg_of_sample.push_back(i);
      }
    }
    seg_of_sample.push_back(seg_of_sample.back());  // terminal sample
    for (std::size_t i = 0; i + 1 < prof.times_s.size(); ++i) {
      const double dt = prof.times_s[i + 1] - prof.times_s[i];
      if (dt <= 0.0) continue;
      const double ah = std::abs(prof.v_h[i + 1] - prof.v_h[i]) / dt;
      const double av = std::abs(prof.v_v[i + 1] - prof.v_v[i]) / dt;
      if (ah > uav.a_max || av > uav.a_max) {
        ok = false;
        p.speeds[seg_of_sample[i]] =
            std::max(kMinSpeed, p.speeds[seg_of_sample[i]] * 0.9);
        p.speeds[seg_of_sample[i + 1]] =
            std::max(kMinSpeed, p.speeds[seg_of_sample[i + 1]] * 0.9);
      }
    }
    if (ok) return;
  }
}

void tournament_update(const Particle& winner, Particle& runner, Particle& loser,
                       ParticleVelocity& runner_vel, ParticleVelocity& loser_vel,
                       const TournamentCoeffs& c) {
  const std::size_t n_wp = winner.waypoints.size();
  const std::size_t n_sp = winner.speeds.size();
  for (std::size_t i = 0; i < n_wp; ++i) {
    runner_vel.wp_delta[i] = c.r_n1 * runner_vel.wp_delta[i] +
                             c.r_n2 * (winner.waypoints[i] - runner.waypoints[i]);
  }
  for (std::size_t i = 0; i < n_sp; ++i) {
    runner_vel.speed_delta[i] = c.r_n1 * runner_vel.speed_delta[i] +
                                c.r_n2 * (winner.speeds[i] - runner.speeds[i]);
  }
  // Loser learns from both the winner and the pre-update runner-up.
  for (std::size_t i = 0; i < n_wp; ++i) {
    loser_vel.wp_delta[i] = c.l_n1 * loser_vel.wp_delta[i] +
                            c.l_n2 * (winner.waypoints[i] - loser.waypoints[i]) +
                            c.l_n3 * (runner.waypoints[i] - loser.waypoints[i]);
  }
  for (std::size_t i = 0; i < n_sp; ++i) {
    loser_vel.speed_delta[i] = c.l_n1 * loser_vel.speed_delta[i] +
                               c.l_n2 * (winner.speeds[i] - loser.speeds[i]) +
                               c.l_n3 * (runner.speeds[i] - loser.speeds[i]);
  }
  for (std::size_t i = 0; i < n_wp; ++i) runner.waypoints[i] += runner_vel.wp_delta[i];
  for (std::size_t i = 0; i < n_sp; ++i) runner.speeds[i] += runner_vel.speed_delta[i];
  for (std::size_t i = 0; i < n_wp; ++i) loser.waypoints[i] += loser_vel.wp_delta[i];
  for (std::size_t i = 0; i < n_sp; ++i) loser.speeds[i] += loser_vel.speed_delta[i];
}

namespace {

struct Swarm {
  std::vector<Particle> particles;
  std::vector<ParticleVelocity> velocities;
  std::vector<double> costs;
  std::vector<bool> dirty;
  int evals = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  Particle best_particle;
};

}  // namespace

Trajectory lcso_optimize(const Edge& edge, double lambda,
                         const SwarmConfig& swarm_cfg, const SiteConfig& site,
                         const UavSpec& uav, const Environment& env,
                         std::uint64_t seed, const LcsoOptions& opts) {
  if (!site.contains(edge.from) || !site.contains(edge.to)) {
    throw std::invalid_argument("lcso_optimize: edge vertex outside site");
  }
  if (swarm_cfg.n_sw % swarm_cfg.n_ssw != 0) {
    throw std::invalid_argument("lcso_optimize: n_sw not divisible by n_ssw");
  }
  const double dist = edge.length();
  if (dist < kZeroLength) {
    Trajectory hover;
    hover.waypoints = {edge.from};
    return hover;
  }

  const int m = swarm_cfg.m_seg;
  const int n_sw = swarm_cfg.n_sw;
  const int n_ssw = swarm_cfg.n_ssw;
  const int n_sub = n_sw / n_ssw;
  Rng rng = make_rng(seed, /*stream=*/0x6c63);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Swarm sw;
  sw.particles.resize(n_sw);
  sw.velocities.resize(n_sw);
  sw.costs.assign(n_sw, 0.0);
  sw.dirty.assign(n_sw, true);
  for (int i = 0; i < n_sw; ++i) {
    Particle& p = sw.particles[i];
    p.waypoints.resize(m + 1);
    p.speeds.resize(m);
    // Every third particle starts on the straight chord at constant speed; the
    // rest are jittered around it.
    const bool straight = (i % 3 == 0);
    const double sigma = straight ? 0.0 : (0.02 + 0.13 * u01(rng)) * dist;
    for (int k = 0; k <= m; ++k) {
      const double f = static_cast<double>(k) / m;
      Vec3 w = edge.from + f * (edge.to - edge.from);
      if (!straight && k > 0 && k < m) {
        w += sigma * Vec3(gauss(rng), gauss(rng), gauss(rng));
      }
      p.waypoints[k] = w;
    }
    const double base =
        straight ? (0.3 + 0.7 * u01(rng)) * uav.v_max : kMinSpeed + u01(rng) * (uav.v_max - kMinSpeed);
    for (int k = 0; k < m; ++k) {
      p.speeds[k] = straight ? base : base + 2.0 * gauss(rng);
    }
    repair_particle(p, edge, site, uav);
    sw.velocities[i].wp_delta.assign(m + 1, Vec3::Zero());
    sw.velocities[i].speed_delta.assign(m, 0.0);
  }

  auto evaluate = [&](int i) {
    const Trajectory t =
        make_trajectory(sw.particles[i].waypoints, sw.particles[i].speeds, uav,
                        env, opts.power);
    sw.costs[i] = lagrangian_cost(t, lambda, opts);
    sw.dirty[i] = false;
    ++sw.evals;
    if (sw.costs[i] < sw.best_cost) {
      sw.best_cost = sw.costs[i];
      sw.best_particle = sw.particles[i];
    }
  };
  auto refresh = [&](int lo, int hi) {
    for (int i = lo; i < hi; ++i) {
      if (sw.dirty[i]) evaluate(i);
    }
  };
  refresh(0, n_sw);

  auto run_tournament = [&](int a, int b, int c) {
    for (int i : {a, b, c}) {
      if (sw.dirty[i]) evaluate(i);
    }
    std::array<int, 3> idx = {a, b, c};
    std::sort(idx.begin(), idx.end(),
              [&](int x, int y) { return sw.costs[x] < sw.costs[y]; });
    TournamentCoeffs co;
    co.r_n1 = u01(rng);
    co.r_n2 = u01(rng);
    co.l_n1 = u01(rng);
    co.l_n2 = u01(rng);
    co.l_n3 = u01(rng);
    tournament_update(sw.particles[idx[0]], sw.particles[idx[1]],
                      sw.particles[idx[2]], sw.velocities[idx[1]],
                      sw.velocities[idx[2]], co);
    repair_particle(sw.particles[idx[1]], edge, site, uav);
    repair_particle(sw.particles[idx[2]], edge, site, uav);
    sw.dirty[idx[1]] = true;
    sw.dirty[idx[2]] = true;
  };

  while (sw.evals < swarm_cfg.f_max) {
    // Stage 1: disjoint random triples within each sub-swarm.
    for (int s = 0; s < n_sub && sw.evals < swarm_cfg.f_max; ++s) {
      const int base = s * n_ssw;
      std::vector<int> order(n_ssw);
      std::iota(order.begin(), order.end(), base);
      std::shuffle(order.begin(), order.end(), rng);
      for (int t = 0; t + 2 < n_ssw && sw.evals < swarm_cfg.f_max; t += 3) {
        run_tournament(order[t], order[t + 1], order[t + 2]);
      }
      refresh(base, base + n_ssw);
    }
    if (sw.evals >= swarm_cfg.f_max) break;
    // Stage 2: tournament among the sub-swarm winners.
    if (n_sub >= 3) {
      std::vector<int> winners(n_sub);
      for (int s = 0; s < n_sub; ++s) {
        const int base = s * n_ssw;
        winners[s] = base;
        for (int i = base; i < base + n_ssw; ++i) {
          if (sw.costs[i] < sw.costs[winners[s]]) winners[s] = i;
        }
      }
      std::shuffle(winners.begin(), winners.end(), rng);
      run_tournament(winners[0], winners[1], winners[2]);
    }
  }
  refresh(0, n_sw);  // final batch so the elite reflects the last updates

  return make_trajectory(sw.best_particle.waypoints, sw.best_particle.speeds,
                         uav, env, opts.power);
}

DualResult dual_ascent(const Edge& edge, double p_avg_w,
                       const SwarmConfig& swarm, const SiteConfig& site,
                       const UavSpec& uav, const Environment& env,
                       std::uint64_t seed, int max_outer, double step0,
                       const LcsoOptions& base_opts) {
  const double floor_w = min_level_flight_power(uav, env, base_opts.power);
  if (!(p_avg_w > floor_w)) {
    throw std::invalid_argument(
        "dual_ascent: P_avg below the level-flight feasibility floor");
  }
  LcsoOptions opts = base_opts;
  opts.p_avg_w = p_avg_w;

  DualResult out;
  out.dual.lambda = 0.0;
  bool have_feasible = false;
  double best_feasible_cost = std::numeric_limits<double>::infinity();
  Trajectory best_infeasible;
  double best_infeasible_excess = std::numeric_limits<double>::infinity();

  for (int k = 1; k <= max_outer; ++k) {
    const Trajectory traj =
        lcso_optimize(edge, out.dual.lambda, swarm, site, uav, env,
                      derive_seed(seed, 0x6461, static_cast<std::uint64_t>(k)),
                      opts);
    if (traj.degenerate()) {
      out.trajectory = traj;
      out.dual.converged = true;
      return out;
    }
    const double residual = traj.avg_power_w - p_avg_w;
    out.dual.residuals_w.push_back(residual);
    const bool feasible = traj.avg_power_w <= 1.01 * p_avg_w;
    if (feasible) {
      const double primal =
          opts.cost_mode == CostMode::Time ? traj.duration_s : traj.avg_power_w;
      if (!have_feasible || primal < best_feasible_cost) {
        have_feasible = true;
        best_feasible_cost = primal;
        out.trajectory = traj;
      }
    } else if (residual < best_infeasible_excess) {
      best_infeasible_excess = residual;
      best_infeasible = traj;
    }
    if (feasible && (residual <= 0.0 ? out.dual.lambda == 0.0
                                     : std::abs(residual) <= 0.01 * p_avg_w)) {
      out.dual.converged = true;
      break;
    }
    out.dual.lambda =
        std::max(0.0, out.dual.lambda + step0 / std::sqrt(double(k)) * residual);
  }
  if (!have_feasible) {
    throw std::runtime_error(
        "dual_ascent: no power-feasible trajectory within the outer budget");
  }
  return out;
}

}  // namespace uavsim
