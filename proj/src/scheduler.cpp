#include "uavsim/scheduler.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "uavsim/rng.hpp"

namespace uavsim {

FleetGraph build_graph(const std::vector<ServicePosition>& service_positions,
                       const std::vector<std::vector<GroundNode>>& members,
                       const Vec3& depot, const SiteConfig& site,
                       const UavSpec& uav, const Environment& env,
                       double horizon_s, const SolverConfig& cfg,
                       std::uint64_t seed) {
  if (service_positions.empty()) {
    throw std::invalid_argument("build_graph: no service positions");
  }
  if (service_positions.size() != members.size()) {
    throw std::invalid_argument("build_graph: positions/members mismatch");
  }
  FleetGraph g;
  g.a_u = uav.antenna_count;
  g.horizon_s = horizon_s;
  g.p_avg_w = uav.p_avg;
  g.hover_power_w = hover_power(uav, cfg.lcso.power);
  g.reward_opts = cfg.reward;

  GraphVertex d;
  d.id = 0;
  d.position = depot;
  g.vertices.push_back(d);
  for (std::size_t c = 0; c < service_positions.size(); ++c) {
    GraphVertex v;
    v.id = static_cast<int>(c) + 1;
    v.cluster_id = service_positions[c].cluster_id;
    v.position = service_positions[c].position;
    v.members = members[c];
    v.services = service_positions[c].services;
    g.vertices.push_back(v);
  }

  const int n = static_cast<int>(g.vertices.size());
  g.edges.assign(n, std::vector<GraphEdge>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Edge e{g.vertices[i].position, g.vertices[j].position};
      const std::uint64_t edge_seed =
          derive_seed(seed, 0x6772, static_cast<std::uint64_t>(i) * 1000 + j);
      DualResult dr = dual_ascent(e, uav.p_avg, cfg.swarm, site, uav, env,
                                  edge_seed, cfg.dual_max_outer, 1e-3, cfg.lcso);
      GraphEdge fwd;
      fwd.trajectory = dr.trajectory;
      fwd.lambda = dr.dual.lambda;
      GraphEdge rev = fwd;
      std::reverse(rev.trajectory.waypoints.begin(), rev.trajectory.waypoints.end());
      std::reverse(rev.trajectory.speeds.begin(), rev.trajectory.speeds.end());
      g.edges[i][j] = fwd;
      g.edges[j][i] = rev;
    }
  }
  return g;
}

TourEval evaluate_tour(const FleetGraph& graph, const std::vector<int>& tour) {
  TourEval ev;
  if (tour.empty()) return ev;
  double t = 0.0;
  int pos = 0;
  for (int v : tour) {
    const GraphEdge& e = graph.edges[pos][v];
    t += e.travel_time();
    ev.flight_energy_j += e.trajectory.energy_j;
    const GraphVertex& vert = graph.vertices[v];
    ClusterServiceResult r =
        serve_cluster(vert.members, vert.services, t, graph.horizon_s,
                      graph.a_u, graph.reward_opts);
    ev.hover_time_s += r.end_time_s - t;
    t = r.end_time_s;
    ev.reward += r.total_reward;
    for (const ServedGn& s : r.served) ev.served.push_back(s);
    for (int id : r.skipped) ev.skipped.push_back(id);
    pos = v;
  }
  const GraphEdge& back = graph.edges[pos][0];
  t += back.travel_time();
  ev.flight_energy_j += back.trajectory.energy_j;
  ev.end_time_s = t;
  ev.feasible = t <= graph.horizon_s;
  const double energy =
      ev.flight_energy_j + graph.hover_power_w * ev.hover_time_s;
  ev.avg_power_w = t > 0.0 ? energy / t : 0.0;
  return ev;
}

namespace {

struct BnbContext {
  const FleetGraph* graph = nullptr;
  int n_uavs = 0;
  long max_nodes = 0;
  long nodes = 0;
  bool budget_exceeded = false;
  double incumbent = 0.0;
  std::vector<std::vector<int>> best_tours;

  std::vector<double> uav_time;
  std::vector<int> uav_pos;
  std::vector<std::vector<int>> tours;
  std::vector<bool> assigned;  // by vertex id
  double reward = 0.0;
};

double optimistic_cluster_reward(const FleetGraph& g, const GraphVertex& v,
                                 double t) {
  double r = 0.0;
  for (std::size_t m = 0; m < v.members.size(); ++m) {
    const double harvest = v.services[m].harvest_time_s;
    if (t + harvest > g.horizon_s) continue;
    const double latency =
        g.reward_opts.literal_delta ? harvest : t + harvest;
    r += reward_value(v.members[m].traffic, latency);
  }
  return r;
}

void bnb_dfs(BnbContext& ctx) {
  if (ctx.budget_exceeded) return;
  if (++ctx.nodes > ctx.max_nodes) {
    ctx.budget_exceeded = true;
    return;
  }
  const FleetGraph& g = *ctx.graph;
  if (ctx.reward > ctx.incumbent) {
    ctx.incumbent = ctx.reward;
    ctx.best_tours = ctx.tours;
  }

  const double t_min =
      *std::min_element(ctx.uav_time.begin(), ctx.uav_time.end());
  double bound = ctx.reward;
  for (std::size_t v = 1; v < g.vertices.size(); ++v) {
    if (!ctx.assigned[v]) {
      bound += optimistic_cluster_reward(g, g.vertices[v], t_min);
    }
  }
  if (bound <= ctx.incumbent + 1e-9) return;

  for (std::size_t v = 1; v < g.vertices.size(); ++v) {
    if (ctx.assigned[v]) continue;
    bool seen_idle = false;  // interchangeable idle UAVs: expand only the first
    for (int u = 0; u < ctx.n_uavs; ++u) {
      if (ctx.tours[u].empty()) {
        if (seen_idle) continue;
        seen_idle = true;
      }
      const GraphVertex& vert = g.vertices[v];
      const double arrival =
          ctx.uav_time[u] + g.edges[ctx.uav_pos[u]][v].travel_time();
      ClusterServiceResult r =
          serve_cluster(vert.members, vert.services, arrival, g.horizon_s,
                        g.a_u, g.reward_opts);
      const double back = g.edges[v][0].travel_time();
      if (r.end_time_s + back > g.horizon_s) continue;
      if (!(r.total_reward > 0.0)) continue;

      const double saved_time = ctx.uav_time[u];
      const int saved_pos = ctx.uav_pos[u];
      ctx.uav_time[u] = r.end_time_s;
      ctx.uav_pos[u] = static_cast<int>(v);
      ctx.tours[u].push_back(static_cast<int>(v));
      ctx.assigned[v] = true;
      ctx.reward += r.total_reward;

      bnb_dfs(ctx);

      ctx.reward -= r.total_reward;
      ctx.assigned[v] = false;
      ctx.tours[u].pop_back();
      ctx.uav_pos[u] = saved_pos;
      ctx.uav_time[u] = saved_time;
      if (ctx.budget_exceeded) return;
    }
  }
}

}  // namespace

FleetPlan bnb_mtsp(const FleetGraph& graph, int n_uavs, long max_nodes) {
  if (n_uavs < 1) throw std::invalid_argument("bnb_mtsp: need U >= 1");
  FleetPlan plan;
  plan.tours.assign(n_uavs, {});
  // Serving requires hovering at the service position; if hovering already
  // violates the average-power cap no cluster is servable.
  if (graph.hover_power_w > 1.01 * graph.p_avg_w) {
    plan.total_reward = 0.0;
    return plan;
  }
  BnbContext ctx;
  ctx.graph = &graph;
  ctx.n_uavs = n_uavs;
  ctx.max_nodes = max_nodes;
  ctx.best_tours.assign(n_uavs, {});
  ctx.uav_time.assign(n_uavs, 0.0);
  ctx.uav_pos.assign(n_uavs, 0);
  ctx.tours.assign(n_uavs, {});
  ctx.assigned.assign(graph.vertices.size(), false);
  bnb_dfs(ctx);
  plan.tours = ctx.best_tours;
  plan.total_reward = ctx.incumbent;
  plan.optimal = !ctx.budget_exceeded;
  return plan;
}

Vec3 trajectory_position(const Trajectory& traj, double s) {
  if (traj.degenerate()) return traj.waypoints.front();
  if (s <= 0.0) return traj.waypoints.front();
  double t = 0.0;
  for (std::size_t i = 0; i < traj.speeds.size(); ++i) {
    const Vec3 delta = traj.waypoints[i + 1] - traj.waypoints[i];
    const double len = delta.norm();
    if (len < 1e-12) continue;
    const double dt = len / traj.speeds[i];
    if (s <= t + dt) {
      return traj.waypoints[i] + delta * ((s - t) / dt);
    }
    t += dt;
  }
  return traj.waypoints.back();
}

namespace {

struct Leg {
  double t0 = 0.0;
  double t1 = 0.0;
  bool travel = false;
  Trajectory trajectory;  // travel legs
  Vec3 hover_pos = Vec3::Zero();
  double z_offset = 0.0;
};

std::vector<Leg> build_timeline(const FleetGraph& g, const std::vector<int>& tour) {
  std::vector<Leg> legs;
  if (tour.empty()) return legs;
  double t = 0.0;
  int pos = 0;
  for (int v : tour) {
    const GraphEdge& e = g.edges[pos][v];
    Leg travel;
    travel.t0 = t;
    travel.t1 = t + e.travel_time();
    travel.travel = true;
    travel.trajectory = e.trajectory;
    legs.push_back(travel);
    t = travel.t1;
    const GraphVertex& vert = g.vertices[v];
    ClusterServiceResult r = serve_cluster(vert.members, vert.services, t,
                                           g.horizon_s, g.a_u, g.reward_opts);
    Leg hover;
    hover.t0 = t;
    hover.t1 = r.end_time_s;
    hover.hover_pos = vert.position;
    legs.push_back(hover);
    t = r.end_time_s;
    pos = v;
  }
  const GraphEdge& back = g.edges[pos][0];
  Leg ret;
  ret.t0 = t;
  ret.t1 = t + back.travel_time();
  ret.travel = true;
  ret.trajectory = back.trajectory;
  legs.push_back(ret);
  return legs;
}

bool position_at(const std::vector<Leg>& legs, double t, Vec3* out) {
  if (legs.empty() || t < legs.front().t0 || t > legs.back().t1) return false;
  for (const Leg& l : legs) {
    if (t <= l.t1) {
      Vec3 p = l.travel ? trajectory_position(l.trajectory, t - l.t0) : l.hover_pos;
      p.z() += l.z_offset;
      *out = p;
      return true;
    }
  }
  return false;
}

bool at_depot_pad(const SiteConfig& site, const Vec3& p) {
  for (const Vec3& d : site.depot_positions) {
    if (voxel_index(site, p) == voxel_index(site, d)) return true;
  }
  return false;
}

// Returns conflicting (tick, uav_a, uav_b) triples.
std::vector<std::array<int, 3>> find_conflicts(
    const std::vector<std::vector<Leg>>& timelines, const SiteConfig& site) {
  std::vector<std::array<int, 3>> conflicts;
  double t_end = 0.0;
  for (const auto& legs : timelines) {
    if (!legs.empty()) t_end = std::max(t_end, legs.back().t1);
  }
  for (int tick = 0; tick <= static_cast<int>(std::ceil(t_end)); ++tick) {
    std::vector<std::pair<int, VoxelIndex>> occupied;
    for (std::size_t u = 0; u < timelines.size(); ++u) {
      Vec3 p;
      if (!position_at(timelines[u], tick, &p)) continue;
      p.x() = std::clamp(p.x(), 0.0, site.x_max);
      p.y() = std::clamp(p.y(), 0.0, site.y_max);
      p.z() = std::clamp(p.z(), 0.0, site.z_max);
      if (at_depot_pad(site, p)) continue;  // takeoff/landing pad exemption
      occupied.emplace_back(static_cast<int>(u), voxel_index(site, p));
    }
    for (std::size_t a = 0; a < occupied.size(); ++a) {
      for (std::size_t b = a + 1; b < occupied.size(); ++b) {
        if (occupied[a].second == occupied[b].second) {
          conflicts.push_back({tick, occupied[a].first, occupied[b].first});
        }
      }
    }
  }
  return conflicts;
}

}  // namespace

MissionReport simulate_mission(const FleetPlan& plan, const FleetGraph& graph,
                               const SiteConfig& site, const UavSpec& uav,
                               const Environment& env) {
  MissionReport report;

  // C.3: scheduling exclusivity.
  std::set<int> visited;
  for (const auto& tour : plan.tours) {
    for (int v : tour) {
      if (v <= 0 || v >= static_cast<int>(graph.vertices.size())) {
        report.violations.push_back({"C.1", "tour references invalid vertex"});
        continue;
      }
      if (!visited.insert(v).second) {
        report.violations.push_back(
            {"C.3", "cluster vertex " + std::to_string(v) +
                        " assigned to more than one UAV"});
      }
    }
  }

  const int n_vertices = static_cast<int>(graph.vertices.size());
  auto tour_valid = [&](const std::vector<int>& tour) {
    for (int v : tour) {
      if (v <= 0 || v >= n_vertices) return false;
    }
    return true;
  };

  for (std::size_t u = 0; u < plan.tours.size(); ++u) {
    if (!tour_valid(plan.tours[u])) {
      report.per_uav_avg_power_w.push_back(0.0);
      continue;
    }
    const TourEval ev = evaluate_tour(graph, plan.tours[u]);
    report.total_reward += ev.reward;
    report.per_uav_avg_power_w.push_back(ev.avg_power_w);
    for (const ServedGn& s : ev.served) report.served.push_back(s);
    if (!ev.feasible) {
      report.violations.push_back(
          {"C.1", "UAV " + std::to_string(u) +
                      " cannot return to the depot within the horizon"});
    }
    if (ev.avg_power_w > 1.01 * graph.p_avg_w) {
      report.violations.push_back(
          {"C.4", "UAV " + std::to_string(u) + " mission-average power " +
                      std::to_string(ev.avg_power_w) + " W exceeds cap"});
    }
  }

  // C.2: voxel-time collision checks with altitude-offset repair.
  std::vector<std::vector<Leg>> timelines;
  for (const auto& tour : plan.tours) {
    timelines.push_back(tour_valid(tour) ? build_timeline(graph, tour)
                                         : std::vector<Leg>{});
  }
  auto conflicts = find_conflicts(timelines, site);
  report.collisions_detected = static_cast<int>(conflicts.size());
  if (!conflicts.empty()) {
    std::set<std::pair<int, int>> offset_legs;  // (uav, leg)
    for (const auto& c : conflicts) {
      const int u = std::min(c[1], c[2]);
      for (std::size_t l = 0; l < timelines[u].size(); ++l) {
        Leg& leg = timelines[u][l];
        if (c[0] >= leg.t0 && c[0] <= leg.t1 &&
            offset_legs.insert({u, static_cast<int>(l)}).second) {
          leg.z_offset =
              leg.z_offset + ((leg.hover_pos.z() + site.dz <= site.z_max ||
                               leg.travel)
                                  ? site.dz
                                  : -site.dz);
        }
      }
    }
    auto remaining = find_conflicts(timelines, site);
    report.collisions_repaired =
        report.collisions_detected - static_cast<int>(remaining.size());
    for (const auto& c : remaining) {
      report.violations.push_back(
          {"C.2", "UAVs " + std::to_string(c[1]) + " and " +
                      std::to_string(c[2]) + " share a voxel at t=" +
                      std::to_string(c[0]) + " s"});
    }
    // Re-cost travel legs that were offset.
    for (const auto& [u, l] : offset_legs) {
      Leg& leg = timelines[u][l];
      if (!leg.travel || leg.trajectory.degenerate()) continue;
      std::vector<Vec3> wps = leg.trajectory.waypoints;
      for (std::size_t i = 1; i + 1 < wps.size(); ++i) {
        wps[i].z() = std::clamp(wps[i].z() + leg.z_offset, 0.0, site.z_max);
      }
      const Trajectory recosted =
          make_trajectory(wps, leg.trajectory.speeds, uav, env);
      if (!recosted.degenerate() && !report.per_uav_avg_power_w.empty()) {
        const double extra = recosted.energy_j - leg.trajectory.energy_j;
        const double dur = timelines[u].back().t1;
        if (dur > 0.0) report.per_uav_avg_power_w[u] += extra / dur;
      }
    }
  }
  return report;
}

}  // namespace uavsim
