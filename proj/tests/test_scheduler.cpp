#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "uavsim/scheduler.hpp"

using namespace uavsim;

namespace {

const UavSpec kUav{};
const Environment kEnv{};
const SiteConfig kSite{};

// Synthetic complete graph: one GN per cluster vertex, straight constant-speed
// edges, prescribed harvest times. Keeps scheduling tests independent of the
// trajectory search.
FleetGraph make_graph(const std::vector<Vec3>& positions,
                      const std::vector<double>& harvests, double horizon,
                      double speed = 25.0) {
  FleetGraph g;
  g.a_u = kUav.antenna_count;
  g.horizon_s = horizon;
  g.p_avg_w = kUav.p_avg;
  g.hover_power_w = hover_power(kUav);
  const auto classes = default_traffic_classes();

  GraphVertex depot;
  depot.id = 0;
  depot.position = Vec3(0, 0, 0);
  g.vertices.push_back(depot);
  for (std::size_t c = 0; c < positions.size(); ++c) {
    GraphVertex v;
    v.id = static_cast<int>(c) + 1;
    v.cluster_id = static_cast<int>(c);
    v.position = positions[c];
    GroundNode gn;
    gn.id = static_cast<int>(c);
    gn.position = Vec3(positions[c].x(), positions[c].y(), 0.0);
    gn.traffic = classes[c % classes.size()];
    v.members.push_back(gn);
    GnService s;
    s.gn_id = gn.id;
    s.harvest_time_s = harvests[c];
    s.mean_rate_bps = gn.traffic.payload_bits / harvests[c];
    v.services.push_back(s);
    g.vertices.push_back(v);
  }
  const int n = static_cast<int>(g.vertices.size());
  g.edges.assign(n, std::vector<GraphEdge>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      g.edges[i][j].trajectory = make_trajectory(
          {g.vertices[i].position, g.vertices[j].position}, {speed}, kUav, kEnv);
    }
  }
  return g;
}

// Exhaustive scheduler oracle: every (cluster, UAV) extension sequence.
double brute_force(const FleetGraph& g, int n_uavs, std::vector<double>& time,
                   std::vector<int>& pos, std::vector<bool>& used) {
  double best = 0.0;
  for (std::size_t v = 1; v < g.vertices.size(); ++v) {
    if (used[v]) continue;
    for (int u = 0; u < n_uavs; ++u) {
      const GraphVertex& vert = g.vertices[v];
      const double arrival = time[u] + g.edges[pos[u]][v].travel_time();
      const ClusterServiceResult r =
          serve_cluster(vert.members, vert.services, arrival, g.horizon_s,
                        g.a_u, g.reward_opts);
      if (r.end_time_s + g.edges[v][0].travel_time() > g.horizon_s) continue;
      const double saved_t = time[u];
      const int saved_p = pos[u];
      time[u] = r.end_time_s;
      pos[u] = static_cast<int>(v);
      used[v] = true;
      best = std::max(best,
                      r.total_reward + brute_force(g, n_uavs, time, pos, used));
      used[v] = false;
      pos[u] = saved_p;
      time[u] = saved_t;
    }
  }
  return best;
}

double brute_force(const FleetGraph& g, int n_uavs) {
  std::vector<double> time(n_uavs, 0.0);
  std::vector<int> pos(n_uavs, 0);
  std::vector<bool> used(g.vertices.size(), false);
  return brute_force(g, n_uavs, time, pos, used);
}

}  // namespace

TEST_CASE("graph construction wires vertices and symmetric edge costs") {
  SwarmConfig swarm;
  swarm.n_sw = 6;
  swarm.n_ssw = 3;
  swarm.m_seg = 4;
  swarm.f_max = 30;
  SolverConfig cfg;
  cfg.swarm = swarm;

  std::vector<ServicePosition> sps(2);
  sps[0].cluster_id = 0;
  sps[0].position = Vec3(300, 0, 50);
  sps[1].cluster_id = 1;
  sps[1].position = Vec3(0, 400, 80);
  std::vector<std::vector<GroundNode>> members(2);
  GroundNode g0;
  g0.id = 0;
  g0.traffic = default_traffic_classes()[0];
  members[0].push_back(g0);
  GroundNode g1 = g0;
  g1.id = 1;
  members[1].push_back(g1);
  sps[0].services = {{0, 1e6, 10.0}};
  sps[1].services = {{1, 1e6, 10.0}};

  const FleetGraph a = build_graph(sps, members, Vec3(0, 0, 0), kSite, kUav,
                                   kEnv, 3000.0, cfg, 21);
  REQUIRE(a.vertices.size() == 3);
  CHECK(a.vertices[0].id == 0);
  CHECK(a.vertices[0].cluster_id == -1);
  CHECK(a.vertices[1].position == sps[0].position);
  CHECK(a.hover_power_w == doctest::Approx(hover_power(kUav)));
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      CHECK(a.edges[i][j].travel_time() ==
            doctest::Approx(a.edges[j][i].travel_time()));
      CHECK(a.edges[i][j].trajectory.waypoints.front() == a.vertices[i].position);
      CHECK(a.edges[i][j].trajectory.waypoints.back() == a.vertices[j].position);
    }
  }
  const FleetGraph b = build_graph(sps, members, Vec3(0, 0, 0), kSite, kUav,
                                   kEnv, 3000.0, cfg, 21);
  CHECK(a.edges[0][1].travel_time() == b.edges[0][1].travel_time());
  CHECK(a.edges[1][2].trajectory.energy_j == b.edges[1][2].trajectory.energy_j);
  CHECK_THROWS_AS(build_graph({}, {}, Vec3(0, 0, 0), kSite, kUav, kEnv, 3000.0,
                              cfg, 1),
                  std::invalid_argument);
}

TEST_CASE("tour replay matches a hand-computed timeline") {
  const FleetGraph g = make_graph({Vec3(500, 0, 0)}, {100.0}, 3000.0, 25.0);
  const TourEval ev = evaluate_tour(g, {1});
  const double travel = 500.0 / 25.0;  // 20 s each way
  CHECK(ev.feasible);
  REQUIRE(ev.served.size() == 1);
  CHECK(ev.served[0].start_s == doctest::Approx(travel));
  CHECK(ev.served[0].completion_s == doctest::Approx(travel + 100.0));
  CHECK(ev.end_time_s == doctest::Approx(2.0 * travel + 100.0));
  CHECK(ev.hover_time_s == doctest::Approx(100.0));
  const TrafficClass& tc = g.vertices[1].members[0].traffic;
  CHECK(ev.reward == doctest::Approx(reward_value(tc, travel + 100.0)));
  const double e_edge = g.edges[0][1].trajectory.energy_j;
  CHECK(ev.flight_energy_j == doctest::Approx(2.0 * e_edge));
  CHECK(ev.avg_power_w ==
        doctest::Approx((2.0 * e_edge + g.hover_power_w * 100.0) / ev.end_time_s));
  const TourEval idle = evaluate_tour(g, {});
  CHECK(idle.reward == 0.0);
  CHECK(idle.end_time_s == 0.0);
}

TEST_CASE("a single reachable cluster is scheduled") {
  const FleetGraph g = make_graph({Vec3(400, 300, 60)}, {120.0}, 3000.0);
  const FleetPlan plan = bnb_mtsp(g, 1);
  REQUIRE(plan.tours.size() == 1);
  CHECK(plan.tours[0] == std::vector<int>{1});
  CHECK(plan.optimal);
  CHECK(plan.total_reward == doctest::Approx(evaluate_tour(g, {1}).reward));
}

TEST_CASE("unreachable clusters produce an empty plan") {
  // 2 x 80 s of travel plus 100 s of service exceeds a 150 s horizon.
  const FleetGraph g = make_graph({Vec3(2000, 0, 0)}, {100.0}, 150.0, 25.0);
  const FleetPlan plan = bnb_mtsp(g, 2);
  CHECK(plan.total_reward == 0.0);
  for (const auto& tour : plan.tours) CHECK(tour.empty());
}

TEST_CASE("an unaffordable hover power cap empties the plan") {
  FleetGraph g = make_graph({Vec3(400, 0, 60)}, {50.0}, 3000.0);
  g.p_avg_w = 100.0;  // hovering alone would violate the cap
  const FleetPlan plan = bnb_mtsp(g, 1);
  CHECK(plan.total_reward == 0.0);
  CHECK(plan.tours[0].empty());
  CHECK_THROWS_AS(bnb_mtsp(g, 0), std::invalid_argument);
}

TEST_CASE("branch and bound matches exhaustive enumeration") {
  Rng rng = make_rng(7, 3);
  std::uniform_real_distribution<double> ux(200.0, 2800.0);
  std::uniform_real_distribution<double> uz(45.0, 105.0);
  std::uniform_real_distribution<double> uh(50.0, 400.0);
  std::uniform_real_distribution<double> ut(400.0, 1500.0);
  std::uniform_int_distribution<int> uc(2, 5);
  std::uniform_int_distribution<int> uu(1, 3);
  for (int inst = 0; inst < 12; ++inst) {
    const int n_clusters = uc(rng);
    const int n_uavs = uu(rng);
    std::vector<Vec3> positions;
    std::vector<double> harvests;
    for (int c = 0; c < n_clusters; ++c) {
      positions.emplace_back(ux(rng), ux(rng), uz(rng));
      harvests.push_back(uh(rng));
    }
    const FleetGraph g = make_graph(positions, harvests, ut(rng));
    const FleetPlan plan = bnb_mtsp(g, n_uavs);
    REQUIRE(plan.optimal);
    const double oracle = brute_force(g, n_uavs);
    CHECK(plan.total_reward == doctest::Approx(oracle).epsilon(1e-9));
    // The reported tours replay to the reported reward.
    double replay = 0.0;
    for (const auto& tour : plan.tours) replay += evaluate_tour(g, tour).reward;
    CHECK(replay == doctest::Approx(plan.total_reward).epsilon(1e-9));
  }
}

TEST_CASE("fleet reward is non-decreasing in the fleet size") {
  Rng rng = make_rng(19, 2);
  std::uniform_real_distribution<double> ux(200.0, 2600.0);
  std::vector<Vec3> positions;
  std::vector<double> harvests{150, 220, 90, 300, 120};
  for (int c = 0; c < 5; ++c) positions.emplace_back(ux(rng), ux(rng), 75.0);
  const FleetGraph g = make_graph(positions, harvests, 900.0);
  double prev = -1.0;
  for (int u = 1; u <= 4; ++u) {
    const FleetPlan plan = bnb_mtsp(g, u);
    REQUIRE(plan.optimal);
    CHECK(plan.total_reward >= prev);
    prev = plan.total_reward;
  }
}

TEST_CASE("an exhausted node budget is reported as non-optimal") {
  const FleetGraph g = make_graph(
      {Vec3(400, 200, 60), Vec3(900, 700, 60), Vec3(1400, 300, 60)},
      {80.0, 80.0, 80.0}, 2000.0);
  const FleetPlan plan = bnb_mtsp(g, 2, /*max_nodes=*/2);
  CHECK_FALSE(plan.optimal);
}

TEST_CASE("edge positions interpolate and clamp") {
  const Trajectory t = make_trajectory(
      {Vec3(0, 0, 0), Vec3(100, 0, 0), Vec3(100, 0, 50)}, {10.0, 5.0}, kUav, kEnv);
  CHECK(trajectory_position(t, -1.0) == Vec3(0, 0, 0));
  CHECK(trajectory_position(t, 5.0) == Vec3(50, 0, 0));
  CHECK(trajectory_position(t, 10.0) == Vec3(100, 0, 0));
  CHECK(trajectory_position(t, 15.0) == Vec3(100, 0, 25));
  CHECK(trajectory_position(t, 999.0) == Vec3(100, 0, 50));
  Trajectory hover;
  hover.waypoints = {Vec3(7, 7, 7)};
  CHECK(trajectory_position(hover, 3.0) == Vec3(7, 7, 7));
}

TEST_CASE("simulation agrees with the solver on reward and power") {
  const FleetGraph g = make_graph(
      {Vec3(600, 300, 60), Vec3(1500, 1200, 90)}, {120.0, 200.0}, 2500.0);
  const FleetPlan plan = bnb_mtsp(g, 2);
  const MissionReport rep = simulate_mission(plan, g, kSite, kUav, kEnv);
  CHECK(rep.ok());
  CHECK(rep.total_reward == doctest::Approx(plan.total_reward));
  REQUIRE(rep.per_uav_avg_power_w.size() == 2);
  for (double p : rep.per_uav_avg_power_w) CHECK(p <= 1.01 * g.p_avg_w);
}

TEST_CASE("duplicated vertices across tours trigger the exclusivity check") {
  const FleetGraph g = make_graph({Vec3(500, 0, 60)}, {100.0}, 3000.0);
  FleetPlan plan;
  plan.tours = {{1}, {1}};
  const MissionReport rep = simulate_mission(plan, g, kSite, kUav, kEnv);
  REQUIRE_FALSE(rep.ok());
  bool saw_c3 = false;
  for (const auto& v : rep.violations) saw_c3 = saw_c3 || v.constraint == "C.3";
  CHECK(saw_c3);
}

TEST_CASE("invalid vertex ids and horizon overruns are flagged") {
  const FleetGraph g = make_graph({Vec3(500, 0, 60)}, {100.0}, 3000.0);
  FleetPlan bad;
  bad.tours = {{4}};
  const MissionReport rep = simulate_mission(bad, g, kSite, kUav, kEnv);
  bool saw_c1 = false;
  for (const auto& v : rep.violations) saw_c1 = saw_c1 || v.constraint == "C.1";
  CHECK(saw_c1);

  const FleetGraph tight = make_graph({Vec3(2000, 0, 60)}, {100.0}, 150.0);
  FleetPlan forced;
  forced.tours = {{1}};
  const MissionReport rep2 = simulate_mission(forced, tight, kSite, kUav, kEnv);
  bool saw_horizon = false;
  for (const auto& v : rep2.violations) {
    saw_horizon = saw_horizon || (v.constraint == "C.1" &&
                                  v.detail.find("horizon") != std::string::npos);
  }
  CHECK(saw_horizon);
}

TEST_CASE("co-located tours collide and are repaired with an altitude offset") {
  // Two distinct cluster vertices share a hover voxel: both UAVs travel the
  // same chord and hover in the same place over the same interval.
  const FleetGraph g = make_graph(
      {Vec3(105, 105, 45), Vec3(105, 105, 45)}, {200.0, 200.0}, 3000.0);
  FleetPlan plan;
  plan.tours = {{1}, {2}};
  const MissionReport rep = simulate_mission(plan, g, kSite, kUav, kEnv);
  CHECK(rep.collisions_detected > 0);
  CHECK(rep.collisions_repaired == rep.collisions_detected);
  for (const auto& v : rep.violations) CHECK(v.constraint != "C.2");
}

TEST_CASE("well-separated tours report no collisions") {
  const FleetGraph g = make_graph(
      {Vec3(600, 100, 45), Vec3(100, 900, 105)}, {150.0, 150.0}, 3000.0);
  FleetPlan plan;
  plan.tours = {{1}, {2}};
  const MissionReport rep = simulate_mission(plan, g, kSite, kUav, kEnv);
  CHECK(rep.collisions_detected == 0);
  CHECK(rep.ok());
}
