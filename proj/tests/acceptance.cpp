// Acceptance gate: one pass/fail line per criterion, nonzero exit on failure.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <vector>

#include "uavsim/pipeline.hpp"

using namespace uavsim;
namespace fs = std::filesystem;

namespace {

bool g_all_pass = true;

void report(int number, const std::string& label, bool pass) {
  std::cout << "criterion " << number << " (" << label << "): "
            << (pass ? "pass" : "FAIL") << std::endl;
  g_all_pass = g_all_pass && pass;
}

// ---------------------------------------------------------------- criterion 1
bool hover_power_values() {
  const UavSpec uav{};
  const double full = hover_power(uav);
  const double single = hover_power(uav, {.dedupe_hover_baseline = true});
  return std::abs(full - 3971.46) <= 1e-6 * 3971.46 &&
         std::abs(single - 1985.73) <= 1e-6 * 1985.73;
}

// ---------------------------------------------------------------- criterion 2
bool speed_profile_ordering() {
  const UavSpec uav{};
  const Environment env{};
  const double dt = 0.02, duration = 120.0;
  for (double vbar = 0.0; vbar <= 50.0 + 1e-9; vbar += 5.0) {
    const double amp = std::min(vbar, uav.v_max - vbar);
    const double period = amp > 0.0 ? 2.0 * M_PI * amp / uav.a_max : 1.0;
    VelocityProfile steady, wobble, wobble3d;
    for (double t = 0.0; t <= duration + 1e-9; t += dt) {
      const double v = vbar + amp * std::sin(2.0 * M_PI * t / period);
      steady.times_s.push_back(t);
      steady.v_h.push_back(vbar);
      steady.v_v.push_back(0.0);
      wobble.times_s.push_back(t);
      wobble.v_h.push_back(v);
      wobble.v_v.push_back(0.0);
      wobble3d.times_s.push_back(t);
      wobble3d.v_h.push_back(v);
      wobble3d.v_v.push_back(1.9 * std::sin(2.0 * M_PI * t / 2.5));
    }
    const double p2d_inertial = trajectory_power(steady, uav, env).avg_power_w;
    const double p2d = trajectory_power(wobble, uav, env).avg_power_w;
    const double p3d = trajectory_power(wobble3d, uav, env).avg_power_w;
    if (!(p2d_inertial <= p2d + 1e-9 && p2d <= p3d + 1e-9)) return false;
  }
  return true;
}

// ---------------------------------------------------------------- criterion 3
CMatrix random_channel(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMatrix h(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) h(r, c) = std::complex<double>(n(rng), n(rng));
  }
  return h;
}

bool zf_correctness() {
  Rng rng = make_rng(2024, 3);
  const double p_tx = 0.19953, bw = 5.0e6, n0 = 1.0;
  for (int inst = 0; inst < 100; ++inst) {
    const std::vector<CMatrix> h{random_channel(16, 4, rng),
                                 random_channel(16, 4, rng)};
    const BeamformingDesign d = zf_design(h, 16);
    for (int i = 0; i < 2; ++i) {
      const double signal = (d.combiners[i] * h[i] * d.precoders[i]).squaredNorm();
      const double interf =
          (d.combiners[i] * h[1 - i] * d.precoders[1 - i]).squaredNorm();
      if (!(interf <= 1e-9 * signal)) return false;

      const double rate = instantaneous_rate(d, i, h, p_tx, bw, n0);
      const CMatrix& gamma = d.combiners[i];
      CMatrix j = n0 * gamma * gamma.adjoint();
      const CMatrix hp = h[1 - i] * d.precoders[1 - i];
      j += p_tx * (gamma * hp) * (gamma * hp).adjoint();
      const CMatrix gh = gamma * h[i];
      const CMatrix upsilon =
          CMatrix::Identity(4, 4) + p_tx * gh.adjoint() * j.inverse() * gh *
                                        d.precoders[i] * d.precoders[i].adjoint();
      Eigen::ComplexEigenSolver<CMatrix> es(upsilon);
      std::complex<double> prod(1.0, 0.0);
      for (int k = 0; k < 4; ++k) prod *= es.eigenvalues()[k];
      const double oracle = bw * std::log2(std::max(prod.real(), 1.0));
      if (std::abs(rate - oracle) > 1e-10 * std::max(std::abs(oracle), 1.0)) {
        return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------- criterion 4
bool reward_model() {
  const auto classes = default_traffic_classes();
  for (const TrafficClass& tc : classes) {
    if (std::abs(reward_value(tc, tc.max_latency_s) - tc.priority) > 1e-12) {
      return false;
    }
    double prev = reward_value(tc, 0.0);
    for (double t = 10.0; t <= 3000.0; t += 10.0) {
      const double r = reward_value(tc, t);
      if (!(r < prev)) return false;
      prev = r;
    }
  }
  const TrafficClass& telemetry = classes[0];
  return std::abs(reward_value(telemetry, telemetry.max_latency_s + 60.0) - 10.0) <
         1e-9;
}

// ---------------------------------------------------------------- criterion 5
FleetGraph make_graph(const std::vector<Vec3>& positions,
                      const std::vector<double>& harvests, double horizon) {
  const UavSpec uav{};
  const Environment env{};
  FleetGraph g;
  g.a_u = uav.antenna_count;
  g.horizon_s = horizon;
  g.p_avg_w = uav.p_avg;
  g.hover_power_w = hover_power(uav);
  const auto classes = default_traffic_classes();
  GraphVertex depot;
  g.vertices.push_back(depot);
  for (std::size_t c = 0; c < positions.size(); ++c) {
    GraphVertex v;
    v.id = static_cast<int>(c) + 1;
    v.cluster_id = static_cast<int>(c);
    v.position = positions[c];
    GroundNode gn;
    gn.id = static_cast<int>(c);
    gn.traffic = classes[c % classes.size()];
    v.members.push_back(gn);
    v.services.push_back(
        {gn.id, gn.traffic.payload_bits / harvests[c], harvests[c]});
    g.vertices.push_back(v);
  }
  const int n = static_cast<int>(g.vertices.size());
  g.edges.assign(n, std::vector<GraphEdge>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      g.edges[i][j].trajectory = make_trajectory(
          {g.vertices[i].position, g.vertices[j].position}, {25.0}, uav, env);
    }
  }
  return g;
}

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

bool solver_exactness() {
  Rng rng = make_rng(555, 5);
  std::uniform_real_distribution<double> ux(200.0, 2800.0);
  std::uniform_real_distribution<double> uz(45.0, 105.0);
  std::uniform_real_distribution<double> uh(50.0, 400.0);
  std::uniform_real_distribution<double> ut(400.0, 1500.0);
  std::uniform_int_distribution<int> uc(1, 5);
  std::uniform_int_distribution<int> uu(1, 3);
  for (int inst = 0; inst < 200; ++inst) {
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
    if (!plan.optimal) return false;
    std::vector<double> time(n_uavs, 0.0);
    std::vector<int> pos(n_uavs, 0);
    std::vector<bool> used(g.vertices.size(), false);
    const double oracle = brute_force(g, n_uavs, time, pos, used);
    if (std::abs(plan.total_reward - oracle) >
        1e-9 * std::max(1.0, std::abs(oracle))) {
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------- criterion 6
SwarmConfig acceptance_swarm() {
  SwarmConfig s;
  s.n_sw = 30;
  s.n_ssw = 10;
  s.m_seg = 16;
  s.f_max = 240;
  return s;
}

bool lcso_quality() {
  const UavSpec uav{};
  const Environment env{};
  const SiteConfig site{};
  for (double len : {500.0, 1000.0, 2000.0}) {
    const Edge edge{Vec3(0, 0, 50), Vec3(len, 0, 50)};
    double optimum = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= 500; ++i) {
      optimum = std::min(optimum, len / (uav.v_max * i / 500.0));
    }
    int good = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const Trajectory t =
          lcso_optimize(edge, 0.0, acceptance_swarm(), site, uav, env, seed);
      if (!t.degenerate() && t.duration_s <= 1.05 * optimum) ++good;
    }
    if (good < 9) return false;
  }
  return true;
}

// ---------------------------------------------------------------- criterion 7
bool dual_feasibility() {
  const UavSpec uav{};
  const Environment env{};
  const SiteConfig site{};
  const double p_avg = 4000.0;  // binding cap, above the level-flight floor
  const std::vector<Edge> edges{{Vec3(0, 0, 50), Vec3(500, 0, 50)},
                                {Vec3(0, 0, 50), Vec3(1000, 400, 90)},
                                {Vec3(100, 100, 40), Vec3(2000, 1500, 120)}};
  for (const Edge& e : edges) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const DualResult res =
          dual_ascent(e, p_avg, acceptance_swarm(), site, uav, env, seed);
      if (res.dual.lambda < 0.0) return false;
      if (res.trajectory.degenerate()) return false;
      if (!(res.trajectory.avg_power_w <= 1.01 * p_avg)) return false;
    }
  }
  return true;
}

// -------------------------------------------------------- criteria 8, 9, 10
struct EndToEnd {
  bool ordering = false;
  bool monotone = false;
  bool verify_clean = false;
  bool injections_detected = false;
  fs::path seed1_dir;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

EndToEnd end_to_end(const fs::path& scenario, const fs::path& work) {
  EndToEnd out;
  int wins = 0;
  bool monotone = true;
  bool verify_ok = true;

  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    RunManifest man;
    man.scenario_path = scenario.string();
    man.seed = seed;
    man.literal_delta = true;
    man.out_dir = (work / ("seed_" + std::to_string(seed))).string();
    const ScenarioSpec spec = scenario_for(man);
    const SolverConfig cfg = solver_config(spec, man);
    const PipelineResult pipe = run_pipeline(spec, cfg, seed);
    write_run_artifacts(man.out_dir, spec, man, &pipe, nullptr);
    if (seed == 1) out.seed1_dir = man.out_dir;

    bool beats_all = true;
    for (const char* mode :
         {"static", "voronoi-dist", "voronoi-rx", "igd", "ibf"}) {
      RewardOptions opts;
      opts.literal_delta = true;
      const BaselineResult b = run_baseline(spec, mode, opts, seed);
      if (b.total_reward > pipe.report.total_reward) beats_all = false;
    }
    if (beats_all) ++wins;

    // Fleet-size sweep on the fixed cluster graph.
    double prev = -1.0;
    for (int u : {2, 3, 4}) {
      const FleetPlan plan = bnb_mtsp(pipe.graph, u, cfg.max_nodes);
      if (plan.total_reward < prev - 1e-9) monotone = false;
      prev = plan.total_reward;
    }

    std::ostringstream vlog;
    if (!verify_run(man.out_dir, vlog).ok()) verify_ok = false;
  }
  out.ordering = wins >= 4;
  out.monotone = monotone;

  // Injected violations on a copy of the seed-1 run.
  bool inj = true;
  {
    const fs::path dup = work / "inject_dup";
    fs::remove_all(dup);
    fs::copy(out.seed1_dir, dup, fs::copy_options::recursive);
    nlohmann::json plan = nlohmann::json::parse(slurp(dup / "plan.json"));
    plan["tours"] = nlohmann::json::array(
        {nlohmann::json::array({1}), nlohmann::json::array({1}),
         nlohmann::json::array()});
    std::ofstream(dup / "plan.json", std::ios::binary) << plan.dump(2) << "\n";
    std::ostringstream vlog;
    const VerifyOutcome v = verify_run(dup.string(), vlog);
    if (!(v.have_artifacts && !v.c3)) inj = false;
  }
  {
    const fs::path cut = work / "inject_pavg";
    fs::remove_all(cut);
    fs::copy(out.seed1_dir, cut, fs::copy_options::recursive);
    nlohmann::json man = nlohmann::json::parse(slurp(cut / "manifest.json"));
    man["p_avg"] = 500.0;
    std::ofstream(cut / "manifest.json", std::ios::binary) << man.dump(2) << "\n";
    std::ostringstream vlog;
    const VerifyOutcome v = verify_run(cut.string(), vlog);
    if (!(v.have_artifacts && !v.c4)) inj = false;
  }
  out.verify_clean = verify_ok;
  out.injections_detected = inj;
  return out;
}

bool determinism(const fs::path& scenario, const fs::path& work) {
#ifdef UAVSIM_CLI_PATH
  const std::string cli = UAVSIM_CLI_PATH;
  const fs::path a = work / "det_a";
  const fs::path b = work / "det_b";
  for (const fs::path& dir : {a, b}) {
    const std::string cmd = cli + " --scenario " + scenario.string() +
                            " --seed 1 --literal-delta --out " + dir.string() +
                            " > /dev/null 2>&1";
    if (std::system(cmd.c_str()) != 0) return false;
  }
  const std::string sa = slurp(a / "summary.json");
  const std::string sb = slurp(b / "summary.json");
  return !sa.empty() && sa == sb;
#else
  return false;
#endif
}

}  // namespace

int main() {
  const fs::path scenario = fs::path(TEST_DATA_DIR) / "acceptance.json";
  const fs::path work = fs::temp_directory_path() / "uavsim_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  report(1, "hover power constants", hover_power_values());
  report(2, "speed profile power ordering", speed_profile_ordering());
  report(3, "zero-forcing correctness", zf_correctness());
  report(4, "reward discount model", reward_model());
  report(5, "scheduler exactness vs enumeration", solver_exactness());
  report(6, "trajectory search quality", lcso_quality());
  report(7, "power-cap dual feasibility", dual_feasibility());
  const EndToEnd e2e = end_to_end(scenario, work);
  report(8, "end-to-end ordering and fleet monotonicity",
         e2e.ordering && e2e.monotone);
  report(9, "byte-identical repeated runs", determinism(scenario, work));
  report(10, "constraint audit and injected violations",
         e2e.verify_clean && e2e.injections_detected);

  return g_all_pass ? 0 : 1;
}
