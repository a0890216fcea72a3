#include "uavsim/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "uavsim/rng.hpp"

namespace uavsim {

namespace fs = std::filesystem;
using nlohmann::json;

ScenarioSpec scenario_for(const RunManifest& man) {
  ScenarioSpec spec = man.scenario_path.empty()
                          ? load_scenario("{}")
                          : load_scenario_file(man.scenario_path);
  spec.seed = man.seed;
  if (man.mc_samples > 0) spec.mc_samples = man.mc_samples;
  instantiate(spec);
  return spec;
}

SolverConfig solver_config(const ScenarioSpec& spec, const RunManifest& man) {
  SolverConfig cfg;
  cfg.swarm = spec.swarm;
  cfg.lcso.cost_mode = man.cost == "power" ? CostMode::Power : CostMode::Time;
  cfg.lcso.p_avg_w = spec.uav_template.p_avg;
  cfg.reward.literal_delta = man.literal_delta;
  cfg.mc_samples = spec.mc_samples;
  return cfg;
}

PipelineResult run_pipeline(const ScenarioSpec& spec, const SolverConfig& cfg,
                            std::uint64_t seed) {
  PipelineResult result;
  result.clustering =
      kmeans(gn_points(spec.gns), spec.clusters(), derive_seed(seed, 0x6b6d));
  const auto sets = result.clustering.members();
  for (std::size_t c = 0; c < sets.size(); ++c) {
    std::vector<GroundNode> members;
    for (int gi : sets[c]) members.push_back(spec.gns[gi]);
    const auto voxels = bounding_box_voxels(spec.site, members);
    result.positions.push_back(fine_search(
        voxels, spec.site, members, static_cast<int>(c),
        spec.uav_template.antenna_count, spec.env, cfg.mc_samples,
        derive_seed(seed, 0x6673, c), spec.mission_duration_s, cfg.reward));
    result.cluster_members.push_back(std::move(members));
  }
  result.graph = build_graph(result.positions, result.cluster_members,
                             spec.site.depot_positions.front(), spec.site,
                             spec.uav_template, spec.env,
                             spec.mission_duration_s, cfg, seed);
  result.plan = bnb_mtsp(result.graph, spec.num_uavs, cfg.max_nodes);
  result.report = simulate_mission(result.plan, result.graph, spec.site,
                                   spec.uav_template, spec.env);
  return result;
}

BaselineResult run_baseline(const ScenarioSpec& spec, const std::string& mode,
                            const RewardOptions& opts, std::uint64_t seed) {
  if (mode == "voronoi-dist") {
    return voronoi_decomposition(spec, VoronoiMetric::Distance, opts, seed);
  }
  if (mode == "voronoi-rx") {
    return voronoi_decomposition(spec, VoronoiMetric::RxPower, opts, seed);
  }
  // Baselines always deploy one hover position per UAV (C = U).
  const Clustering clustering =
      kmeans(gn_points(spec.gns), spec.num_uavs, derive_seed(seed, 0x6b6d));
  if (mode == "static") return static_deployment(spec, clustering, opts, seed);
  if (mode == "igd") return igd_deployment(spec, clustering, opts, seed);
  if (mode == "ibf") return ibf_deployment(spec, clustering, opts, seed);
  throw std::invalid_argument("unknown mode: " + mode);
}

namespace {

json to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }
Vec3 vec3_from(const json& j) { return Vec3(j[0], j[1], j[2]); }

json to_json(const TrafficClass& tc) {
  return {{"name", tc.name},
          {"priority", tc.priority},
          {"max_latency_s", tc.max_latency_s},
          {"payload_bits", tc.payload_bits},
          {"discount", tc.discount}};
}

TrafficClass traffic_from(const json& j) {
  TrafficClass tc;
  tc.name = j.at("name");
  tc.priority = j.at("priority");
  tc.max_latency_s = j.at("max_latency_s");
  tc.payload_bits = j.at("payload_bits");
  tc.discount = j.at("discount");
  return tc;
}

json to_json(const UavSpec& u) {
  return {{"antennas", u.antenna_count}, {"c0", u.c0},       {"c1", u.c1},
          {"c2", u.c2},                  {"c3", u.c3},       {"c4", u.c4},
          {"weight_n", u.weight_n},      {"fuselage_drag", u.fuselage_drag},
          {"rotor_solidity", u.rotor_solidity},
          {"rotor_disc_area", u.rotor_disc_area},
          {"v_max", u.v_max},            {"a_max", u.a_max}, {"p_avg", u.p_avg}};
}

UavSpec uav_from(const json& j) {
  UavSpec u;
  u.antenna_count = j.at("antennas");
  u.c0 = j.at("c0");
  u.c1 = j.at("c1");
  u.c2 = j.at("c2");
  u.c3 = j.at("c3");
  u.c4 = j.at("c4");
  u.weight_n = j.at("weight_n");
  u.fuselage_drag = j.at("fuselage_drag");
  u.rotor_solidity = j.at("rotor_solidity");
  u.rotor_disc_area = j.at("rotor_disc_area");
  u.v_max = j.at("v_max");
  u.a_max = j.at("a_max");
  u.p_avg = j.at("p_avg");
  return u;
}

json to_json(const SiteConfig& s) {
  json depots = json::array();
  for (const Vec3& d : s.depot_positions) depots.push_back(to_json(d));
  return {{"x_max", s.x_max}, {"y_max", s.y_max}, {"z_max", s.z_max},
          {"dx", s.dx},       {"dy", s.dy},       {"dz", s.dz},
          {"depots", depots}};
}

SiteConfig site_from(const json& j) {
  SiteConfig s;
  s.x_max = j.at("x_max");
  s.y_max = j.at("y_max");
  s.z_max = j.at("z_max");
  s.dx = j.at("dx");
  s.dy = j.at("dy");
  s.dz = j.at("dz");
  s.depot_positions.clear();
  for (const auto& d : j.at("depots")) s.depot_positions.push_back(vec3_from(d));
  return s;
}

json to_json(const Environment& e) {
  return {{"beta0", e.beta0},
          {"alpha_los", e.alpha_los},
          {"alpha_nlos", e.alpha_nlos},
          {"kappa_nlos", e.kappa_nlos},
          {"z1", e.z1},
          {"z2", e.z2},
          {"k1", e.k1},
          {"k2", e.k2},
          {"bandwidth_hz", e.bandwidth_hz},
          {"noise_power", e.noise_power},
          {"tx_power_eff", e.tx_power_eff},
          {"gravity", e.gravity},
          {"air_density", e.air_density}};
}

Environment env_from(const json& j) {
  Environment e;
  e.beta0 = j.at("beta0");
  e.alpha_los = j.at("alpha_los");
  e.alpha_nlos = j.at("alpha_nlos");
  e.kappa_nlos = j.at("kappa_nlos");
  e.z1 = j.at("z1");
  e.z2 = j.at("z2");
  e.k1 = j.at("k1");
  e.k2 = j.at("k2");
  e.bandwidth_hz = j.at("bandwidth_hz");
  e.noise_power = j.at("noise_power");
  e.tx_power_eff = j.at("tx_power_eff");
  e.gravity = j.at("gravity");
  e.air_density = j.at("air_density");
  return e;
}

json plan_to_json(const ScenarioSpec& spec, const PipelineResult& pipe) {
  json vertices = json::array();
  for (const GraphVertex& v : pipe.graph.vertices) {
    json members = json::array();
    json services = json::array();
    for (std::size_t m = 0; m < v.members.size(); ++m) {
      members.push_back({{"id", v.members[m].id},
                         {"antennas", v.members[m].antenna_count},
                         {"position", to_json(v.members[m].position)},
                         {"traffic", to_json(v.members[m].traffic)}});
      services.push_back({{"gn_id", v.services[m].gn_id},
                          {"mean_rate_bps", v.services[m].mean_rate_bps},
                          {"harvest_time_s", v.services[m].harvest_time_s}});
    }
    vertices.push_back({{"id", v.id},
                        {"cluster_id", v.cluster_id},
                        {"position", to_json(v.position)},
                        {"members", members},
                        {"services", services}});
  }
  json edges = json::array();
  const int n = static_cast<int>(pipe.graph.vertices.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const GraphEdge& e = pipe.graph.edges[i][j];
      json wps = json::array();
      for (const Vec3& w : e.trajectory.waypoints) wps.push_back(to_json(w));
      edges.push_back({{"i", i},
                       {"j", j},
                       {"lambda", e.lambda},
                       {"waypoints", wps},
                       {"speeds", e.trajectory.speeds}});
    }
  }
  return {{"site", to_json(spec.site)},
          {"uav", to_json(spec.uav_template)},
          {"environment", to_json(spec.env)},
          {"a_u", pipe.graph.a_u},
          {"horizon_s", pipe.graph.horizon_s},
          {"p_avg_w", pipe.graph.p_avg_w},
          {"hover_power_w", pipe.graph.hover_power_w},
          {"literal_delta", pipe.graph.reward_opts.literal_delta},
          {"vertices", vertices},
          {"edges", edges},
          {"tours", pipe.plan.tours},
          {"total_reward", pipe.plan.total_reward}};
}

struct LoadedPlan {
  SiteConfig site;
  UavSpec uav;
  Environment env;
  FleetGraph graph;
  FleetPlan plan;
};

LoadedPlan plan_from_json(const json& j) {
  LoadedPlan lp;
  lp.site = site_from(j.at("site"));
  lp.uav = uav_from(j.at("uav"));
  lp.env = env_from(j.at("environment"));
  lp.graph.a_u = j.at("a_u");
  lp.graph.horizon_s = j.at("horizon_s");
  lp.graph.p_avg_w = j.at("p_avg_w");
  lp.graph.hover_power_w = j.at("hover_power_w");
  lp.graph.reward_opts.literal_delta = j.at("literal_delta");
  for (const auto& vj : j.at("vertices")) {
    GraphVertex v;
    v.id = vj.at("id");
    v.cluster_id = vj.at("cluster_id");
    v.position = vec3_from(vj.at("position"));
    for (const auto& mj : vj.at("members")) {
      GroundNode gn;
      gn.id = mj.at("id");
      gn.antenna_count = mj.at("antennas");
      gn.position = vec3_from(mj.at("position"));
      gn.traffic = traffic_from(mj.at("traffic"));
      v.members.push_back(gn);
    }
    for (const auto& sj : vj.at("services")) {
      GnService s;
      s.gn_id = sj.at("gn_id");
      s.mean_rate_bps = sj.at("mean_rate_bps");
      s.harvest_time_s = sj.at("harvest_time_s");
      v.services.push_back(s);
    }
    lp.graph.vertices.push_back(v);
  }
  const int n = static_cast<int>(lp.graph.vertices.size());
  lp.graph.edges.assign(n, std::vector<GraphEdge>(n));
  for (const auto& ej : j.at("edges")) {
    const int i = ej.at("i");
    const int k = ej.at("j");
    std::vector<Vec3> wps;
    for (const auto& w : ej.at("waypoints")) wps.push_back(vec3_from(w));
    std::vector<double> speeds = ej.at("speeds").get<std::vector<double>>();
    GraphEdge fwd;
    fwd.lambda = ej.at("lambda");
    fwd.trajectory = make_trajectory(wps, speeds, lp.uav, lp.env);
    GraphEdge rev = fwd;
    std::reverse(rev.trajectory.waypoints.begin(), rev.trajectory.waypoints.end());
    std::reverse(rev.trajectory.speeds.begin(), rev.trajectory.speeds.end());
    lp.graph.edges[i][k] = fwd;
    lp.graph.edges[k][i] = rev;
  }
  lp.plan.tours = j.at("tours").get<std::vector<std::vector<int>>>();
  lp.plan.total_reward = j.at("total_reward");
  return lp;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string tour_string(const std::vector<int>& tour) {
  std::string s = "0";
  for (int v : tour) s += "->" + std::to_string(v);
  s += "->0";
  return s;
}

}  // namespace

void write_run_artifacts(const std::string& out_dir, const ScenarioSpec& spec,
                         const RunManifest& man, const PipelineResult* pipeline,
                         const BaselineResult* baseline) {
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);

  double total_reward = 0.0;
  int served_count = 0;
  std::vector<double> per_uav_power;
  std::vector<ServedGn> served;
  if (pipeline) {
    total_reward = pipeline->report.total_reward;
    per_uav_power = pipeline->report.per_uav_avg_power_w;
    served = pipeline->report.served;
  } else {
    total_reward = baseline->total_reward;
    per_uav_power = baseline->per_uav_power_w;
    served = baseline->served;
  }
  served_count = static_cast<int>(served.size());

  // results.csv: one row per GN.
  {
    std::ostringstream csv;
    csv << "gn,class,delta_s,omega\n";
    std::vector<const ServedGn*> by_gn(spec.gns.size(), nullptr);
    for (const ServedGn& s : served) {
      if (s.gn_id >= 0 && s.gn_id < static_cast<int>(by_gn.size())) {
        by_gn[s.gn_id] = &s;
      }
    }
    for (std::size_t g = 0; g < spec.gns.size(); ++g) {
      csv << g << ',' << spec.gns[g].traffic.name << ',';
      if (by_gn[g]) {
        csv << (by_gn[g]->completion_s - by_gn[g]->start_s) << ','
            << by_gn[g]->reward << '\n';
      } else {
        csv << "-1,0\n";
      }
    }
    write_text(dir / "results.csv", csv.str());
  }

  // fleet.csv: one row per UAV.
  {
    std::ostringstream csv;
    csv << "uav,avg_power_w,tour\n";
    for (std::size_t u = 0; u < per_uav_power.size(); ++u) {
      csv << u << ',' << per_uav_power[u] << ',';
      if (pipeline) {
        csv << tour_string(pipeline->plan.tours[u]);
      } else {
        const Vec3& p = baseline->uav_positions[u];
        csv << "hover(" << p.x() << ';' << p.y() << ';' << p.z() << ')';
      }
      csv << '\n';
    }
    write_text(dir / "fleet.csv", csv.str());
  }

  {
    json summary = {{"total_reward", total_reward},
                    {"per_uav_avg_power", per_uav_power},
                    {"served_count", served_count},
                    {"mode", man.mode},
                    {"seed", man.seed}};
    write_text(dir / "summary.json", summary.dump(2) + "\n");
  }

  {
    json manifest = {{"scenario", man.scenario_path},
                     {"seed", man.seed},
                     {"mode", man.mode},
                     {"literal_delta", man.literal_delta},
                     {"cost", man.cost},
                     {"mc_samples", spec.mc_samples},
                     {"p_avg", spec.uav_template.p_avg},
                     {"uavs", spec.num_uavs}};
    write_text(dir / "manifest.json", manifest.dump(2) + "\n");
  }

  if (pipeline) {
    write_text(dir / "plan.json", plan_to_json(spec, *pipeline).dump(2) + "\n");
  }
}

VerifyOutcome verify_run(const std::string& out_dir, std::ostream& log) {
  VerifyOutcome out;
  const fs::path dir(out_dir);
  if (!fs::exists(dir / "plan.json") || !fs::exists(dir / "manifest.json")) {
    log << "verify: missing artifacts in " << out_dir << "\n";
    return out;
  }
  std::ifstream plan_in(dir / "plan.json");
  std::ifstream man_in(dir / "manifest.json");
  json plan_j = json::parse(plan_in);
  json man_j = json::parse(man_in);
  LoadedPlan lp = plan_from_json(plan_j);
  out.have_artifacts = true;
  // The manifest's power cap is authoritative for the audit.
  if (man_j.contains("p_avg")) {
    lp.graph.p_avg_w = man_j.at("p_avg");
    lp.uav.p_avg = lp.graph.p_avg_w;
  }
  out.report = simulate_mission(lp.plan, lp.graph, lp.site, lp.uav, lp.env);
  out.c1 = out.c2 = out.c3 = out.c4 = true;
  for (const ConstraintViolation& v : out.report.violations) {
    if (v.constraint == "C.1") out.c1 = false;
    if (v.constraint == "C.2") out.c2 = false;
    if (v.constraint == "C.3") out.c3 = false;
    if (v.constraint == "C.4") out.c4 = false;
  }
  auto line = [&](const char* name, bool pass) {
    log << name << ": " << (pass ? "pass" : "FAIL") << "\n";
  };
  line("C.1 depot start/end", out.c1);
  line("C.2 collision avoidance", out.c2);
  line("C.3 scheduling exclusivity", out.c3);
  line("C.4 average power", out.c4);
  for (const ConstraintViolation& v : out.report.violations) {
    log << "  " << v.constraint << ": " << v.detail << "\n";
  }
  return out;
}

namespace {

int run_one(const RunManifest& man, const ScenarioSpec& spec,
            std::ostream& log) {
  if (man.mode == "pipeline") {
    const SolverConfig cfg = solver_config(spec, man);
    const PipelineResult result = run_pipeline(spec, cfg, spec.seed);
    write_run_artifacts(man.out_dir, spec, man, &result, nullptr);
    log << man.out_dir << ": total_reward=" << result.report.total_reward
        << " served=" << result.report.served.size() << "\n";
    if (!result.report.ok()) {
      for (const auto& v : result.report.violations) {
        log << "  violation " << v.constraint << ": " << v.detail << "\n";
      }
    }
  } else {
    RewardOptions opts;
    opts.literal_delta = man.literal_delta;
    const BaselineResult result = run_baseline(spec, man.mode, opts, spec.seed);
    write_run_artifacts(man.out_dir, spec, man, nullptr, &result);
    log << man.out_dir << ": [" << result.scheme
        << "] total_reward=" << result.total_reward << "\n";
  }
  return 0;
}

}  // namespace

int run_manifest(const RunManifest& man, std::ostream& log) {
  try {
    ScenarioSpec base = scenario_for(man);
    if (man.sweep_pavg.empty() && man.sweep_uavs.empty()) {
      return run_one(man, base, log);
    }
    std::ostringstream sweep_csv;
    sweep_csv << "axis,value,total_reward,served_count\n";
    auto run_point = [&](const std::string& axis, double value,
                         ScenarioSpec spec, const std::string& tag) {
      RunManifest sub = man;
      sub.out_dir = (fs::path(man.out_dir) / tag).string();
      sub.sweep_pavg.clear();
      sub.sweep_uavs.clear();
      instantiate(spec);
      run_one(sub, spec, log);
      std::ifstream in(fs::path(sub.out_dir) / "summary.json");
      const json summary = json::parse(in);
      sweep_csv << axis << ',' << value << ','
                << summary.at("total_reward").get<double>() << ','
                << summary.at("served_count").get<int>() << "\n";
    };
    for (double p : man.sweep_pavg) {
      ScenarioSpec spec = base;
      spec.uav_template.p_avg = p;
      run_point("p_avg", p, spec, "pavg_" + std::to_string(p));
    }
    for (int u : man.sweep_uavs) {
      ScenarioSpec spec = base;
      spec.num_uavs = u;
      // Cluster count stays at the base scenario's value so fleet growth only
      // adds tour capacity.
      spec.num_clusters = base.clusters();
      run_point("uavs", u, spec, "uavs_" + std::to_string(u));
    }
    fs::create_directories(man.out_dir);
    write_text(fs::path(man.out_dir) / "sweep.csv", sweep_csv.str());
    return 0;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace uavsim
