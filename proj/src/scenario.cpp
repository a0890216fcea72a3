#include "uavsim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>
#include <stdexcept>

#include "uavsim/rng.hpp"

namespace uavsim {

using nlohmann::json;

bool SiteConfig::contains(const Vec3& p) const {
  return p.x() >= 0.0 && p.x() <= x_max && p.y() >= 0.0 && p.y() <= y_max &&
         p.z() >= 0.0 && p.z() <= z_max;
}

std::vector<TrafficClass> default_traffic_classes() {
  return {
      {"telemetry", 100.0, 9.1 * 60.0, 256.0e6, 0.10},
      {"video", 84.0, 11.6 * 60.0, 1387.0e6, 0.24},
      {"image", 72.0, 14.5 * 60.0, 512.0e6, 0.33},
      {"file", 24.0, 19.0 * 60.0, 536.0e6, 0.80},
  };
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw std::invalid_argument("scenario: " + path + ": " + msg);
}

void check_keys(const json& j, const std::string& path,
                const std::set<std::string>& allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) {
      fail(path.empty() ? it.key() : path + "." + it.key(), "unknown key");
    }
  }
}

double get_num(const json& j, const char* key, double def,
               const std::string& path) {
  if (!j.contains(key)) return def;
  if (!j.at(key).is_number()) fail(path + "." + key, "expected number");
  return j.at(key).get<double>();
}

int get_int(const json& j, const char* key, int def, const std::string& path) {
  if (!j.contains(key)) return def;
  if (!j.at(key).is_number_integer()) fail(path + "." + key, "expected integer");
  return j.at(key).get<int>();
}

Vec3 parse_vec3(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) fail(path, "expected [x, y, z]");
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

void require_positive(double v, const std::string& path) {
  if (!(v > 0.0)) fail(path, "dimension must be positive");
}

}  // namespace

ScenarioSpec load_scenario(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("scenario: parse failure: ") +
                                e.what());
  }
  ScenarioSpec spec;

  check_keys(j, "",
             {"site", "mission", "uavs", "gns", "environment", "swarm",
              "traffic_classes", "clusters", "mc_samples", "seed"});

  if (j.contains("site")) {
    const json& s = j.at("site");
    check_keys(s, "site",
               {"x_max", "y_max", "z_max", "dx", "dy", "dz", "depots"});
    spec.site.x_max = get_num(s, "x_max", spec.site.x_max, "site");
    spec.site.y_max = get_num(s, "y_max", spec.site.y_max, "site");
    spec.site.z_max = get_num(s, "z_max", spec.site.z_max, "site");
    spec.site.dx = get_num(s, "dx", spec.site.dx, "site");
    spec.site.dy = get_num(s, "dy", spec.site.dy, "site");
    spec.site.dz = get_num(s, "dz", spec.site.dz, "site");
    if (s.contains("depots")) {
      spec.site.depot_positions.clear();
      for (std::size_t i = 0; i < s.at("depots").size(); ++i) {
        spec.site.depot_positions.push_back(
            parse_vec3(s.at("depots")[i], "site.depots"));
      }
    }
  }
  require_positive(spec.site.x_max, "site.x_max");
  require_positive(spec.site.y_max, "site.y_max");
  require_positive(spec.site.z_max, "site.z_max");
  require_positive(spec.site.dx, "site.dx");
  require_positive(spec.site.dy, "site.dy");
  require_positive(spec.site.dz, "site.dz");
  auto divides = [](double whole, double part) {
    double q = whole / part;
    return std::abs(q - std::round(q)) < 1e-9;
  };
  if (!divides(spec.site.x_max, spec.site.dx) ||
      !divides(spec.site.y_max, spec.site.dy) ||
      !divides(spec.site.z_max, spec.site.dz)) {
    fail("site", "voxel edges must divide site dimensions evenly");
  }
  if (spec.site.depot_positions.empty()) fail("site.depots", "empty depot set");
  for (const Vec3& d : spec.site.depot_positions) {
    if (!spec.site.contains(d) || d.z() != 0.0) {
      fail("site.depots", "depot must lie within the site at z = 0");
    }
  }

  if (j.contains("mission")) {
    const json& m = j.at("mission");
    check_keys(m, "mission", {"duration_s"});
    spec.mission_duration_s =
        get_num(m, "duration_s", spec.mission_duration_s, "mission");
  }
  if (!(spec.mission_duration_s > 0.0)) fail("mission.duration_s", "T must be positive");

  if (j.contains("uavs")) {
    const json& u = j.at("uavs");
    check_keys(u, "uavs",
               {"count", "antennas", "c0", "c1", "c2", "c3", "c4", "weight_n",
                "fuselage_drag", "rotor_solidity", "rotor_disc_area", "v_max",
                "a_max", "p_avg"});
    spec.num_uavs = get_int(u, "count", spec.num_uavs, "uavs");
    UavSpec& t = spec.uav_template;
    t.antenna_count = get_int(u, "antennas", t.antenna_count, "uavs");
    t.c0 = get_num(u, "c0", t.c0, "uavs");
    t.c1 = get_num(u, "c1", t.c1, "uavs");
    t.c2 = get_num(u, "c2", t.c2, "uavs");
    t.c3 = get_num(u, "c3", t.c3, "uavs");
    t.c4 = get_num(u, "c4", t.c4, "uavs");
    t.weight_n = get_num(u, "weight_n", t.weight_n, "uavs");
    t.fuselage_drag = get_num(u, "fuselage_drag", t.fuselage_drag, "uavs");
    t.rotor_solidity = get_num(u, "rotor_solidity", t.rotor_solidity, "uavs");
    t.rotor_disc_area = get_num(u, "rotor_disc_area", t.rotor_disc_area, "uavs");
    t.v_max = get_num(u, "v_max", t.v_max, "uavs");
    t.a_max = get_num(u, "a_max", t.a_max, "uavs");
    t.p_avg = get_num(u, "p_avg", t.p_avg, "uavs");
  }
  if (spec.num_uavs < 1) fail("uavs.count", "need at least one UAV");
  if (spec.uav_template.antenna_count < 1) fail("uavs.antennas", "A_u >= 1");

  if (j.contains("gns")) {
    const json& g = j.at("gns");
    check_keys(g, "gns", {"count", "antennas", "tx_power_dbm", "positions", "classes"});
    spec.num_gns = get_int(g, "count", spec.num_gns, "gns");
    spec.gn_antennas = get_int(g, "antennas", spec.gn_antennas, "gns");
    if (g.contains("tx_power_dbm")) {
      spec.gn_tx_power_w =
          std::pow(10.0, g.at("tx_power_dbm").get<double>() / 10.0) * 1e-3;
    }
    if (g.contains("positions")) {
      for (std::size_t i = 0; i < g.at("positions").size(); ++i) {
        Vec3 p = parse_vec3(g.at("positions")[i], "gns.positions");
        if (p.z() != 0.0 || !spec.site.contains(p)) {
          fail("gns.positions", "GN must lie within the site at z = 0");
        }
        spec.gn_positions.push_back(p);
      }
      spec.num_gns = static_cast<int>(spec.gn_positions.size());
    }
    if (g.contains("classes")) {
      for (std::size_t i = 0; i < g.at("classes").size(); ++i) {
        spec.gn_class_ids.push_back(g.at("classes")[i].get<int>());
      }
    }
  }
  if (spec.num_gns < 1) fail("gns.count", "need at least one GN");
  if (spec.gn_antennas < 1) fail("gns.antennas", "A_g >= 1");
  if (spec.uav_template.antenna_count < spec.gn_antennas) {
    fail("uavs.antennas", "A_u must be >= A_g for combiner invertibility");
  }

  if (j.contains("environment")) {
    const json& e = j.at("environment");
    check_keys(e, "environment",
               {"beta0_db", "alpha", "alpha_nlos", "kappa_nlos", "z1", "z2",
                "k1", "k2", "bandwidth_hz", "gravity", "air_density"});
    if (e.contains("beta0_db")) {
      spec.env.beta0 = std::pow(10.0, e.at("beta0_db").get<double>() / 10.0);
    }
    spec.env.alpha_los = get_num(e, "alpha", spec.env.alpha_los, "environment");
    spec.env.alpha_nlos =
        get_num(e, "alpha_nlos", spec.env.alpha_nlos, "environment");
    spec.env.kappa_nlos =
        get_num(e, "kappa_nlos", spec.env.kappa_nlos, "environment");
    spec.env.z1 = get_num(e, "z1", spec.env.z1, "environment");
    spec.env.z2 = get_num(e, "z2", spec.env.z2, "environment");
    spec.env.k1 = get_num(e, "k1", spec.env.k1, "environment");
    spec.env.k2 = get_num(e, "k2", spec.env.k2, "environment");
    spec.env.bandwidth_hz =
        get_num(e, "bandwidth_hz", spec.env.bandwidth_hz, "environment");
    spec.env.gravity = get_num(e, "gravity", spec.env.gravity, "environment");
    spec.env.air_density =
        get_num(e, "air_density", spec.env.air_density, "environment");
  }
  if (!(spec.env.alpha_los >= 2.0 && spec.env.alpha_nlos >= spec.env.alpha_los)) {
    fail("environment", "pathloss exponents require 2 <= alpha <= alpha_nlos");
  }

  if (j.contains("swarm")) {
    const json& s = j.at("swarm");
    check_keys(s, "swarm", {"n_sw", "n_ssw", "m_seg", "f_max"});
    spec.swarm.n_sw = get_int(s, "n_sw", spec.swarm.n_sw, "swarm");
    spec.swarm.n_ssw = get_int(s, "n_ssw", spec.swarm.n_ssw, "swarm");
    spec.swarm.m_seg = get_int(s, "m_seg", spec.swarm.m_seg, "swarm");
    spec.swarm.f_max = get_int(s, "f_max", spec.swarm.f_max, "swarm");
  }
  if (spec.swarm.n_sw % spec.swarm.n_ssw != 0) {
    fail("swarm", "n_sw must be divisible by n_ssw");
  }

  if (j.contains("traffic_classes")) {
    for (std::size_t i = 0; i < j.at("traffic_classes").size(); ++i) {
      const json& c = j.at("traffic_classes")[i];
      const std::string path = "traffic_classes";
      check_keys(c, path, {"name", "priority", "max_latency_s", "payload_mbit",
                           "discount"});
      TrafficClass tc;
      tc.name = c.value("name", "class" + std::to_string(i));
      tc.priority = get_num(c, "priority", 1.0, path);
      tc.max_latency_s = get_num(c, "max_latency_s", 60.0, path);
      tc.payload_bits = get_num(c, "payload_mbit", 1.0, path) * 1e6;
      tc.discount = get_num(c, "discount", 0.5, path);
      if (!(tc.priority > 0.0)) fail(path, "priority must be positive");
      if (!(tc.discount > 0.0 && tc.discount < 1.0)) {
        fail(path, "discount must be in (0, 1)");
      }
      if (!(tc.payload_bits > 0.0)) fail(path, "payload must be positive");
      if (!(tc.max_latency_s > 0.0)) fail(path, "max latency must be positive");
      spec.traffic_classes.push_back(tc);
    }
  } else {
    spec.traffic_classes = default_traffic_classes();
  }
  if (spec.traffic_classes.empty()) fail("traffic_classes", "empty table");

  spec.num_clusters = get_int(j, "clusters", 0, "");
  spec.mc_samples = get_int(j, "mc_samples", spec.mc_samples, "");
  if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();

  for (int id : spec.gn_class_ids) {
    if (id < 0 || id >= static_cast<int>(spec.traffic_classes.size())) {
      fail("gns.classes", "class id out of range");
    }
  }
  return spec;
}

ScenarioSpec load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("scenario: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_scenario(ss.str());
}

std::vector<GroundNode> generate_gns(const ScenarioSpec& spec,
                                     std::uint64_t seed) {
  std::vector<GroundNode> gns;
  gns.reserve(spec.num_gns);
  Rng rng = make_rng(seed, /*stream=*/0x6e47);
  std::uniform_real_distribution<double> ux(0.0, spec.site.x_max);
  std::uniform_real_distribution<double> uy(0.0, spec.site.y_max);
  for (int i = 0; i < spec.num_gns; ++i) {
    GroundNode gn;
    gn.id = i;
    if (i < static_cast<int>(spec.gn_positions.size())) {
      gn.position = spec.gn_positions[i];
    } else {
      gn.position = Vec3(ux(rng), uy(rng), 0.0);
    }
    gn.antenna_count = spec.gn_antennas;
    gn.tx_power_w = spec.gn_tx_power_w;
    int cls = i < static_cast<int>(spec.gn_class_ids.size())
                  ? spec.gn_class_ids[i]
                  : i % static_cast<int>(spec.traffic_classes.size());
    gn.traffic = spec.traffic_classes[cls];
    gns.push_back(gn);
  }
  return gns;
}

void instantiate(ScenarioSpec& spec) {
  spec.gns = generate_gns(spec, spec.seed);
  spec.uavs.clear();
  for (int u = 0; u < spec.num_uavs; ++u) {
    UavSpec s = spec.uav_template;
    s.id = u;
    spec.uavs.push_back(s);
  }
}

LinkGeometry link_geometry(const Vec3& p_uav, const Vec3& p_gn) {
  const double d = (p_uav - p_gn).norm();
  if (d <= 0.0) throw std::invalid_argument("link_geometry: coincident points");
  if (p_uav.z() <= 0.0) {
    throw std::invalid_argument("link_geometry: UAV altitude must be positive");
  }
  LinkGeometry g;
  g.distance_m = d;
  g.elevation_deg = std::asin(std::min(1.0, p_uav.z() / d)) * 180.0 / M_PI;
  return g;
}

VoxelIndex voxel_index(const SiteConfig& site, const Vec3& p) {
  if (!site.contains(p)) {
    throw std::out_of_range("voxel_index: coordinate outside site");
  }
  auto clampi = [](int v, int n) { return v >= n ? n - 1 : v; };
  VoxelIndex idx;
  idx.ix = clampi(static_cast<int>(std::floor(p.x() / site.dx)), site.nx());
  idx.iy = clampi(static_cast<int>(std::floor(p.y() / site.dy)), site.ny());
  idx.iz = clampi(static_cast<int>(std::floor(p.z() / site.dz)), site.nz());
  return idx;
}

Vec3 voxel_center(const SiteConfig& site, const VoxelIndex& idx) {
  return Vec3((idx.ix + 0.5) * site.dx, (idx.iy + 0.5) * site.dy,
              (idx.iz + 0.5) * site.dz);
}

}  // namespace uavsim
