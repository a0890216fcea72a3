#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace uavsim {

using Vec3 = Eigen::Vector3d;

struct VoxelIndex {
  int ix = 0;
  int iy = 0;
  int iz = 0;
  bool operator==(const VoxelIndex&) const = default;
  auto operator<=>(const VoxelIndex&) const = default;
};

struct SiteConfig {
  double x_max = 3000.0;
  double y_max = 3000.0;
  double z_max = 150.0;
  double dx = 10.0;
  double dy = 10.0;
  double dz = 10.0;
  std::vector<Vec3> depot_positions = {Vec3(0.0, 0.0, 0.0)};

  int nx() const { return static_cast<int>(x_max / dx + 0.5); }
  int ny() const { return static_cast<int>(y_max / dy + 0.5); }
  int nz() const { return static_cast<int>(z_max / dz + 0.5); }
  bool contains(const Vec3& p) const;
};

struct TrafficClass {
  std::string name;
  double priority = 0.0;       // chi
  double max_latency_s = 0.0;  // delta_max, seconds
  double payload_bits = 0.0;   // nu
  double discount = 0.0;       // gamma in (0,1)
};

struct GroundNode {
  int id = 0;
  Vec3 position = Vec3::Zero();  // z = 0
  int antenna_count = 4;         // A_g
  double tx_power_w = 0.19953;   // 23 dBm
  TrafficClass traffic;
};

struct UavSpec {
  int id = 0;
  int antenna_count = 16;  // A_u
  // Rotary-wing power constants (blade profile, induced, parasitic).
  double c0 = 1276.46;   // W
  double c1 = 5.21e-5;   // s^2/m^2
  double c2 = 709.27;    // W
  double c3 = 129.92;    // s^2/m^2
  double c4 = 0.02;      // W
  double weight_n = 80.0;        // varrho
  double fuselage_drag = 0.6;    // omega
  double rotor_solidity = 0.1;   // varphi
  double rotor_disc_area = 0.5;  // vartheta, m^2
  double v_max = 50.0;           // m/s
  double a_max = 5.0;            // m/s^2
  double p_avg = 4500.0;         // W, mission-average mobility power cap
};

struct Environment {
  double beta0 = 1.0e4;     // reference SNR at 1 m, linear (40 dB)
  double alpha_los = 2.0;
  double alpha_nlos = 2.8;
  double kappa_nlos = 0.2;
  double z1 = 9.61;
  double z2 = 0.16;
  double k1 = 1.0;
  double k2 = 0.05;
  double bandwidth_hz = 5.0e6;  // B
  // Noise normalized so that B*N0 = 1 and the effective transmit power is 1;
  // beta0 then is the per-antenna SNR at 1 m, keeping the reference-SNR
  // reading of the parameter table self-consistent.
  double noise_power = 1.0;  // B*N0
  double tx_power_eff = 1.0;
  double gravity = 9.81;
  double air_density = 1.23;
};

struct SwarmConfig {
  int n_sw = 180;     // swarm size
  int n_ssw = 20;     // sub-swarm size
  int m_seg = 128;    // trajectory segments per edge
  int f_max = 1000;   // cost-evaluation budget
};

struct ScenarioSpec {
  SiteConfig site;
  double mission_duration_s = 3000.0;  // T
  int num_uavs = 6;
  int num_gns = 36;
  int num_clusters = 0;  // 0 -> defaults to num_uavs
  UavSpec uav_template;
  int gn_antennas = 4;
  double gn_tx_power_w = 0.19953;
  Environment env;
  SwarmConfig swarm;
  std::vector<TrafficClass> traffic_classes;  // QoS table rows
  int mc_samples = 256;
  std::uint64_t seed = 0;
  // Optional pinned GN layout; generated uniformly when empty.
  std::vector<Vec3> gn_positions;
  std::vector<int> gn_class_ids;  // parallel to gn_positions when pinned

  std::vector<GroundNode> gns;   // filled by generate_gns
  std::vector<UavSpec> uavs;     // homogeneous fleet from uav_template

  int clusters() const { return num_clusters > 0 ? num_clusters : num_uavs; }
};

std::vector<TrafficClass> default_traffic_classes();

// Parses a JSON scenario document; missing fields take the default simulation
// values, unknown keys are rejected with their path.
ScenarioSpec load_scenario(const std::string& json_text);
ScenarioSpec load_scenario_file(const std::string& path);

// Uniform GN placement with round-robin traffic classes; deterministic in seed.
std::vector<GroundNode> generate_gns(const ScenarioSpec& spec,
                                     std::uint64_t seed);

// Populates spec.gns and spec.uavs.
void instantiate(ScenarioSpec& spec);

struct LinkGeometry {
  double distance_m = 0.0;
  double elevation_deg = 0.0;  // in (0, 90]
};

LinkGeometry link_geometry(const Vec3& p_uav, const Vec3& p_gn);

VoxelIndex voxel_index(const SiteConfig& site, const Vec3& p);
Vec3 voxel_center(const SiteConfig& site, const VoxelIndex& idx);

}  // namespace uavsim
