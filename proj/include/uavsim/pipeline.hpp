#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "uavsim/baselines.hpp"
#include "uavsim/scheduler.hpp"

namespace uavsim {

struct RunManifest {
  std::string scenario_path;  // empty -> default simulation values
  std::uint64_t seed = 0;
  std::string mode = "pipeline";  // pipeline|static|voronoi-dist|voronoi-rx|igd|ibf
  std::vector<double> sweep_pavg;
  std::vector<int> sweep_uavs;
  std::string out_dir = "out";
  bool literal_delta = false;
  std::string cost = "time";  // time|power
  int mc_samples = 0;         // 0 -> scenario value
};

struct PipelineResult {
  Clustering clustering;
  std::vector<ServicePosition> positions;
  std::vector<std::vector<GroundNode>> cluster_members;
  FleetGraph graph;
  FleetPlan plan;
  MissionReport report;
};

SolverConfig solver_config(const ScenarioSpec& spec, const RunManifest& man);

// Cluster -> position -> trajectory/dual -> schedule -> replay.
PipelineResult run_pipeline(const ScenarioSpec& spec, const SolverConfig& cfg,
                            std::uint64_t seed);

BaselineResult run_baseline(const ScenarioSpec& spec, const std::string& mode,
                            const RewardOptions& opts, std::uint64_t seed);

// Writes results.csv, fleet.csv, summary.json, manifest.json and (for the
// pipeline) plan.json into out_dir.
void write_run_artifacts(const std::string& out_dir, const ScenarioSpec& spec,
                         const RunManifest& man, const PipelineResult* pipeline,
                         const BaselineResult* baseline);

struct VerifyOutcome {
  bool have_artifacts = false;
  bool c1 = false, c2 = false, c3 = false, c4 = false;
  MissionReport report;
  bool ok() const { return have_artifacts && c1 && c2 && c3 && c4; }
};

// Replays plan.json under the manifest's power cap and reports one pass/fail
// line per constraint.
VerifyOutcome verify_run(const std::string& out_dir, std::ostream& log);

// Executes one manifest (including sweeps); returns a process exit status.
int run_manifest(const RunManifest& man, std::ostream& log);

ScenarioSpec scenario_for(const RunManifest& man);

}  // namespace uavsim
