#include <CLI11.hpp>
#include <iostream>

#include "uavsim/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"UAV data-harvesting simulator and cross-layer solver"};
  app.require_subcommand(0, 1);

  uavsim::RunManifest man;
  app.add_option("--scenario", man.scenario_path, "scenario JSON file")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", man.seed, "master RNG seed");
  app.add_option("--mode", man.mode, "pipeline|static|voronoi-dist|voronoi-rx|igd|ibf")
      ->check(CLI::IsMember(
          {"pipeline", "static", "voronoi-dist", "voronoi-rx", "igd", "ibf"}));
  app.add_option("--sweep-pavg", man.sweep_pavg,
                 "average-power cap values (W) to sweep");
  app.add_option("--sweep-uavs", man.sweep_uavs, "fleet sizes to sweep");
  app.add_option("--out", man.out_dir, "output directory");
  app.add_flag("--literal-delta", man.literal_delta,
               "latency counts transmission time only");
  app.add_option("--cost", man.cost, "edge cost objective")
      ->check(CLI::IsMember({"time", "power"}));
  app.add_option("--mc-samples", man.mc_samples,
                 "fading draws per throughput average");

  std::string verify_dir;
  CLI::App* verify = app.add_subcommand("verify", "replay a run's artifacts and audit its constraints");
  verify->add_option("dir", verify_dir, "run output directory")->required();

  CLI11_PARSE(app, argc, argv);

  if (verify->parsed()) {
    const uavsim::VerifyOutcome out = uavsim::verify_run(verify_dir, std::cout);
    return out.ok() ? 0 : 1;
  }
  return uavsim::run_manifest(man, std::cout);
}
