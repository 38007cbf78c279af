// Command-line front end. Links only the C API from librldwa.

#include <cstdio>

#include <CLI11.hpp>

#include "rldwa.h"

namespace {

int report(rldwa_status status) {
  if (status != RLDWA_OK) std::fprintf(stderr, "error: %s\n", rldwa_last_error());
  return static_cast<int>(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rldwa: person-following with an omnidirectional DWA planner and a "
               "learned yaw controller"};
  app.set_version_flag("--version", rldwa_version());
  app.require_subcommand(1);

  std::string config, out_dir, preset = "desk";
  unsigned long long seed = 1;
  CLI::App* train = app.add_subcommand("train", "Train the yaw agent on a scenario config");
  train->add_option("--config", config, "training config JSON")->required();
  train->add_option("--seed", seed, "random seed (default 1)");
  train->add_option("--out", out_dir, "output directory")->required();
  train->add_option("--preset", preset, "smoke|desk|paper|none (default desk)");

  std::string checkpoint, scenario, mode = "omni", eval_out;
  int runs = 7;
  unsigned long long eval_seed = 1;
  CLI::App* eval = app.add_subcommand("eval", "Evaluate a checkpoint on a scenario");
  eval->add_option("--checkpoint", checkpoint, "agent checkpoint (.rldwa)")->required();
  eval->add_option("--scenario", scenario, "scenario config JSON")->required();
  eval->add_option("--mode", mode, "omni|diff|diff_agent (default omni)");
  eval->add_option("--runs", runs, "episodes to run (default 7)");
  eval->add_option("--seed", eval_seed, "random seed (default 1)");
  eval->add_option("--out", eval_out, "output directory")->required();

  std::string log_path, svg_path;
  CLI::App* replay = app.add_subcommand("replay", "Render a run log CSV as an SVG plot");
  replay->add_option("--log", log_path, "run log CSV")->required();
  replay->add_option("--out", svg_path, "output SVG path")->required();

  std::string logs_dir, summary_path;
  CLI::App* metrics = app.add_subcommand("metrics", "Aggregate run logs into summary JSON");
  metrics->add_option("--logs", logs_dir, "directory of run###.csv logs")->required();
  metrics->add_option("--out", summary_path, "output summary JSON path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return static_cast<int>(RLDWA_ERR_CONFIG);
  }

  if (train->parsed())
    return report(rldwa_train(config.c_str(), preset.c_str(), seed, out_dir.c_str()));
  if (eval->parsed())
    return report(rldwa_eval(checkpoint.c_str(), scenario.c_str(), mode.c_str(), runs, eval_seed,
                             eval_out.c_str()));
  if (replay->parsed()) return report(rldwa_replay(log_path.c_str(), svg_path.c_str()));
  if (metrics->parsed()) return report(rldwa_metrics(logs_dir.c_str(), summary_path.c_str()));
  return static_cast<int>(RLDWA_ERR_CONFIG);
}
