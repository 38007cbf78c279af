#pragma once

#include <cstdint>
#include <string>

#include "rldwa/config.hpp"
#include "rldwa/controller.hpp"
#include "rldwa/runlog.hpp"

namespace rldwa {

struct TrainOptions {
  std::string config_path;
  std::string preset = "desk";
  std::uint64_t seed = 1;
  bool seed_overrides_config = false;
  std::string out_dir;
  bool quiet = false;
};

/// Runs the full training schedule. Writes periodic checkpoints,
/// checkpoint_final.rldwa, and training_log.csv into out_dir.
void run_training(const TrainOptions& opts);

struct EvalOptions {
  std::string checkpoint_path;
  std::string scenario_path;
  std::string mode = "omni";
  int runs = 7;
  std::uint64_t seed = 1;
  std::string out_dir;
  bool quiet = false;
};

/// Runs seeded evaluation episodes; writes run###.csv and run###.svg per
/// run plus summary.json, and returns the summary serialized as JSON text.
std::string run_evaluation(const EvalOptions& opts);

/// One closed-loop evaluation episode on a fully parsed config.
RunLog run_eval_episode(const ProjectConfig& cfg, const SacAgent* agent, DriveMode mode,
                        const std::string& scenario_label, int run_index, std::uint64_t run_seed);

void run_replay(const std::string& log_csv, const std::string& out_svg);

/// Aggregates every run###.csv under logs_dir into a summary JSON document;
/// writes it to out_json when non-empty and returns the text.
std::string run_metrics_dir(const std::string& logs_dir, const std::string& out_json);

}  // namespace rldwa
