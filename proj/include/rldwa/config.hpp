#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "rldwa/dwa.hpp"
#include "rldwa/env.hpp"
#include "rldwa/perception.hpp"
#include "rldwa/sac.hpp"
#include "rldwa/world.hpp"

namespace rldwa {

/// Raised for malformed or invariant-violating configuration input; the
/// message names the offending field.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Everything a run needs, parsed from one JSON document.
struct ProjectConfig {
  WorldState world;
  CameraModel camera;
  NoiseModel noise;
  DwaConfig dwa;
  EnvConfig env;
  SacConfig sac;
  std::uint64_t seed = 1;
  int checkpoint_every = 100;
  double eval_start_jitter_xy = 0.3;      // per-run start pose jitter, m
  double eval_start_jitter_heading = 0.3; // rad
  int eval_steps = 300;
};

/// Parses just the world block; throws ConfigError with the field path on
/// malformed input.
WorldState load_world(const std::string& json_text);

ProjectConfig load_config_text(const std::string& json_text);
ProjectConfig load_config_file(const std::string& path);

/// Fills schedule/network fields with a preset's defaults before the file's
/// own values are applied: "smoke" (seconds), "desk" (minutes), "paper"
/// (the full-scale schedule). Unknown names throw ConfigError.
void apply_preset(ProjectConfig& cfg, const std::string& preset);

}  // namespace rldwa
