#include "rldwa.h"

#include <exception>
#include <fstream>
#include <sstream>
#include <string>

#include "rldwa/config.hpp"
#include "rldwa/runner.hpp"
#include "rldwa/sac.hpp"
#include "rldwa/world.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

template <typename Fn>
rldwa_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return RLDWA_OK;
  } catch (const rldwa::ConfigError& e) {
    set_error(e.what());
    return RLDWA_ERR_CONFIG;
  } catch (const std::exception& e) {
    set_error(e.what());
    return RLDWA_ERR_RUNTIME;
  } catch (...) {
    set_error("unknown failure");
    return RLDWA_ERR_RUNTIME;
  }
}

}  // namespace

struct rldwa_world {
  rldwa::WorldState state;
};

struct rldwa_agent {
  rldwa::SacAgent agent;
  rldwa::Rng rng{0};
};

extern "C" {

const char* rldwa_version(void) { return "1.0.0"; }

const char* rldwa_last_error(void) { return g_last_error.c_str(); }

rldwa_world* rldwa_world_create(const char* config_json) {
  if (!config_json) {
    set_error("config_json is null");
    return nullptr;
  }
  rldwa_world* handle = nullptr;
  guarded([&] { handle = new rldwa_world{rldwa::load_world(config_json)}; });
  return handle;
}

rldwa_world* rldwa_world_create_from_file(const char* path) {
  if (!path) {
    set_error("path is null");
    return nullptr;
  }
  rldwa_world* handle = nullptr;
  guarded([&] {
    std::ifstream f(path);
    if (!f) throw rldwa::ConfigError(std::string("cannot open '") + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    handle = new rldwa_world{rldwa::load_world(ss.str())};
  });
  return handle;
}

void rldwa_world_destroy(rldwa_world* world) { delete world; }

rldwa_status rldwa_world_step(rldwa_world* world, double vx, double vy, double omega, double dt) {
  if (!world) {
    set_error("world handle is null");
    return RLDWA_ERR_RUNTIME;
  }
  return guarded([&] {
    rldwa::step_robot(world->state, {vx, vy, omega}, dt);
    rldwa::step_person(world->state, dt);
  });
}

rldwa_status rldwa_world_step_person(rldwa_world* world, double dt) {
  if (!world) {
    set_error("world handle is null");
    return RLDWA_ERR_RUNTIME;
  }
  return guarded([&] { rldwa::step_person(world->state, dt); });
}

rldwa_status rldwa_world_robot_pose(const rldwa_world* world, double* x, double* y,
                                    double* heading) {
  if (!world || !x || !y || !heading) {
    set_error("null argument");
    return RLDWA_ERR_RUNTIME;
  }
  *x = world->state.robot.pose.x;
  *y = world->state.robot.pose.y;
  *heading = world->state.robot.pose.heading;
  return RLDWA_OK;
}

rldwa_status rldwa_world_person_position(const rldwa_world* world, double* x, double* y) {
  if (!world || !x || !y) {
    set_error("null argument");
    return RLDWA_ERR_RUNTIME;
  }
  *x = world->state.person.position.x;
  *y = world->state.person.position.y;
  return RLDWA_OK;
}

int rldwa_world_collided(const rldwa_world* world) {
  if (!world) return -1;
  return world->state.collided_last_step ? 1 : 0;
}

int rldwa_world_scan_size(const rldwa_world* world) {
  if (!world) return -1;
  return world->state.lidar.beams;
}

rldwa_status rldwa_world_scan(const rldwa_world* world, double* ranges, int capacity) {
  if (!world || !ranges) {
    set_error("null argument");
    return RLDWA_ERR_RUNTIME;
  }
  if (capacity < world->state.lidar.beams) {
    set_error("scan buffer too small");
    return RLDWA_ERR_RUNTIME;
  }
  return guarded([&] {
    const rldwa::LidarScan scan = rldwa::scan(world->state);
    for (std::size_t i = 0; i < scan.ranges.size(); ++i) ranges[i] = scan.ranges[i];
  });
}

int rldwa_world_line_of_sight(const rldwa_world* world, double ax, double ay, double bx,
                              double by) {
  if (!world) return -1;
  return rldwa::line_of_sight(world->state, {ax, ay}, {bx, by}) ? 1 : 0;
}

rldwa_agent* rldwa_agent_load(const char* checkpoint_path) {
  if (!checkpoint_path) {
    set_error("checkpoint_path is null");
    return nullptr;
  }
  rldwa_agent* handle = nullptr;
  guarded([&] {
    handle = new rldwa_agent{rldwa::SacAgent::load_checkpoint(checkpoint_path), rldwa::Rng(0)};
  });
  return handle;
}

void rldwa_agent_destroy(rldwa_agent* agent) { delete agent; }

rldwa_status rldwa_agent_seed(rldwa_agent* agent, unsigned long long seed) {
  if (!agent) {
    set_error("agent handle is null");
    return RLDWA_ERR_RUNTIME;
  }
  agent->rng.reseed(seed);
  return RLDWA_OK;
}

rldwa_status rldwa_agent_act(rldwa_agent* agent, const double state[3], int deterministic,
                             double* omega_out) {
  if (!agent || !state || !omega_out) {
    set_error("null argument");
    return RLDWA_ERR_RUNTIME;
  }
  return guarded([&] {
    const std::array<double, 3> s{state[0], state[1], state[2]};
    *omega_out = agent->agent.act(s, deterministic != 0, 0.0, agent->rng);
  });
}

rldwa_status rldwa_train(const char* config_path, const char* preset, unsigned long long seed,
                         const char* out_dir) {
  if (!config_path || !out_dir) {
    set_error("null argument");
    return RLDWA_ERR_RUNTIME;
  }
  return guarded([&] {
    rldwa::TrainOptions opts;
    opts.config_path = config_path;
    opts.preset = preset ? preset : "desk";
    opts.seed = seed;
    opts.seed_overrides_config = true;
    opts.out_dir = out_dir;
    rldwa::run_training(opts);
  });
}

rldwa_status rldwa_eval(const char* checkpoint_path, const char* scenario_path, const char* mode,
                        int runs, unsigned long long seed, const char* out_dir) {
  if (!checkpoint_path || !scenario_path || !mode || !out_dir) {
    set_error("null argument");
    return RLDWA_ERR_RUNTIME;
  }
  return guarded([&] {
    rldwa::EvalOptions opts;
    opts.checkpoint_path = checkpoint_path;
    opts.scenario_path = scenario_path;
    opts.mode = mode;
    opts.runs = runs;
    opts.seed = seed;
    opts.out_dir = out_dir;
    rldwa::run_evaluation(opts);
  });
}

rldwa_status rldwa_replay(const char* log_csv_path, const char* out_svg_path) {
  if (!log_csv_path || !out_svg_path) {
    set_error("null argument");
    return RLDWA_ERR_RUNTIME;
  }
  return guarded([&] { rldwa::run_replay(log_csv_path, out_svg_path); });
}

rldwa_status rldwa_metrics(const char* logs_dir, const char* out_json_path) {
  if (!logs_dir || !out_json_path) {
    set_error("null argument");
    return RLDWA_ERR_RUNTIME;
  }
  return guarded([&] { rldwa::run_metrics_dir(logs_dir, out_json_path); });
}

}  // extern "C"
