#include "rldwa/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace rldwa {

namespace {

using nlohmann::json;

double num(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path + ": expected a number");
  return j.get<double>();
}

double num_or(const json& parent, const std::string& key, const std::string& path, double fallback) {
  if (!parent.contains(key)) return fallback;
  return num(parent.at(key), path + "." + key);
}

long integer_or(const json& parent, const std::string& key, const std::string& path, long fallback) {
  if (!parent.contains(key)) return fallback;
  const json& j = parent.at(key);
  if (!j.is_number_integer()) throw ConfigError(path + "." + key + ": expected an integer");
  return j.get<long>();
}

bool flag_or(const json& parent, const std::string& key, const std::string& path, bool fallback) {
  if (!parent.contains(key)) return fallback;
  const json& j = parent.at(key);
  if (!j.is_boolean()) throw ConfigError(path + "." + key + ": expected a boolean");
  return j.get<bool>();
}

Point2D point(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2)
    throw ConfigError(path + ": expected [x, y]");
  return {num(j[0], path + "[0]"), num(j[1], path + "[1]")};
}

void parse_robot(const json& j, WorldState& world) {
  if (j.contains("pose")) {
    const json& p = j.at("pose");
    if (!p.is_array() || p.size() != 3) throw ConfigError("robot.pose: expected [x, y, heading]");
    world.robot.pose.x = num(p[0], "robot.pose[0]");
    world.robot.pose.y = num(p[1], "robot.pose[1]");
    world.robot.pose.heading = wrap_angle(num(p[2], "robot.pose[2]"));
  }
  world.robot.footprint_radius = num_or(j, "footprint_radius", "robot", 0.25);
  if (!(world.robot.footprint_radius > 0.0))
    throw ConfigError("robot.footprint_radius: must be > 0");
  if (j.contains("limits")) {
    const json& l = j.at("limits");
    world.limits.vx_max = num_or(l, "vx", "robot.limits", world.limits.vx_max);
    world.limits.vy_max = num_or(l, "vy", "robot.limits", world.limits.vy_max);
    world.limits.omega_max = num_or(l, "omega", "robot.limits", world.limits.omega_max);
    world.limits.accel = num_or(l, "accel", "robot.limits", world.limits.accel);
    world.limits.alpha = num_or(l, "alpha", "robot.limits", world.limits.alpha);
    if (!(world.limits.vx_max > 0.0 && world.limits.vy_max > 0.0 && world.limits.omega_max > 0.0))
      throw ConfigError("robot.limits: velocity limits must be > 0");
  }
}

void parse_person(const json& j, WorldState& world) {
  if (!j.contains("waypoints")) throw ConfigError("person.waypoints: required");
  const json& wps = j.at("waypoints");
  if (!wps.is_array() || wps.empty())
    throw ConfigError("person.waypoints: expected a non-empty array of [x, y]");
  world.person.waypoints.clear();
  for (std::size_t i = 0; i < wps.size(); ++i)
    world.person.waypoints.push_back(point(wps[i], "person.waypoints[" + std::to_string(i) + "]"));
  world.person.position = j.contains("start") ? point(j.at("start"), "person.start")
                                              : world.person.waypoints.front();
  world.person.speed = num_or(j, "speed", "person", 0.6);
  if (world.person.speed < 0.0) throw ConfigError("person.speed: must be >= 0");
  world.person.loop = flag_or(j, "loop", "person", false);
  world.person.target_index = 0;
  world.person.traveled = 0.0;
}

void parse_obstacles(const json& j, WorldState& world) {
  if (!j.is_array()) throw ConfigError("obstacles: expected an array");
  world.obstacles.clear();
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string path = "obstacles[" + std::to_string(i) + "]";
    const json& o = j[i];
    if (!o.contains("type")) throw ConfigError(path + ".type: required");
    const std::string type = o.at("type").get<std::string>();
    Obstacle ob;
    if (type == "circle") {
      ob.shape = Obstacle::Shape::Circle;
      if (!o.contains("center")) throw ConfigError(path + ".center: required");
      ob.center = point(o.at("center"), path + ".center");
      ob.radius = num_or(o, "radius", path, 0.0);
      if (!(ob.radius > 0.0)) throw ConfigError(path + ".radius: must be > 0");
    } else if (type == "segment") {
      ob.shape = Obstacle::Shape::Segment;
      if (!o.contains("a") || !o.contains("b"))
        throw ConfigError(path + ": segment needs endpoints a and b");
      ob.a = point(o.at("a"), path + ".a");
      ob.b = point(o.at("b"), path + ".b");
      if (ob.a.x == ob.b.x && ob.a.y == ob.b.y)
        throw ConfigError(path + ": segment endpoints must differ");
      ob.thickness = num_or(o, "thickness", path, 0.0);
      if (ob.thickness < 0.0) throw ConfigError(path + ".thickness: must be >= 0");
    } else {
      throw ConfigError(path + ".type: unknown shape '" + type + "'");
    }
    world.obstacles.push_back(ob);
  }
}

void parse_lidar(const json& j, WorldState& world) {
  world.lidar.beams = static_cast<int>(integer_or(j, "beams", "lidar", world.lidar.beams));
  if (world.lidar.beams <= 0) throw ConfigError("lidar.beams: must be > 0");
  world.lidar.max_range = num_or(j, "max_range", "lidar", world.lidar.max_range);
  if (!(world.lidar.max_range > 0.0)) throw ConfigError("lidar.max_range: must be > 0");
  world.lidar.angle_min = num_or(j, "angle_min", "lidar", world.lidar.angle_min);
  world.lidar.angle_max = num_or(j, "angle_max", "lidar", world.lidar.angle_max);
  if (!(world.lidar.angle_max > world.lidar.angle_min))
    throw ConfigError("lidar.angle_max: must exceed angle_min");
}

WorldState parse_world(const json& root) {
  WorldState world;
  if (!root.contains("robot")) throw ConfigError("robot: required");
  parse_robot(root.at("robot"), world);
  if (!root.contains("person")) throw ConfigError("person: required");
  parse_person(root.at("person"), world);
  if (root.contains("obstacles")) parse_obstacles(root.at("obstacles"), world);
  if (root.contains("lidar")) parse_lidar(root.at("lidar"), world);
  world.rng_seed = static_cast<std::uint64_t>(integer_or(root, "seed", "", 1));
  return world;
}

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
}

}  // namespace

WorldState load_world(const std::string& json_text) {
  return parse_world(parse_document(json_text));
}

ProjectConfig load_config_text(const std::string& json_text) {
  const json root = parse_document(json_text);
  ProjectConfig cfg;
  cfg.world = parse_world(root);
  cfg.seed = cfg.world.rng_seed;

  if (root.contains("camera")) {
    const json& c = root.at("camera");
    const double hfov_deg = num_or(c, "hfov_deg", "camera", 69.0);
    if (!(hfov_deg > 0.0 && hfov_deg < 180.0))
      throw ConfigError("camera.hfov_deg: must be in (0, 180)");
    cfg.camera.hfov = hfov_deg * kPi / 180.0;
    cfg.camera.image_width = static_cast<int>(integer_or(c, "image_width", "camera", 640));
    cfg.camera.image_height = static_cast<int>(integer_or(c, "image_height", "camera", 480));
    if (cfg.camera.image_width <= 0 || cfg.camera.image_height <= 0)
      throw ConfigError("camera.image_width/height: must be > 0");
    cfg.camera.max_depth = num_or(c, "max_depth", "camera", 6.0);
    if (!(cfg.camera.max_depth > 0.0)) throw ConfigError("camera.max_depth: must be > 0");
    cfg.noise.pixel_std = num_or(c, "noise_px", "camera", 4.0);
    cfg.noise.depth_std = num_or(c, "noise_depth", "camera", 0.03);
    if (cfg.noise.pixel_std < 0.0 || cfg.noise.depth_std < 0.0)
      throw ConfigError("camera noise: must be >= 0");
  }

  if (root.contains("dwa")) {
    const json& d = root.at("dwa");
    cfg.dwa.v_limit = num_or(d, "v_limit", "dwa", cfg.world.limits.vx_max);
    cfg.dwa.accel = num_or(d, "accel", "dwa", cfg.world.limits.accel);
    cfg.dwa.omega_limit = num_or(d, "omega_limit", "dwa", cfg.world.limits.omega_max);
    cfg.dwa.alpha = num_or(d, "alpha", "dwa", cfg.world.limits.alpha);
    cfg.dwa.samples_per_axis =
        static_cast<int>(integer_or(d, "samples_per_axis", "dwa", 11));
    if (cfg.dwa.samples_per_axis < 3) throw ConfigError("dwa.samples_per_axis: must be >= 3");
    cfg.dwa.horizon = num_or(d, "horizon", "dwa", 1.5);
    if (!(cfg.dwa.horizon > 0.0)) throw ConfigError("dwa.horizon: must be > 0");
    cfg.dwa.rollout_dt = num_or(d, "rollout_dt", "dwa", 0.1);
    cfg.dwa.w_goal = num_or(d, "w_goal", "dwa", 1.0);
    cfg.dwa.w_obstacle = num_or(d, "w_obstacle", "dwa", 0.3);
    cfg.dwa.w_speed = num_or(d, "w_speed", "dwa", 0.1);
    cfg.dwa.w_heading = num_or(d, "w_heading", "dwa", 0.8);
    if (cfg.dwa.w_goal < 0 || cfg.dwa.w_obstacle < 0 || cfg.dwa.w_speed < 0 || cfg.dwa.w_heading < 0)
      throw ConfigError("dwa weights: must be >= 0");
    cfg.dwa.standoff = num_or(d, "standoff", "dwa", 1.0);
    const double margin = num_or(d, "inflation_margin", "dwa", 0.1);
    cfg.dwa.inflation = cfg.world.robot.footprint_radius + margin;
  } else {
    cfg.dwa.v_limit = cfg.world.limits.vx_max;
    cfg.dwa.accel = cfg.world.limits.accel;
    cfg.dwa.omega_limit = cfg.world.limits.omega_max;
    cfg.dwa.alpha = cfg.world.limits.alpha;
    cfg.dwa.inflation = cfg.world.robot.footprint_radius + 0.1;
  }
  if (!(cfg.dwa.standoff > cfg.world.robot.footprint_radius))
    throw ConfigError("dwa.standoff: must exceed robot.footprint_radius");

  if (root.contains("env")) {
    const json& e = root.at("env");
    cfg.env.dt = num_or(e, "dt", "env", 0.1);
    if (!(cfg.env.dt > 0.0)) throw ConfigError("env.dt: must be > 0");
    cfg.env.d_max = num_or(e, "d_max", "env", 8.0);
    cfg.env.omega_max = num_or(e, "omega_max", "env", cfg.world.limits.omega_max);
    cfg.env.reward_from_track = flag_or(e, "reward_from_track", "env", false);
    cfg.env.linear_scripted = flag_or(e, "linear_scripted", "env", false);
  } else {
    cfg.env.omega_max = cfg.world.limits.omega_max;
  }

  if (root.contains("episode")) {
    const json& e = root.at("episode");
    cfg.env.max_steps = static_cast<int>(integer_or(e, "max_steps", "episode", 300));
    if (cfg.env.max_steps < 1) throw ConfigError("episode.max_steps: must be >= 1");
    cfg.env.episodes = integer_or(e, "episodes", "episode", 600);
    cfg.env.reshuffle_period = static_cast<int>(integer_or(e, "reshuffle_period", "episode", 20));
    if (cfg.env.reshuffle_period < 1) throw ConfigError("episode.reshuffle_period: must be >= 1");
    if (e.contains("sampler_box")) {
      const json& b = e.at("sampler_box");
      if (!b.is_array() || b.size() != 4)
        throw ConfigError("episode.sampler_box: expected [xmin, ymin, xmax, ymax]");
      for (int k = 0; k < 4; ++k)
        cfg.env.sampler_box[static_cast<std::size_t>(k)] =
            num(b[static_cast<std::size_t>(k)], "episode.sampler_box[" + std::to_string(k) + "]");
    }
    cfg.eval_steps = static_cast<int>(integer_or(e, "eval_steps", "episode", cfg.env.max_steps));
  }

  if (root.contains("sac")) {
    const json& s = root.at("sac");
    cfg.sac.gamma = num_or(s, "gamma", "sac", 0.99);
    if (!(cfg.sac.gamma >= 0.0 && cfg.sac.gamma < 1.0)) throw ConfigError("sac.gamma: must be in [0, 1)");
    cfg.sac.tau = num_or(s, "tau", "sac", 0.005);
    if (!(cfg.sac.tau > 0.0 && cfg.sac.tau <= 1.0)) throw ConfigError("sac.tau: must be in (0, 1]");
    cfg.sac.lr = num_or(s, "lr", "sac", 2e-4);
    cfg.sac.batch_size = static_cast<int>(integer_or(s, "batch_size", "sac", 256));
    cfg.sac.buffer_capacity =
        static_cast<std::size_t>(integer_or(s, "buffer_capacity", "sac", 100000));
    cfg.sac.warmup_steps = integer_or(s, "warmup_steps", "sac", 1000);
    cfg.sac.update_every = static_cast<int>(integer_or(s, "update_every", "sac", 1));
    if (cfg.sac.update_every < 1) throw ConfigError("sac.update_every: must be >= 1");
    if (s.contains("hidden")) {
      const json& h = s.at("hidden");
      if (!h.is_array() || h.empty()) throw ConfigError("sac.hidden: expected a non-empty array");
      cfg.sac.hidden.clear();
      for (std::size_t i = 0; i < h.size(); ++i) {
        const long u = h[i].get<long>();
        if (u < 1) throw ConfigError("sac.hidden[" + std::to_string(i) + "]: must be >= 1");
        cfg.sac.hidden.push_back(static_cast<int>(u));
      }
    }
    const std::string mode =
        s.contains("alpha_mode") ? s.at("alpha_mode").get<std::string>() : "auto";
    if (mode == "auto") {
      cfg.sac.alpha_auto = true;
    } else if (mode == "fixed") {
      cfg.sac.alpha_auto = false;
    } else {
      throw ConfigError("sac.alpha_mode: expected 'auto' or 'fixed'");
    }
    cfg.sac.alpha_init = num_or(s, "alpha", "sac", 0.2);
    if (!(cfg.sac.alpha_init > 0.0)) throw ConfigError("sac.alpha: must be > 0");
    cfg.sac.target_entropy = num_or(s, "target_entropy", "sac", -1.0);
    cfg.sac.epsilon.eps0 = num_or(s, "epsilon0", "sac", 1.0);
    cfg.sac.epsilon.decay = num_or(s, "epsilon_decay", "sac", 0.992);
    cfg.sac.epsilon.eps_min = num_or(s, "epsilon_min", "sac", 0.05);
    if (cfg.sac.epsilon.eps0 < 0.0 || cfg.sac.epsilon.eps0 > 1.0 ||
        cfg.sac.epsilon.eps_min < 0.0 || cfg.sac.epsilon.eps_min > 1.0)
      throw ConfigError("sac.epsilon0/epsilon_min: must be in [0, 1]");
    cfg.sac.log_std_min = num_or(s, "log_std_min", "sac", -20.0);
    cfg.sac.log_std_max = num_or(s, "log_std_max", "sac", 2.0);
  }
  cfg.sac.action_low = -cfg.world.limits.omega_max;
  cfg.sac.action_high = cfg.world.limits.omega_max;

  if (root.contains("eval")) {
    const json& e = root.at("eval");
    cfg.eval_start_jitter_xy = num_or(e, "start_jitter_xy", "eval", 0.3);
    cfg.eval_start_jitter_heading = num_or(e, "start_jitter_heading", "eval", 0.3);
    cfg.eval_steps = static_cast<int>(integer_or(e, "steps", "eval", cfg.eval_steps));
  }

  cfg.checkpoint_every = static_cast<int>(integer_or(root, "checkpoint_every", "", 100));
  return cfg;
}

ProjectConfig load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return load_config_text(ss.str());
}

void apply_preset(ProjectConfig& cfg, const std::string& preset) {
  if (preset == "none" || preset.empty()) return;
  if (preset == "smoke") {
    cfg.env.episodes = 20;
    cfg.env.max_steps = 100;
    cfg.sac.hidden = {32, 32};
    cfg.sac.batch_size = 32;
    cfg.sac.warmup_steps = 200;
    cfg.sac.update_every = 4;
    cfg.sac.buffer_capacity = 20000;
    cfg.checkpoint_every = 10;
  } else if (preset == "desk") {
    cfg.env.episodes = 600;
    cfg.env.max_steps = 300;
    cfg.sac.hidden = {64, 64};
    cfg.sac.batch_size = 64;
    cfg.sac.warmup_steps = 1000;
    cfg.sac.update_every = 2;
    cfg.sac.buffer_capacity = 100000;
    cfg.checkpoint_every = 100;
  } else if (preset == "paper") {
    cfg.env.episodes = 3300;
    cfg.env.max_steps = 300;
    cfg.sac.hidden = {512, 256, 256};
    cfg.sac.batch_size = 256;
    cfg.sac.warmup_steps = 1000;
    cfg.sac.update_every = 1;
    cfg.sac.buffer_capacity = 100000;
    cfg.checkpoint_every = 100;
  } else {
    throw ConfigError("unknown preset '" + preset + "' (expected smoke|desk|paper|none)");
  }
}

}  // namespace rldwa
