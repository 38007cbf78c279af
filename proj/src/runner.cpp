#include "rldwa/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "rldwa/metrics.hpp"
#include "rldwa/svg.hpp"

namespace rldwa {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string scenario_label_from_path(const std::string& path) {
  return fs::path(path).stem().string();
}

void ensure_dir(const std::string& dir) {
  if (dir.empty()) throw ConfigError("output directory must not be empty");
  fs::create_directories(dir);
}

std::string run_basename(int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "run%03d", index);
  return buf;
}

json summary_from_logs(const std::vector<RunLog>& logs) {
  json per_run = json::array();
  double mean = 0, std_dev = 0, rmse = 0, mae = 0, visible = 0;
  long collisions = 0;
  for (const RunLog& log : logs) {
    std::vector<double> series;
    series.reserve(log.rows.size());
    long run_collisions = 0;
    double run_visible = 0;
    for (const RunLogRow& r : log.rows) {
      series.push_back(r.dtheta_deg);
      run_collisions += r.collision ? 1 : 0;
      run_visible += r.visible ? 1.0 : 0.0;
    }
    const MetricsSummary m = compute_metrics(series);
    run_visible /= static_cast<double>(log.rows.size());
    json entry;
    entry["run"] = log.run_index;
    entry["steps"] = log.rows.size();
    entry["mean"] = m.mean;
    entry["std"] = m.std_dev;
    entry["rmse"] = m.rmse;
    entry["mae"] = m.mae;
    entry["visible_fraction"] = run_visible;
    entry["collisions"] = run_collisions;
    per_run.push_back(entry);

    mean += m.mean;
    std_dev += m.std_dev;
    rmse += m.rmse;
    mae += m.mae;
    visible += run_visible;
    collisions += run_collisions;
  }
  const double n = static_cast<double>(logs.size());

  json out;
  out["scenario"] = logs.empty() ? "" : logs.front().scenario;
  out["mode"] = logs.empty() ? "" : logs.front().mode;
  out["runs"] = logs.size();
  // Table-style aggregation: the arithmetic mean of the per-run metrics.
  out["dtheta_deg"] = {{"mean", mean / n}, {"std", std_dev / n}, {"rmse", rmse / n}, {"mae", mae / n}};
  out["visible_fraction"] = visible / n;
  out["collision_total"] = collisions;
  out["per_run"] = per_run;
  return out;
}

Pose2D jitter_start_pose(const ProjectConfig& cfg, Rng& rng) {
  const Pose2D base = cfg.world.robot.pose;
  for (int attempt = 0; attempt < 100; ++attempt) {
    Pose2D pose;
    pose.x = base.x + rng.uniform(-cfg.eval_start_jitter_xy, cfg.eval_start_jitter_xy);
    pose.y = base.y + rng.uniform(-cfg.eval_start_jitter_xy, cfg.eval_start_jitter_xy);
    pose.heading = wrap_angle(
        base.heading + rng.uniform(-cfg.eval_start_jitter_heading, cfg.eval_start_jitter_heading));
    bool free = true;
    for (const Obstacle& ob : cfg.world.obstacles) {
      if (disc_intersects_obstacle(pose.position(), cfg.world.robot.footprint_radius + 0.05, ob)) {
        free = false;
        break;
      }
    }
    if (free) return pose;
  }
  return base;
}

}  // namespace

void run_training(const TrainOptions& opts) {
  ProjectConfig cfg = load_config_file(opts.config_path);
  apply_preset(cfg, opts.preset);
  if (opts.seed_overrides_config) cfg.seed = opts.seed;
  ensure_dir(opts.out_dir);

  FollowEnv env(cfg.world, cfg.camera, cfg.noise, cfg.dwa, cfg.env, cfg.seed + 1);
  SacAgent agent(cfg.sac, cfg.seed + 2);
  ReplayBuffer buffer(cfg.sac.buffer_capacity);
  Rng rng(cfg.seed + 3);

  const std::string log_path = opts.out_dir + "/training_log.csv";
  std::ofstream log(log_path);
  if (!log) throw std::runtime_error("cannot open '" + log_path + "' for writing");
  log << "episode,return,mean_r_yaw,epsilon,critic1_loss,critic2_loss,actor_loss,alpha,entropy\n";

  long total_steps = 0;
  for (long ep = 0; ep < cfg.env.episodes; ++ep) {
    const double eps = epsilon_at(cfg.sac.epsilon, ep);
    StateVec state = env.reset(ep);
    double ep_return = 0.0, ep_r_yaw = 0.0;
    LossReport sums;
    long updates = 0;

    for (int t = 0; t < cfg.env.max_steps; ++t) {
      double action;
      if (total_steps < cfg.sac.warmup_steps) {
        action = rng.uniform(cfg.sac.action_low, cfg.sac.action_high);
      } else {
        action = agent.act(state.as_array(), /*deterministic=*/false, eps, rng);
      }

      const EnvStepResult step = env.step(action);

      Transition tr;
      tr.state = state.as_array();
      tr.action = action;
      tr.reward = step.reward.total;
      tr.next_state = step.state.as_array();
      tr.done = step.done ? 1.0 : 0.0;
      buffer.push(tr);

      ep_return += step.reward.total;
      ep_r_yaw += step.reward.r_yaw;
      ++total_steps;

      if (total_steps >= cfg.sac.warmup_steps &&
          buffer.size() >= static_cast<std::size_t>(cfg.sac.batch_size) &&
          total_steps % cfg.sac.update_every == 0) {
        const auto batch = buffer.sample(static_cast<std::size_t>(cfg.sac.batch_size), rng);
        const LossReport r = agent.train_step(batch, rng);
        sums.critic1 += r.critic1;
        sums.critic2 += r.critic2;
        sums.actor += r.actor;
        sums.alpha = r.alpha;
        sums.entropy += r.entropy;
        ++updates;
      }

      state = step.state;
      if (step.done) break;
    }

    const double inv_u = updates > 0 ? 1.0 / static_cast<double>(updates) : 0.0;
    log << ep << ',' << format_double(ep_return) << ','
        << format_double(ep_r_yaw / cfg.env.max_steps) << ',' << format_double(eps) << ','
        << format_double(sums.critic1 * inv_u) << ',' << format_double(sums.critic2 * inv_u)
        << ',' << format_double(sums.actor * inv_u) << ','
        << format_double(updates > 0 ? sums.alpha : agent.alpha()) << ','
        << format_double(sums.entropy * inv_u) << "\n";

    if (cfg.checkpoint_every > 0 && (ep + 1) % cfg.checkpoint_every == 0) {
      char name[48];
      std::snprintf(name, sizeof(name), "/checkpoint_ep%06ld.rldwa", ep + 1);
      agent.save_checkpoint(opts.out_dir + name);
    }
    if (!opts.quiet && (ep % 25 == 0 || ep + 1 == cfg.env.episodes)) {
      std::cout << "episode " << ep << "  return " << ep_return << "  eps " << eps << "  alpha "
                << agent.alpha() << "\n";
    }
  }

  agent.save_checkpoint(opts.out_dir + "/checkpoint_final.rldwa");
}

RunLog run_eval_episode(const ProjectConfig& cfg, const SacAgent* agent, DriveMode mode,
                        const std::string& scenario_label, int run_index,
                        std::uint64_t run_seed) {
  Rng rng(run_seed);

  WorldState world = cfg.world;
  world.robot.pose = jitter_start_pose(cfg, rng);

  ControlContext ctx;
  ctx.agent = agent;
  ctx.dwa = cfg.dwa;
  ctx.limits = world.limits;
  ctx.d_max = cfg.env.d_max;
  ctx.omega_max = cfg.env.omega_max;

  TrackState track;
  const auto first = observe(world, cfg.camera, cfg.noise, rng);
  track = update_track(track, first, world.robot.pose, cfg.camera, world.time);
  if (!track.ever_seen) {
    track.goal_estimate = world.person.position;
    track.ever_seen = true;
  }

  RunLog log;
  log.scenario = scenario_label;
  log.mode = to_string(mode);
  log.run_index = run_index;
  log.dt = cfg.env.dt;
  log.obstacles = world.obstacles;
  log.rows.reserve(static_cast<std::size_t>(cfg.eval_steps));

  double omega_prev = 0.0;
  for (int t = 0; t < cfg.eval_steps; ++t) {
    WorldView view;
    view.robot_pose = world.robot.pose;
    view.velocity = world.robot.velocity;
    view.scan = scan(world);

    const Velocity2D cmd = control_tick(view, track, mode, ctx, omega_prev);

    step_robot(world, cmd, cfg.env.dt);
    step_person(world, cfg.env.dt);
    const auto det = observe(world, cfg.camera, cfg.noise, rng);
    track = update_track(track, det, world.robot.pose, cfg.camera, world.time);

    const double gap = distance(world.robot.pose.position(), world.person.position);
    const double dtheta = gap < 1e-12 ? 0.0 : bearing_error(world.robot.pose, world.person.position);
    const RewardTerms rew = reward(dtheta, omega_prev, cmd.omega);

    RunLogRow row;
    row.t = world.time;
    row.robot = world.robot.pose;
    row.person = world.person.position;
    row.goal_estimate = track.goal_estimate;
    row.dtheta_deg = dtheta * 180.0 / kPi;
    row.cmd = cmd;
    row.visible = det.has_value();
    row.collision = world.collided_last_step;
    row.r_yaw = rew.r_yaw;
    row.r_smooth = rew.r_smooth;
    row.r_total = rew.total;
    log.rows.push_back(row);

    omega_prev = cmd.omega;
  }
  return log;
}

std::string run_evaluation(const EvalOptions& opts) {
  const ProjectConfig cfg = load_config_file(opts.scenario_path);
  DriveMode mode;
  try {
    mode = drive_mode_from_string(opts.mode);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (opts.runs < 1) throw ConfigError("eval: runs must be >= 1");
  ensure_dir(opts.out_dir);

  const SacAgent agent = SacAgent::load_checkpoint(opts.checkpoint_path);
  const std::string label = scenario_label_from_path(opts.scenario_path);

  std::vector<RunLog> logs;
  for (int i = 0; i < opts.runs; ++i) {
    const std::uint64_t run_seed = opts.seed + 1000003ull * static_cast<std::uint64_t>(i + 1);
    RunLog log = run_eval_episode(cfg, &agent, mode, label, i + 1, run_seed);
    const std::string base = opts.out_dir + "/" + run_basename(i + 1);
    write_runlog_csv(base + ".csv", log);
    write_trajectory_svg(base + ".svg", log);
    logs.push_back(std::move(log));
  }

  const json summary = summary_from_logs(logs);
  const std::string text = summary.dump(2) + "\n";
  std::ofstream f(opts.out_dir + "/summary.json");
  if (!f) throw std::runtime_error("cannot write summary.json");
  f << text;
  if (!opts.quiet) {
    std::cout << label << " [" << opts.mode << "] runs=" << opts.runs
              << "  rmse=" << summary["dtheta_deg"]["rmse"].get<double>()
              << " deg  mae=" << summary["dtheta_deg"]["mae"].get<double>()
              << " deg  visible=" << summary["visible_fraction"].get<double>() << "\n";
  }
  return text;
}

void run_replay(const std::string& log_csv, const std::string& out_svg) {
  const RunLog log = read_runlog_csv(log_csv);
  write_trajectory_svg(out_svg, log);
}

std::string run_metrics_dir(const std::string& logs_dir, const std::string& out_json) {
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(logs_dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("run", 0) == 0 && entry.path().extension() == ".csv")
      files.push_back(entry.path().string());
  }
  if (files.empty())
    throw std::runtime_error("no run###.csv logs found under '" + logs_dir + "'");
  std::sort(files.begin(), files.end());

  std::vector<RunLog> logs;
  for (const std::string& f : files) logs.push_back(read_runlog_csv(f));

  const std::string text = summary_from_logs(logs).dump(2) + "\n";
  if (!out_json.empty()) {
    std::ofstream f(out_json);
    if (!f) throw std::runtime_error("cannot write '" + out_json + "'");
    f << text;
  }
  return text;
}

}  // namespace rldwa
