#include "rldwa/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rldwa {

RewardTerms reward(double dtheta, double omega_prev, double omega_now) {
  if (!std::isfinite(dtheta) || !std::isfinite(omega_prev) || !std::isfinite(omega_now))
    throw std::invalid_argument("reward: non-finite input");
  RewardTerms r;
  r.r_yaw = 1.0 - 2.0 * std::sqrt(std::abs(dtheta / kPi));
  r.r_smooth = -std::abs(omega_prev - omega_now);
  r.total = r.r_yaw + r.r_smooth;
  return r;
}

StateVec observe_state(const Pose2D& robot, const TrackState& track, double omega_prev,
                       double d_max, double omega_max) {
  if (!track.ever_seen) throw std::runtime_error("observe_state: no goal estimate yet");
  StateVec s;
  const double d = distance(robot.position(), track.goal_estimate);
  s.d_norm = d / d_max;
  s.dtheta_norm = d < 1e-12 ? 0.0 : bearing_error(robot, track.goal_estimate) / kPi;
  s.omega_prev_norm = omega_prev / omega_max;
  return s;
}

StateVec observe_state(const WorldState& world, const TrackState& track, double omega_prev,
                       double d_max, double omega_max) {
  return observe_state(world.robot.pose, track, omega_prev, d_max, omega_max);
}

EnvStepResult env_step(WorldState& world, TrackState& track, double action_omega,
                       Velocity2D dwa_linear, int step_index, const EnvConfig& cfg,
                       const CameraModel& cam, const NoiseModel& noise, Rng& rng) {
  const double omega_prev = world.robot.velocity.omega;

  Velocity2D cmd;
  cmd.vx = std::clamp(dwa_linear.vx, -world.limits.vx_max, world.limits.vx_max);
  cmd.vy = std::clamp(dwa_linear.vy, -world.limits.vy_max, world.limits.vy_max);
  cmd.omega = std::clamp(action_omega, -world.limits.omega_max, world.limits.omega_max);

  step_robot(world, cmd, cfg.dt);
  step_person(world, cfg.dt);

  const auto det = observe(world, cam, noise, rng);
  track = update_track(track, det, world.robot.pose, cam, world.time);

  const Point2D target = cfg.reward_from_track ? track.goal_estimate : world.person.position;
  const double gap = distance(world.robot.pose.position(), target);
  const double dtheta = gap < 1e-12 ? 0.0 : bearing_error(world.robot.pose, target);

  EnvStepResult out;
  out.reward = reward(dtheta, omega_prev, cmd.omega);
  out.state = observe_state(world, track, cmd.omega, cfg.d_max, cfg.omega_max);
  out.done = step_index + 1 >= cfg.max_steps;
  out.collision = world.collided_last_step;
  out.visible = det.has_value();
  return out;
}

FollowEnv::FollowEnv(WorldState initial, CameraModel cam, NoiseModel noise, DwaConfig dwa,
                     EnvConfig cfg, std::uint64_t seed)
    : initial_(std::move(initial)),
      world_(initial_),
      cam_(cam),
      noise_(noise),
      dwa_(dwa),
      cfg_(cfg),
      rng_(seed) {}

Pose2D FollowEnv::sample_start_pose() {
  const auto& box = cfg_.sampler_box;
  for (int attempt = 0; attempt < 100; ++attempt) {
    Pose2D pose;
    pose.x = rng_.uniform(box[0], box[2]);
    pose.y = rng_.uniform(box[1], box[3]);
    pose.heading = wrap_angle(rng_.uniform(-kPi, kPi));
    bool free = true;
    for (const Obstacle& ob : initial_.obstacles) {
      if (disc_intersects_obstacle(pose.position(),
                                   initial_.robot.footprint_radius + cfg_.sampler_margin, ob)) {
        free = false;
        break;
      }
    }
    if (free) return pose;
  }
  throw std::runtime_error("FollowEnv: no obstacle-free start pose found in the sampler box");
}

StateVec FollowEnv::reset(long episode_index) {
  if (episode_index < 0) throw std::invalid_argument("FollowEnv::reset: negative episode index");

  const bool use_sampler =
      cfg_.sampler_box[2] > cfg_.sampler_box[0] && cfg_.sampler_box[3] > cfg_.sampler_box[1];
  if (!have_start_pose_ || (use_sampler && episode_index % cfg_.reshuffle_period == 0)) {
    start_pose_ = use_sampler ? sample_start_pose() : initial_.robot.pose;
    have_start_pose_ = true;
  }

  world_ = initial_;
  world_.robot.pose = start_pose_;
  world_.robot.velocity = {};
  world_.time = 0.0;
  world_.collided_last_step = false;
  world_.collision_count = 0;

  track_ = TrackState{};
  const auto det = observe(world_, cam_, noise_, rng_);
  track_ = update_track(track_, det, world_.robot.pose, cam_, world_.time);
  if (!track_.ever_seen) {
    // Person not visible from the start pose: seed the track from ground
    // truth so the state features are defined from step one.
    track_.goal_estimate = world_.person.position;
    track_.ever_seen = true;
  }

  omega_prev_ = 0.0;
  t_ = 0;
  return observe_state(world_, track_, omega_prev_, cfg_.d_max, cfg_.omega_max);
}

Velocity2D FollowEnv::linear_command(double action_omega) {
  const Point2D goal =
      truncate_goal(world_.robot.pose.position(), track_.goal_estimate, dwa_.standoff);
  if (cfg_.linear_scripted) return scripted_linear(world_.robot.pose, goal, world_.limits);

  WorldView view;
  view.robot_pose = world_.robot.pose;
  view.velocity = world_.robot.velocity;
  view.scan = scan(world_);
  return plan_linear(view, goal, action_omega, dwa_);
}

EnvStepResult FollowEnv::step(double action_omega) {
  const double omega = std::clamp(action_omega, -world_.limits.omega_max, world_.limits.omega_max);
  const Velocity2D linear = linear_command(omega);
  EnvStepResult out = env_step(world_, track_, omega, linear, t_, cfg_, cam_, noise_, rng_);
  omega_prev_ = world_.robot.velocity.omega;
  ++t_;
  return out;
}

Velocity2D scripted_linear(const Pose2D& robot, Point2D goal, const PlatformLimits& limits) {
  const Point2D d = goal - robot.position();
  const double c = std::cos(robot.heading);
  const double s = std::sin(robot.heading);
  Velocity2D v;
  v.vx = std::clamp(c * d.x + s * d.y, -limits.vx_max, limits.vx_max);
  v.vy = std::clamp(-s * d.x + c * d.y, -limits.vy_max, limits.vy_max);
  return v;
}

}  // namespace rldwa
