#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "rldwa/dwa.hpp"
#include "rldwa/geometry.hpp"
#include "rldwa/perception.hpp"
#include "rldwa/rng.hpp"
#include "rldwa/world.hpp"

namespace rldwa {

/// Normalized policy input: distance to the goal estimate, signed heading
/// error, and the previous yaw command.
struct StateVec {
  double d_norm = 0.0;           // d / d_max
  double dtheta_norm = 0.0;      // heading error / pi, sign preserved
  double omega_prev_norm = 0.0;  // previous yaw command / omega_max

  std::array<double, 3> as_array() const { return {d_norm, dtheta_norm, omega_prev_norm}; }
};

struct RewardTerms {
  double r_yaw = 0.0;     // 1 - 2*sqrt(|dtheta/pi|), in [-1, 1]
  double r_smooth = 0.0;  // -|omega_prev - omega_now|, <= 0
  double total = 0.0;
};

/// r_yaw + r_smooth of the shaped tracking reward.
RewardTerms reward(double dtheta, double omega_prev, double omega_now);

/// Builds the policy state against the track's goal estimate (not ground
/// truth). Throws if the track has never seen the person.
StateVec observe_state(const Pose2D& robot, const TrackState& track, double omega_prev,
                       double d_max, double omega_max);
StateVec observe_state(const WorldState& world, const TrackState& track, double omega_prev,
                       double d_max, double omega_max);

struct EnvConfig {
  double dt = 0.1;
  double d_max = 8.0;
  double omega_max = 1.0;
  int max_steps = 300;  // T
  long episodes = 600;
  int reshuffle_period = 20;
  std::array<double, 4> sampler_box{0.0, 0.0, 0.0, 0.0};  // xmin, ymin, xmax, ymax
  double sampler_margin = 0.1;   // extra clearance required around sampled poses
  bool reward_from_track = false;  // default: ground-truth heading error
  bool linear_scripted = false;    // scripted translation instead of DWA
};

struct EnvStepResult {
  StateVec state;
  RewardTerms reward;
  bool done = false;
  bool collision = false;
  bool visible = false;
};

/// One MDP transition: fuses [vx, vy, omega], advances robot and person,
/// refreshes perception and the track, then scores the post-step heading
/// error. `step_index` is the zero-based index of the step being taken.
EnvStepResult env_step(WorldState& world, TrackState& track, double action_omega,
                       Velocity2D dwa_linear, int step_index, const EnvConfig& cfg,
                       const CameraModel& cam, const NoiseModel& noise, Rng& rng);

/// Episode manager owning the world template, the track, and the linear
/// velocity source used during training.
class FollowEnv {
 public:
  FollowEnv(WorldState initial, CameraModel cam, NoiseModel noise, DwaConfig dwa, EnvConfig cfg,
            std::uint64_t seed);

  /// Starts an episode. The start pose is redrawn from the sampler box on
  /// episodes that are multiples of reshuffle_period, otherwise the
  /// previous start pose is reused. The person returns to its path start.
  StateVec reset(long episode_index);

  EnvStepResult step(double action_omega);

  const WorldState& world() const { return world_; }
  const TrackState& track() const { return track_; }
  const EnvConfig& config() const { return cfg_; }
  int current_step() const { return t_; }
  double omega_prev() const { return omega_prev_; }

 private:
  Pose2D sample_start_pose();
  Velocity2D linear_command(double action_omega);

  WorldState initial_;
  WorldState world_;
  TrackState track_;
  CameraModel cam_;
  NoiseModel noise_;
  DwaConfig dwa_;
  EnvConfig cfg_;
  Rng rng_;
  Pose2D start_pose_;
  bool have_start_pose_ = false;
  double omega_prev_ = 0.0;
  int t_ = 0;
};

/// Scripted translation fallback: drive straight at the truncated goal,
/// clamped per axis, ignoring obstacles.
Velocity2D scripted_linear(const Pose2D& robot, Point2D goal, const PlatformLimits& limits);

}  // namespace rldwa
