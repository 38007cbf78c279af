#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "rldwa/geometry.hpp"
#include "rldwa/world.hpp"

namespace rldwa {

struct DwaConfig {
  double v_limit = 0.5;       // m/s per linear axis
  double accel = 1.0;         // m/s^2 per linear axis
  double omega_limit = 1.0;   // rad/s (differential window)
  double alpha = 2.0;         // rad/s^2 (differential window)
  int samples_per_axis = 11;
  double horizon = 1.5;       // s
  double rollout_dt = 0.1;    // s, also the control period for the window
  double w_goal = 1.0;
  double w_obstacle = 0.3;
  double w_speed = 0.1;
  double w_heading = 0.8;     // differential mode only
  double standoff = 1.0;      // m
  double inflation = 0.35;    // m, absolute clearance floor (footprint + margin)
};

struct VelocityWindow {
  double vx_min = 0.0, vx_max = 0.0;
  double vy_min = 0.0, vy_max = 0.0;
};

/// Reachable velocity interval per linear axis after one control period.
VelocityWindow dynamic_window(const Velocity2D& current, const DwaConfig& cfg, double dt);

/// Planner input slice: the robot pose the scan was taken from, the current
/// velocity, and the scan itself.
struct WorldView {
  Pose2D robot_pose;
  Velocity2D velocity;
  LidarScan scan;
};

struct PlanDiagnostics {
  bool blocked = false;
  int admissible_count = 0;
  int candidate_count = 0;
  double chosen_clearance = std::numeric_limits<double>::infinity();
  double chosen_cost = 0.0;
  std::vector<std::uint8_t> admissible;  // per candidate, row-major grid order
};

/// Constant-twist forward simulation sharing integrate_twist with the
/// simulator; returns the poses after each of the horizon/dt steps.
std::vector<Pose2D> rollout(const Pose2D& start, const Velocity2D& cmd, double horizon, double dt);

/// Omnidirectional window search over (vx, vy) with the yaw rate held at
/// omega_fixed. Returns the fused command (vx, vy, omega_fixed). Candidates
/// whose trajectory clearance drops below cfg.inflation are inadmissible;
/// when every candidate is, the stop command is returned and the
/// diagnostics flag the plan as blocked.
Velocity2D plan_linear(const WorldView& view, Point2D goal, double omega_fixed,
                       const DwaConfig& cfg, PlanDiagnostics* diag = nullptr);

/// Differential-drive window search over (vx, omega) with vy pinned to
/// zero. The cost adds w_heading * |bearing error to face_target at the
/// end pose|.
Velocity2D plan_differential(const WorldView& view, Point2D goal, Point2D face_target,
                             const DwaConfig& cfg, PlanDiagnostics* diag = nullptr);

/// Pulls the navigation goal back to a standoff distance from the person;
/// inside the standoff the robot's own position is returned.
Point2D truncate_goal(Point2D robot, Point2D person, double standoff);

}  // namespace rldwa
