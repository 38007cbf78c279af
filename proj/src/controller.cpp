#include "rldwa/controller.hpp"

#include <algorithm>
#include <cmath>

namespace rldwa {

DriveMode drive_mode_from_string(const std::string& name) {
  if (name == "omni") return DriveMode::OmniRl;
  if (name == "diff") return DriveMode::Differential;
  if (name == "diff_agent") return DriveMode::DifferentialAgent;
  throw std::invalid_argument("unknown drive mode '" + name + "' (expected omni|diff|diff_agent)");
}

std::string to_string(DriveMode mode) {
  switch (mode) {
    case DriveMode::OmniRl: return "omni";
    case DriveMode::Differential: return "diff";
    case DriveMode::DifferentialAgent: return "diff_agent";
  }
  return "?";
}

Velocity2D control_tick(const WorldView& view, const TrackState& track, DriveMode mode,
                        const ControlContext& ctx, double omega_prev, PlanDiagnostics* diag) {
  if (!track.ever_seen) throw std::runtime_error("control_tick: track has no goal estimate");
  const Point2D goal =
      truncate_goal(view.robot_pose.position(), track.goal_estimate, ctx.dwa.standoff);

  Velocity2D cmd;
  switch (mode) {
    case DriveMode::OmniRl: {
      if (!ctx.agent) throw std::runtime_error("control_tick: omni mode needs an agent");
      const StateVec s =
          observe_state(view.robot_pose, track, omega_prev, ctx.d_max, ctx.omega_max);
      Rng unused(0);  // deterministic action path draws nothing
      const double omega = ctx.agent->act(s.as_array(), /*deterministic=*/true, 0.0, unused);
      cmd = plan_linear(view, goal, omega, ctx.dwa, diag);
      break;
    }
    case DriveMode::Differential: {
      cmd = plan_differential(view, goal, track.goal_estimate, ctx.dwa, diag);
      break;
    }
    case DriveMode::DifferentialAgent: {
      if (!ctx.agent) throw std::runtime_error("control_tick: diff_agent mode needs an agent");
      const StateVec s =
          observe_state(view.robot_pose, track, omega_prev, ctx.d_max, ctx.omega_max);
      Rng unused(0);
      const double omega = ctx.agent->act(s.as_array(), /*deterministic=*/true, 0.0, unused);
      // Degenerate yaw window pinned at the agent's command.
      WorldView pinned = view;
      pinned.velocity.omega = omega;
      DwaConfig cfg = ctx.dwa;
      cfg.alpha = 0.0;
      cfg.w_heading = 0.0;  // yaw is not the planner's to choose here
      cmd = plan_differential(pinned, goal, track.goal_estimate, cfg, diag);
      cmd.omega = omega;
      break;
    }
  }

  cmd.vx = std::clamp(cmd.vx, -ctx.limits.vx_max, ctx.limits.vx_max);
  cmd.vy = std::clamp(cmd.vy, -ctx.limits.vy_max, ctx.limits.vy_max);
  cmd.omega = std::clamp(cmd.omega, -ctx.limits.omega_max, ctx.limits.omega_max);
  return cmd;
}

}  // namespace rldwa
