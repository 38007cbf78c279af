#pragma once

#include <stdexcept>
#include <string>

#include "rldwa/dwa.hpp"
#include "rldwa/env.hpp"
#include "rldwa/perception.hpp"
#include "rldwa/sac.hpp"

namespace rldwa {

/// Drive configurations compared at evaluation time.
/// - OmniRl: (vx, vy) from the omnidirectional window, yaw from the agent.
/// - Differential: vy pinned to 0; (vx, omega) from a classic window whose
///   cost includes facing the person. No agent involved.
/// - DifferentialAgent: vy pinned to 0, yaw from the agent, vx from the
///   window. Kept for comparison; not the reported baseline.
enum class DriveMode { OmniRl, Differential, DifferentialAgent };

DriveMode drive_mode_from_string(const std::string& name);
std::string to_string(DriveMode mode);

struct ControlContext {
  const SacAgent* agent = nullptr;  // required by the agent-driven modes
  DwaConfig dwa;
  PlatformLimits limits;
  double d_max = 8.0;
  double omega_max = 1.0;
};

/// One control period: picks the fused velocity command for the given
/// drive mode from the current view and track. Every component of the
/// returned command is clamped to the platform limits.
Velocity2D control_tick(const WorldView& view, const TrackState& track, DriveMode mode,
                        const ControlContext& ctx, double omega_prev,
                        PlanDiagnostics* diag = nullptr);

}  // namespace rldwa
