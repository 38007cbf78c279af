#pragma once

#include <string>
#include <vector>

#include "rldwa/geometry.hpp"
#include "rldwa/world.hpp"

namespace rldwa {

/// One control tick of an evaluation run. dtheta_deg is the ground-truth
/// heading error toward the person, in degrees.
struct RunLogRow {
  double t = 0.0;
  Pose2D robot;
  Point2D person;
  Point2D goal_estimate;
  double dtheta_deg = 0.0;
  Velocity2D cmd;
  bool visible = false;
  bool collision = false;
  double r_yaw = 0.0;
  double r_smooth = 0.0;
  double r_total = 0.0;
};

struct RunLog {
  std::string scenario;  // scenario label the run came from
  std::string mode;      // omni | diff | diff_agent
  int run_index = 0;     // 1-based index within an evaluation batch
  double dt = 0.1;
  std::vector<Obstacle> obstacles;  // carried so replays can draw the scene
  std::vector<RunLogRow> rows;
};

/// CSV with `#` header lines for mode, dt, and the obstacle list (compact
/// JSON). Doubles are printed with %.17g so parsing them back is exact.
void write_runlog_csv(const std::string& path, const RunLog& log);

/// Throws std::runtime_error naming the first malformed row.
RunLog read_runlog_csv(const std::string& path);

std::string format_double(double v);

}  // namespace rldwa
