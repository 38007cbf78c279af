#include "rldwa/dwa.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rldwa {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kStationary = 1e-12;
}  // namespace

VelocityWindow dynamic_window(const Velocity2D& current, const DwaConfig& cfg, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dynamic_window: dt must be > 0");
  VelocityWindow w;
  w.vx_min = std::max(-cfg.v_limit, current.vx - cfg.accel * dt);
  w.vx_max = std::min(cfg.v_limit, current.vx + cfg.accel * dt);
  w.vy_min = std::max(-cfg.v_limit, current.vy - cfg.accel * dt);
  w.vy_max = std::min(cfg.v_limit, current.vy + cfg.accel * dt);
  return w;
}

std::vector<Pose2D> rollout(const Pose2D& start, const Velocity2D& cmd, double horizon, double dt) {
  const int steps = std::max(1, static_cast<int>(std::llround(horizon / dt)));
  std::vector<Pose2D> poses;
  poses.reserve(static_cast<std::size_t>(steps));
  Pose2D p = start;
  for (int k = 0; k < steps; ++k) {
    p = integrate_twist(p, cmd, dt);
    poses.push_back(p);
  }
  return poses;
}

namespace {

struct ScanPoint {
  Point2D p;
  double dist_from_start;
};

// World-frame endpoints of the beams that hit something, sorted by distance
// from the robot so the per-candidate clearance search can stop early.
std::vector<ScanPoint> hit_points(const WorldView& view) {
  std::vector<ScanPoint> pts;
  const Pose2D& pose = view.robot_pose;
  for (std::size_t i = 0; i < view.scan.ranges.size(); ++i) {
    const double r = view.scan.ranges[i];
    if (r >= view.scan.max_range - 1e-9) continue;
    const double ang = pose.heading + view.scan.beam_angle(i);
    pts.push_back({{pose.x + r * std::cos(ang), pose.y + r * std::sin(ang)}, r});
  }
  std::sort(pts.begin(), pts.end(),
            [](const ScanPoint& a, const ScanPoint& b) { return a.dist_from_start < b.dist_from_start; });
  return pts;
}

// Exact min distance from the trajectory positions to the scan points. The
// trajectory stays within speed*horizon of the start, so points are visited
// in ascending start distance and the scan stops once no later point can
// lower the minimum.
double trajectory_clearance(const std::vector<Pose2D>& poses, double reach,
                            const std::vector<ScanPoint>& pts) {
  double best = kInf;
  for (const ScanPoint& sp : pts) {
    if (sp.dist_from_start - reach >= best) break;
    for (const Pose2D& pose : poses) {
      const double d = std::hypot(sp.p.x - pose.x, sp.p.y - pose.y);
      if (d < best) best = d;
    }
  }
  return best;
}

struct Candidate {
  Velocity2D cmd;
  double cost = kInf;
  double clearance = kInf;
  bool admissible = false;
};

double axis_sample(double lo, double hi, int i, int n) {
  if (n <= 1 || hi <= lo) return lo;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

// Lower cost wins; ties go to the slower candidate, then lexicographic
// (vx, vy/omega) so the argmin is reproducible.
bool better(const Candidate& a, const Candidate& b) {
  if (a.cost != b.cost) return a.cost < b.cost;
  const double sa = std::hypot(a.cmd.vx, a.cmd.vy);
  const double sb = std::hypot(b.cmd.vx, b.cmd.vy);
  if (sa != sb) return sa < sb;
  if (a.cmd.vx != b.cmd.vx) return a.cmd.vx < b.cmd.vx;
  if (a.cmd.vy != b.cmd.vy) return a.cmd.vy < b.cmd.vy;
  return a.cmd.omega < b.cmd.omega;
}

}  // namespace

Velocity2D plan_linear(const WorldView& view, Point2D goal, double omega_fixed,
                       const DwaConfig& cfg, PlanDiagnostics* diag) {
  if (!std::isfinite(goal.x) || !std::isfinite(goal.y))
    throw std::invalid_argument("plan_linear: non-finite goal");

  const VelocityWindow w = dynamic_window(view.velocity, cfg, cfg.rollout_dt);
  const std::vector<ScanPoint> pts = hit_points(view);
  const int n = cfg.samples_per_axis;

  if (diag) {
    diag->candidate_count = n * n;
    diag->admissible.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
    diag->admissible_count = 0;
  }

  Candidate best;
  bool any_admissible = false;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Candidate c;
      c.cmd.vx = axis_sample(w.vx_min, w.vx_max, i, n);
      c.cmd.vy = axis_sample(w.vy_min, w.vy_max, j, n);
      c.cmd.omega = omega_fixed;

      const double speed = std::hypot(c.cmd.vx, c.cmd.vy);
      const std::vector<Pose2D> poses = rollout(view.robot_pose, c.cmd, cfg.horizon, cfg.rollout_dt);
      c.clearance = trajectory_clearance(poses, speed * cfg.horizon, pts);
      c.admissible = speed < kStationary || c.clearance >= cfg.inflation;
      if (!c.admissible) continue;

      const Pose2D& end = poses.back();
      const double goal_dist = std::hypot(goal.x - end.x, goal.y - end.y);
      const double obstacle_cost = std::isinf(c.clearance) ? 0.0 : 1.0 / c.clearance;
      c.cost = cfg.w_goal * goal_dist + cfg.w_obstacle * obstacle_cost +
               cfg.w_speed * (cfg.v_limit - speed);

      if (diag) {
        diag->admissible[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                         static_cast<std::size_t>(j)] = 1;
        ++diag->admissible_count;
      }
      if (!any_admissible || better(c, best)) {
        best = c;
        any_admissible = true;
      }
    }
  }

  if (!any_admissible) {
    // Stopping never translates, so it is always safe.
    if (diag) {
      diag->blocked = true;
      diag->chosen_clearance = pts.empty() ? kInf : pts.front().dist_from_start;
      diag->chosen_cost = kInf;
    }
    return {0.0, 0.0, omega_fixed};
  }

  if (diag) {
    diag->blocked = false;
    diag->chosen_clearance = best.clearance;
    diag->chosen_cost = best.cost;
  }
  return best.cmd;
}

Velocity2D plan_differential(const WorldView& view, Point2D goal, Point2D face_target,
                             const DwaConfig& cfg, PlanDiagnostics* diag) {
  if (!std::isfinite(goal.x) || !std::isfinite(goal.y))
    throw std::invalid_argument("plan_differential: non-finite goal");

  const double dt = cfg.rollout_dt;
  const double vx_min = std::max(-cfg.v_limit, view.velocity.vx - cfg.accel * dt);
  const double vx_max = std::min(cfg.v_limit, view.velocity.vx + cfg.accel * dt);
  const double om_min = std::max(-cfg.omega_limit, view.velocity.omega - cfg.alpha * dt);
  const double om_max = std::min(cfg.omega_limit, view.velocity.omega + cfg.alpha * dt);

  const std::vector<ScanPoint> pts = hit_points(view);
  const int n = cfg.samples_per_axis;

  if (diag) {
    diag->candidate_count = n * n;
    diag->admissible.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
    diag->admissible_count = 0;
  }

  Candidate best;
  bool any_admissible = false;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Candidate c;
      c.cmd.vx = axis_sample(vx_min, vx_max, i, n);
      c.cmd.vy = 0.0;
      c.cmd.omega = axis_sample(om_min, om_max, j, n);

      const double speed = std::abs(c.cmd.vx);
      const std::vector<Pose2D> poses = rollout(view.robot_pose, c.cmd, cfg.horizon, cfg.rollout_dt);
      c.clearance = trajectory_clearance(poses, speed * cfg.horizon, pts);
      c.admissible = speed < kStationary || c.clearance >= cfg.inflation;
      if (!c.admissible) continue;

      const Pose2D& end = poses.back();
      const double goal_dist = std::hypot(goal.x - end.x, goal.y - end.y);
      const double obstacle_cost = std::isinf(c.clearance) ? 0.0 : 1.0 / c.clearance;
      double heading_cost = 0.0;
      if (distance(end.position(), face_target) > 1e-9)
        heading_cost = std::abs(bearing_error(end, face_target));
      c.cost = cfg.w_goal * goal_dist + cfg.w_obstacle * obstacle_cost +
               cfg.w_speed * (cfg.v_limit - speed) + cfg.w_heading * heading_cost;

      if (diag) {
        diag->admissible[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                         static_cast<std::size_t>(j)] = 1;
        ++diag->admissible_count;
      }
      if (!any_admissible || better(c, best)) {
        best = c;
        any_admissible = true;
      }
    }
  }

  if (!any_admissible) {
    if (diag) {
      diag->blocked = true;
      diag->chosen_clearance = pts.empty() ? kInf : pts.front().dist_from_start;
      diag->chosen_cost = kInf;
    }
    return {0.0, 0.0, 0.0};
  }

  if (diag) {
    diag->blocked = false;
    diag->chosen_clearance = best.clearance;
    diag->chosen_cost = best.cost;
  }
  return best.cmd;
}

Point2D truncate_goal(Point2D robot, Point2D person, double standoff) {
  if (standoff < 0.0) throw std::invalid_argument("truncate_goal: standoff must be >= 0");
  const double d = distance(robot, person);
  if (d <= standoff) return robot;
  const double f = (d - standoff) / d;
  return robot + f * (person - robot);
}

}  // namespace rldwa
