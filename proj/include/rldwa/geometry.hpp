#pragma once

#include <cmath>
#include <stdexcept>

namespace rldwa {

constexpr double kPi = 3.14159265358979323846;

struct Point2D {
  double x = 0.0;
  double y = 0.0;
};

inline Point2D operator+(Point2D a, Point2D b) { return {a.x + b.x, a.y + b.y}; }
inline Point2D operator-(Point2D a, Point2D b) { return {a.x - b.x, a.y - b.y}; }
inline Point2D operator*(double s, Point2D p) { return {s * p.x, s * p.y}; }
inline double dot(Point2D a, Point2D b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point2D p) { return std::hypot(p.x, p.y); }
inline double distance(Point2D a, Point2D b) { return norm(b - a); }

/// Normalizes an angle to the half-open interval (-pi, pi], CCW positive.
inline double wrap_angle(double theta) {
  if (!std::isfinite(theta)) throw std::invalid_argument("wrap_angle: non-finite input");
  double r = std::fmod(theta + kPi, 2.0 * kPi);
  if (r <= 0.0) r += 2.0 * kPi;
  return r - kPi;
}

struct Pose2D {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;  // radians in (-pi, pi]

  Point2D position() const { return {x, y}; }
};

/// Body-frame velocity command: vx forward, vy left, omega CCW.
struct Velocity2D {
  double vx = 0.0;
  double vy = 0.0;
  double omega = 0.0;

  bool finite() const {
    return std::isfinite(vx) && std::isfinite(vy) && std::isfinite(omega);
  }
};

/// Signed angle from the robot heading to the line of sight toward `target`.
/// Positive when the target lies to the robot's left.
inline double bearing_error(const Pose2D& robot, Point2D target) {
  const double dx = target.x - robot.x;
  const double dy = target.y - robot.y;
  if (std::hypot(dx, dy) < 1e-12)
    throw std::invalid_argument("bearing_error: target coincides with robot position");
  return wrap_angle(std::atan2(dy, dx) - robot.heading);
}

/// Maps a (bearing, range) measurement in the robot frame to a world point.
inline Point2D camera_to_world(const Pose2D& robot, double bearing, double range) {
  if (!(range > 0.0)) throw std::invalid_argument("camera_to_world: range must be > 0");
  const double a = robot.heading + bearing;
  return {robot.x + range * std::cos(a), robot.y + range * std::sin(a)};
}

/// One Euler step of the body twist, shared by the simulator and the DWA
/// rollouts so both integrate trajectories identically.
inline Pose2D integrate_twist(const Pose2D& pose, const Velocity2D& cmd, double dt) {
  const double c = std::cos(pose.heading);
  const double s = std::sin(pose.heading);
  Pose2D next;
  next.x = pose.x + (cmd.vx * c - cmd.vy * s) * dt;
  next.y = pose.y + (cmd.vx * s + cmd.vy * c) * dt;
  next.heading = wrap_angle(pose.heading + cmd.omega * dt);
  return next;
}

}  // namespace rldwa
