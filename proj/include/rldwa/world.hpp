#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rldwa/geometry.hpp"

namespace rldwa {

/// Static obstacle: a disc, or a wall segment with a total width
/// (the occupied region is every point within thickness/2 of the segment).
struct Obstacle {
  enum class Shape { Circle, Segment };
  Shape shape = Shape::Circle;
  Point2D center;           // circle
  double radius = 0.0;      // circle
  Point2D a, b;             // segment endpoints
  double thickness = 0.0;   // segment total width
};

struct PlatformLimits {
  double vx_max = 0.5;      // m/s
  double vy_max = 0.5;      // m/s
  double omega_max = 1.0;   // rad/s
  double accel = 1.0;       // m/s^2, per linear axis
  double alpha = 2.0;       // rad/s^2
};

struct RobotState {
  Pose2D pose;
  Velocity2D velocity;
  double footprint_radius = 0.25;
};

struct PersonState {
  Point2D position;
  std::vector<Point2D> waypoints;
  double speed = 0.6;            // m/s
  std::size_t target_index = 0;  // next waypoint to reach
  bool loop = false;             // wrap to the first waypoint after the last
  double traveled = 0.0;         // cumulative distance walked
};

struct LidarConfig {
  int beams = 360;
  double angle_min = -kPi;
  double angle_max = kPi;
  double max_range = 8.0;
};

struct LidarScan {
  std::vector<double> ranges;
  double angle_min = -kPi;
  double angle_max = kPi;
  double max_range = 8.0;

  /// Beam direction in the robot frame. Beams are spaced span/N apart
  /// starting at angle_min, so a full-circle scan has no duplicated beam.
  double beam_angle(std::size_t i) const {
    return angle_min + static_cast<double>(i) * (angle_max - angle_min) /
                           static_cast<double>(ranges.size());
  }
};

struct WorldState {
  RobotState robot;
  PersonState person;
  std::vector<Obstacle> obstacles;
  PlatformLimits limits;
  LidarConfig lidar;
  double time = 0.0;
  std::uint64_t rng_seed = 0;
  bool collided_last_step = false;
  int collision_count = 0;
};

// -- distance primitives ------------------------------------------------

double dist_point_segment(Point2D p, Point2D a, Point2D b);
double dist_segment_segment(Point2D a1, Point2D b1, Point2D a2, Point2D b2);

/// Distance from a point to the boundary-inclusive obstacle region
/// (0 when inside).
double dist_point_obstacle(Point2D p, const Obstacle& ob);

/// True when a disc of the given radius overlaps the obstacle.
bool disc_intersects_obstacle(Point2D center, double radius, const Obstacle& ob);

// -- stepping ------------------------------------------------------------

/// Integrates the robot one step. On collision the position reverts to the
/// pre-step value (orientation still updates) and the collision is flagged
/// and counted.
void step_robot(WorldState& world, const Velocity2D& cmd, double dt);

/// Advances the person speed*dt along the waypoint polyline; holds at the
/// final waypoint unless the path loops.
void step_person(WorldState& world, double dt);

// -- sensing -------------------------------------------------------------

/// Distance to the nearest obstacle along the ray, or max_range when clear.
double raycast(const WorldState& world, Point2D origin, double direction, double max_range);

LidarScan scan(const WorldState& world);

/// True iff the open segment a-b crosses no obstacle.
bool line_of_sight(const WorldState& world, Point2D a, Point2D b);

}  // namespace rldwa
