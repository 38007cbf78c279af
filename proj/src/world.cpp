#include "rldwa/world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rldwa {

double dist_point_segment(Point2D p, Point2D a, Point2D b) {
  const Point2D ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 <= 0.0) return distance(p, a);
  double t = dot(p - a, ab) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return distance(p, a + t * ab);
}

double dist_segment_segment(Point2D a1, Point2D b1, Point2D a2, Point2D b2) {
  // Proper crossing means distance zero.
  const auto orient = [](Point2D p, Point2D q, Point2D r) {
    const double v = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
    return (v > 0.0) - (v < 0.0);
  };
  const int o1 = orient(a1, b1, a2);
  const int o2 = orient(a1, b1, b2);
  const int o3 = orient(a2, b2, a1);
  const int o4 = orient(a2, b2, b1);
  if (o1 != o2 && o3 != o4) return 0.0;
  return std::min(std::min(dist_point_segment(a2, a1, b1), dist_point_segment(b2, a1, b1)),
                  std::min(dist_point_segment(a1, a2, b2), dist_point_segment(b1, a2, b2)));
}

double dist_point_obstacle(Point2D p, const Obstacle& ob) {
  if (ob.shape == Obstacle::Shape::Circle)
    return std::max(0.0, distance(p, ob.center) - ob.radius);
  return std::max(0.0, dist_point_segment(p, ob.a, ob.b) - 0.5 * ob.thickness);
}

bool disc_intersects_obstacle(Point2D center, double radius, const Obstacle& ob) {
  return dist_point_obstacle(center, ob) <= radius;
}

void step_robot(WorldState& world, const Velocity2D& cmd, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_robot: dt must be > 0");
  if (!cmd.finite()) throw std::invalid_argument("step_robot: non-finite command");

  const Pose2D prev = world.robot.pose;
  Pose2D next = integrate_twist(prev, cmd, dt);

  bool hit = false;
  for (const Obstacle& ob : world.obstacles) {
    if (disc_intersects_obstacle(next.position(), world.robot.footprint_radius, ob)) {
      hit = true;
      break;
    }
  }
  if (hit) {
    next.x = prev.x;
    next.y = prev.y;
    ++world.collision_count;
  }
  world.collided_last_step = hit;
  world.robot.pose = next;
  world.robot.velocity = cmd;
  world.time += dt;
}

void step_person(WorldState& world, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_person: dt must be > 0");
  PersonState& p = world.person;
  if (p.waypoints.empty()) throw std::invalid_argument("step_person: empty waypoint path");

  double budget = p.speed * dt;
  std::size_t zero_hops = 0;  // guards looping paths of zero total length
  while (budget > 0.0) {
    if (p.target_index >= p.waypoints.size()) {
      if (!p.loop) break;  // terminal hold
      p.target_index = 0;
    }
    const Point2D target = p.waypoints[p.target_index];
    const double d = distance(p.position, target);
    if (d <= budget) {
      p.position = target;
      p.traveled += d;
      budget -= d;
      ++p.target_index;
      if (d == 0.0) {
        if (++zero_hops > p.waypoints.size()) break;
      } else {
        zero_hops = 0;
      }
    } else {
      const double f = budget / d;
      p.position = p.position + f * (target - p.position);
      p.traveled += budget;
      budget = 0.0;
    }
  }
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Smallest t >= 0 with |origin + t*dir - center| = radius, or +inf.
double ray_circle(Point2D origin, Point2D dir, Point2D center, double radius) {
  const Point2D oc = origin - center;
  const double b = dot(oc, dir);
  const double c = dot(oc, oc) - radius * radius;
  if (c <= 0.0) return 0.0;  // origin inside
  const double disc = b * b - c;
  if (disc < 0.0) return kInf;
  const double t = -b - std::sqrt(disc);
  return t >= 0.0 ? t : kInf;
}

// Smallest t >= 0 where the ray crosses segment ab, or +inf.
double ray_segment(Point2D origin, Point2D dir, Point2D a, Point2D b) {
  const Point2D ab = b - a;
  const double denom = dir.x * ab.y - dir.y * ab.x;
  if (std::abs(denom) < 1e-15) return kInf;  // parallel
  const Point2D ao = a - origin;
  const double t = (ao.x * ab.y - ao.y * ab.x) / denom;
  const double s = (ao.x * dir.y - ao.y * dir.x) / denom;
  if (t < 0.0 || s < 0.0 || s > 1.0) return kInf;
  return t;
}

double ray_obstacle(Point2D origin, Point2D dir, const Obstacle& ob) {
  if (ob.shape == Obstacle::Shape::Circle)
    return ray_circle(origin, dir, ob.center, ob.radius);

  const double r = 0.5 * ob.thickness;
  if (r <= 0.0) return ray_segment(origin, dir, ob.a, ob.b);

  // Capsule: two end caps plus the two offset sides.
  if (dist_point_segment(origin, ob.a, ob.b) <= r) return 0.0;
  double best = std::min(ray_circle(origin, dir, ob.a, r), ray_circle(origin, dir, ob.b, r));
  Point2D axis = ob.b - ob.a;
  const double len = norm(axis);
  if (len > 0.0) {
    const Point2D n{-axis.y / len, axis.x / len};
    best = std::min(best, ray_segment(origin, dir, ob.a + r * n, ob.b + r * n));
    best = std::min(best, ray_segment(origin, dir, ob.a + (-r) * n, ob.b + (-r) * n));
  }
  return best;
}

}  // namespace

double raycast(const WorldState& world, Point2D origin, double direction, double max_range) {
  if (!(max_range > 0.0)) throw std::invalid_argument("raycast: max_range must be > 0");
  const Point2D dir{std::cos(direction), std::sin(direction)};
  double best = max_range;
  for (const Obstacle& ob : world.obstacles)
    best = std::min(best, ray_obstacle(origin, dir, ob));
  return best;
}

LidarScan scan(const WorldState& world) {
  const LidarConfig& cfg = world.lidar;
  LidarScan out;
  out.angle_min = cfg.angle_min;
  out.angle_max = cfg.angle_max;
  out.max_range = cfg.max_range;
  out.ranges.resize(static_cast<std::size_t>(cfg.beams));
  const Point2D origin = world.robot.pose.position();
  for (std::size_t i = 0; i < out.ranges.size(); ++i) {
    const double ang = world.robot.pose.heading + out.beam_angle(i);
    const double r = raycast(world, origin, ang, cfg.max_range);
    out.ranges[i] = std::max(r, 1e-9);
  }
  return out;
}

bool line_of_sight(const WorldState& world, Point2D a, Point2D b) {
  for (const Obstacle& ob : world.obstacles) {
    if (ob.shape == Obstacle::Shape::Circle) {
      if (dist_point_segment(ob.center, a, b) <= ob.radius) return false;
    } else {
      if (dist_segment_segment(a, b, ob.a, ob.b) <= 0.5 * ob.thickness) return false;
    }
  }
  return true;
}

}  // namespace rldwa
