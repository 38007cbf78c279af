#include "rldwa/perception.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rldwa {

std::optional<PersonDetection> observe(const WorldState& world, const CameraModel& cam,
                                       const NoiseModel& noise, Rng& rng) {
  const Pose2D& pose = world.robot.pose;
  const Point2D person = world.person.position;

  const double range = distance(pose.position(), person);
  if (range < 1e-9 || range > cam.max_depth) return std::nullopt;

  const double bearing = bearing_error(pose, person);
  if (std::abs(bearing) > 0.5 * cam.hfov) return std::nullopt;

  if (!line_of_sight(world, pose.position(), person)) return std::nullopt;

  const double half_tan = std::tan(0.5 * cam.hfov);
  PersonDetection det;
  det.x_c = 0.5 * cam.image_width * (1.0 - std::tan(bearing) / half_tan);
  det.y_c = 0.5 * cam.image_height;
  det.d_c = range;
  if (noise.pixel_std > 0.0) {
    det.x_c += rng.gaussian(0.0, noise.pixel_std);
    det.y_c += rng.gaussian(0.0, noise.pixel_std);
  }
  if (noise.depth_std > 0.0) det.d_c += rng.gaussian(0.0, noise.depth_std);

  det.x_c = std::clamp(det.x_c, 0.0, cam.image_width - 1e-9);
  det.y_c = std::clamp(det.y_c, 0.0, cam.image_height - 1e-9);
  det.d_c = std::clamp(det.d_c, 1e-6, cam.max_depth);
  det.timestamp = world.time;
  return det;
}

Point2D detection_to_point(const Pose2D& robot, const CameraModel& cam,
                           const PersonDetection& det) {
  if (det.x_c < 0.0 || det.x_c >= cam.image_width)
    throw std::invalid_argument("detection_to_point: x_c outside image bounds");
  const double half_tan = std::tan(0.5 * cam.hfov);
  const double bearing = std::atan((1.0 - 2.0 * det.x_c / cam.image_width) * half_tan);
  return camera_to_world(robot, bearing, det.d_c);
}

TrackState update_track(const TrackState& track, const std::optional<PersonDetection>& det,
                        const Pose2D& robot, const CameraModel& cam, double now) {
  TrackState next = track;
  if (det.has_value()) {
    next.goal_estimate = detection_to_point(robot, cam, *det);
    next.last_seen = now;
    next.status = TrackStatus::Tracked;
    next.ever_seen = true;
  } else {
    next.status = TrackStatus::Lost;  // goal_estimate holds its last value
  }
  return next;
}

}  // namespace rldwa
