#pragma once

#include <optional>

#include "rldwa/geometry.hpp"
#include "rldwa/rng.hpp"
#include "rldwa/world.hpp"

namespace rldwa {

struct CameraModel {
  double hfov = 1.2042771838760873;  // 69 deg
  int image_width = 640;
  int image_height = 480;
  double max_depth = 6.0;
};

struct NoiseModel {
  double pixel_std = 4.0;   // px, on x_c and y_c
  double depth_std = 0.03;  // m, on d_c
};

/// Pixel-space observation of the person: column, row, depth.
struct PersonDetection {
  double x_c = 0.0;
  double y_c = 0.0;
  double d_c = 0.0;
  double timestamp = 0.0;
};

enum class TrackStatus { Tracked, Lost };

/// Single-target track. On a missed frame the last world-frame goal
/// estimate is held until the person is seen again.
struct TrackState {
  Point2D goal_estimate;
  double last_seen = -1.0;
  TrackStatus status = TrackStatus::Lost;
  bool ever_seen = false;
};

/// Returns a detection iff the person is inside the horizontal FOV, within
/// depth range, and not occluded by an obstacle. x_c follows the pinhole
/// projection x_c = w/2 * (1 - tan(bearing)/tan(hfov/2)); both x_c and d_c
/// carry seeded Gaussian noise.
std::optional<PersonDetection> observe(const WorldState& world, const CameraModel& cam,
                                       const NoiseModel& noise, Rng& rng);

/// Inverts the pinhole projection and places the detection in the world.
Point2D detection_to_point(const Pose2D& robot, const CameraModel& cam,
                           const PersonDetection& det);

TrackState update_track(const TrackState& track, const std::optional<PersonDetection>& det,
                        const Pose2D& robot, const CameraModel& cam, double now);

}  // namespace rldwa
