#pragma once

#include <string>

#include "rldwa/runlog.hpp"

namespace rldwa {

/// Overhead trajectory plot: obstacle outlines, the person path, the robot
/// path, and red heading arrows paired with the person position at the same
/// instant. Output is plain deterministic SVG text.
std::string render_trajectory_svg(const RunLog& log);

void write_trajectory_svg(const std::string& path, const RunLog& log);

}  // namespace rldwa
