#include "rldwa/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rldwa {

namespace {

struct Frame {
  double min_x = 0.0, min_y = 0.0, max_x = 1.0, max_y = 1.0;
  double scale = 1.0;   // px per meter
  double height = 0.0;  // px

  double px(double x) const { return (x - min_x) * scale; }
  double py(double y) const { return height - (y - min_y) * scale; }  // y up -> y down
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

void grow(double& lo, double& hi, double v) {
  lo = std::min(lo, v);
  hi = std::max(hi, v);
}

}  // namespace

std::string render_trajectory_svg(const RunLog& log) {
  double min_x = 1e18, min_y = 1e18, max_x = -1e18, max_y = -1e18;
  const auto include = [&](double x, double y) {
    grow(min_x, max_x, x);
    grow(min_y, max_y, y);
  };
  for (const Obstacle& ob : log.obstacles) {
    if (ob.shape == Obstacle::Shape::Circle) {
      include(ob.center.x - ob.radius, ob.center.y - ob.radius);
      include(ob.center.x + ob.radius, ob.center.y + ob.radius);
    } else {
      include(ob.a.x, ob.a.y);
      include(ob.b.x, ob.b.y);
    }
  }
  for (const RunLogRow& r : log.rows) {
    include(r.robot.x, r.robot.y);
    include(r.person.x, r.person.y);
  }
  if (min_x > max_x) {
    min_x = min_y = 0.0;
    max_x = max_y = 1.0;
  }

  const double pad = 1.0;
  Frame fr;
  fr.min_x = min_x - pad;
  fr.min_y = min_y - pad;
  fr.max_x = max_x + pad;
  fr.max_y = max_y + pad;
  const double width_px = 800.0;
  fr.scale = width_px / (fr.max_x - fr.min_x);
  fr.height = (fr.max_y - fr.min_y) * fr.scale;

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width_px) << "\" height=\""
      << fmt(fr.height) << "\" viewBox=\"0 0 " << fmt(width_px) << " " << fmt(fr.height)
      << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (const Obstacle& ob : log.obstacles) {
    if (ob.shape == Obstacle::Shape::Circle) {
      out << "<circle cx=\"" << fmt(fr.px(ob.center.x)) << "\" cy=\"" << fmt(fr.py(ob.center.y))
          << "\" r=\"" << fmt(ob.radius * fr.scale)
          << "\" fill=\"#d9d9d9\" stroke=\"#808080\" stroke-width=\"1\"/>\n";
    } else {
      const double w = std::max(ob.thickness * fr.scale, 2.0);
      out << "<line x1=\"" << fmt(fr.px(ob.a.x)) << "\" y1=\"" << fmt(fr.py(ob.a.y)) << "\" x2=\""
          << fmt(fr.px(ob.b.x)) << "\" y2=\"" << fmt(fr.py(ob.b.y)) << "\" stroke=\"#808080\""
          << " stroke-width=\"" << fmt(w) << "\" stroke-linecap=\"round\"/>\n";
    }
  }

  const auto polyline = [&](const char* color, double width, auto&& pick) {
    if (log.rows.empty()) return;
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << fmt(width)
        << "\" points=\"";
    for (std::size_t i = 0; i < log.rows.size(); ++i) {
      const Point2D p = pick(log.rows[i]);
      if (i) out << ' ';
      out << fmt(fr.px(p.x)) << ',' << fmt(fr.py(p.y));
    }
    out << "\"/>\n";
  };
  polyline("#4682b4", 1.5, [](const RunLogRow& r) { return r.person; });       // person: steel blue
  polyline("#ff8c00", 2.0, [](const RunLogRow& r) { return r.robot.position(); });  // robot: orange

  // Heading arrows with the person position at the same instant.
  if (!log.rows.empty()) {
    const std::size_t stride = std::max<std::size_t>(1, log.rows.size() / 30);
    for (std::size_t i = 0; i < log.rows.size(); i += stride) {
      const RunLogRow& r = log.rows[i];
      const double len = 0.35;
      const double tip_x = r.robot.x + len * std::cos(r.robot.heading);
      const double tip_y = r.robot.y + len * std::sin(r.robot.heading);
      const double left = r.robot.heading + 2.6;
      const double right = r.robot.heading - 2.6;
      const double head = 0.12;
      out << "<line x1=\"" << fmt(fr.px(r.robot.x)) << "\" y1=\"" << fmt(fr.py(r.robot.y))
          << "\" x2=\"" << fmt(fr.px(tip_x)) << "\" y2=\"" << fmt(fr.py(tip_y))
          << "\" stroke=\"#d62728\" stroke-width=\"1.5\"/>\n";
      out << "<polygon fill=\"#d62728\" points=\"" << fmt(fr.px(tip_x)) << ',' << fmt(fr.py(tip_y))
          << ' ' << fmt(fr.px(tip_x + head * std::cos(left))) << ','
          << fmt(fr.py(tip_y + head * std::sin(left))) << ' '
          << fmt(fr.px(tip_x + head * std::cos(right))) << ','
          << fmt(fr.py(tip_y + head * std::sin(right))) << "\"/>\n";
      out << "<circle cx=\"" << fmt(fr.px(r.person.x)) << "\" cy=\"" << fmt(fr.py(r.person.y))
          << "\" r=\"3\" fill=\"#1f4e9c\"/>\n";
    }
  }

  out << "<g font-family=\"sans-serif\" font-size=\"13\">\n";
  out << "<rect x=\"8\" y=\"8\" width=\"196\" height=\"72\" fill=\"white\" stroke=\"#c0c0c0\"/>\n";
  out << "<line x1=\"16\" y1=\"24\" x2=\"44\" y2=\"24\" stroke=\"#ff8c00\" stroke-width=\"2\"/>"
      << "<text x=\"52\" y=\"28\">robot path</text>\n";
  out << "<line x1=\"16\" y1=\"44\" x2=\"44\" y2=\"44\" stroke=\"#4682b4\" stroke-width=\"2\"/>"
      << "<text x=\"52\" y=\"48\">person path</text>\n";
  out << "<line x1=\"16\" y1=\"64\" x2=\"44\" y2=\"64\" stroke=\"#d62728\" stroke-width=\"2\"/>"
      << "<text x=\"52\" y=\"68\">heading (mode: " << log.mode << ")</text>\n";
  out << "</g>\n";
  out << "</svg>\n";
  return out.str();
}

void write_trajectory_svg(const std::string& path, const RunLog& log) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << render_trajectory_svg(log);
  if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace rldwa
