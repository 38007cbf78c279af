#include "rldwa/runlog.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace rldwa {

namespace {

using nlohmann::json;

constexpr const char* kHeader =
    "t,robot_x,robot_y,robot_heading,person_x,person_y,goal_x,goal_y,dtheta_deg,"
    "cmd_vx,cmd_vy,cmd_omega,visible,collision,r_yaw,r_smooth,r_total";

json obstacles_to_json(const std::vector<Obstacle>& obstacles) {
  json arr = json::array();
  for (const Obstacle& ob : obstacles) {
    json o;
    if (ob.shape == Obstacle::Shape::Circle) {
      o["type"] = "circle";
      o["center"] = {ob.center.x, ob.center.y};
      o["radius"] = ob.radius;
    } else {
      o["type"] = "segment";
      o["a"] = {ob.a.x, ob.a.y};
      o["b"] = {ob.b.x, ob.b.y};
      o["thickness"] = ob.thickness;
    }
    arr.push_back(o);
  }
  return arr;
}

std::vector<Obstacle> obstacles_from_json(const json& arr) {
  std::vector<Obstacle> out;
  for (const json& o : arr) {
    Obstacle ob;
    if (o.at("type") == "circle") {
      ob.shape = Obstacle::Shape::Circle;
      ob.center = {o.at("center")[0].get<double>(), o.at("center")[1].get<double>()};
      ob.radius = o.at("radius").get<double>();
    } else {
      ob.shape = Obstacle::Shape::Segment;
      ob.a = {o.at("a")[0].get<double>(), o.at("a")[1].get<double>()};
      ob.b = {o.at("b")[0].get<double>(), o.at("b")[1].get<double>()};
      ob.thickness = o.at("thickness").get<double>();
    }
    out.push_back(ob);
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_runlog_csv(const std::string& path, const RunLog& log) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << "# rldwa-runlog v1\n";
  f << "# scenario: " << log.scenario << "\n";
  f << "# mode: " << log.mode << "\n";
  f << "# run: " << log.run_index << "\n";
  f << "# dt: " << format_double(log.dt) << "\n";
  f << "# obstacles: " << obstacles_to_json(log.obstacles).dump() << "\n";
  f << kHeader << "\n";
  for (const RunLogRow& r : log.rows) {
    f << format_double(r.t) << ',' << format_double(r.robot.x) << ',' << format_double(r.robot.y)
      << ',' << format_double(r.robot.heading) << ',' << format_double(r.person.x) << ','
      << format_double(r.person.y) << ',' << format_double(r.goal_estimate.x) << ','
      << format_double(r.goal_estimate.y) << ',' << format_double(r.dtheta_deg) << ','
      << format_double(r.cmd.vx) << ',' << format_double(r.cmd.vy) << ','
      << format_double(r.cmd.omega) << ',' << (r.visible ? 1 : 0) << ','
      << (r.collision ? 1 : 0) << ',' << format_double(r.r_yaw) << ','
      << format_double(r.r_smooth) << ',' << format_double(r.r_total) << "\n";
  }
  if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

RunLog read_runlog_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open '" + path + "'");

  RunLog log;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto meta = [&](const std::string& key) -> std::string {
        const std::string tag = "# " + key + ": ";
        if (line.rfind(tag, 0) == 0) return line.substr(tag.size());
        return {};
      };
      if (const std::string s = meta("scenario"); !s.empty()) log.scenario = s;
      if (const std::string m = meta("mode"); !m.empty()) log.mode = m;
      if (const std::string r = meta("run"); !r.empty()) log.run_index = std::stoi(r);
      if (const std::string d = meta("dt"); !d.empty()) log.dt = std::stod(d);
      if (const std::string o = meta("obstacles"); !o.empty()) {
        try {
          log.obstacles = obstacles_from_json(json::parse(o));
        } catch (const std::exception& e) {
          throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                   ": bad obstacle metadata: " + e.what());
        }
      }
      continue;
    }
    if (!header_seen) {
      if (line != kHeader)
        throw std::runtime_error(path + ":" + std::to_string(line_no) + ": unexpected CSV header");
      header_seen = true;
      continue;
    }

    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 17)
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected 17 columns, found " + std::to_string(cells.size()));
    try {
      RunLogRow r;
      r.t = std::stod(cells[0]);
      r.robot.x = std::stod(cells[1]);
      r.robot.y = std::stod(cells[2]);
      r.robot.heading = std::stod(cells[3]);
      r.person.x = std::stod(cells[4]);
      r.person.y = std::stod(cells[5]);
      r.goal_estimate.x = std::stod(cells[6]);
      r.goal_estimate.y = std::stod(cells[7]);
      r.dtheta_deg = std::stod(cells[8]);
      r.cmd.vx = std::stod(cells[9]);
      r.cmd.vy = std::stod(cells[10]);
      r.cmd.omega = std::stod(cells[11]);
      r.visible = cells[12] == "1";
      r.collision = cells[13] == "1";
      r.r_yaw = std::stod(cells[14]);
      r.r_smooth = std::stod(cells[15]);
      r.r_total = std::stod(cells[16]);
      log.rows.push_back(r);
    } catch (const std::invalid_argument&) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": malformed numeric cell");
    }
  }
  if (!header_seen)
    throw std::runtime_error(path + ": not a run log (missing CSV header)");
  return log;
}

}  // namespace rldwa
