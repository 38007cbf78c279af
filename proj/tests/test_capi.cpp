#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "rldwa.h"
#include "test_helpers.hpp"

namespace fs = std::filesystem;

namespace {

const char* kWorldJson = R"({
  "robot": {"pose": [0, 0, 0]},
  "person": {"waypoints": [[2, 0], [2, 2]], "speed": 0.5},
  "obstacles": [{"type": "segment", "a": [4, -2], "b": [4, 2], "thickness": 0.2}],
  "lidar": {"beams": 90, "max_range": 8.0},
  "seed": 3
})";

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str(const std::string& sub = "") const {
    return sub.empty() ? path.string() : (path / sub).string();
  }
};

std::string tiny_train_config() {
  return R"({
    "seed": 5,
    "robot": {"pose": [2.0, 2.0, 0.0]},
    "person": {"waypoints": [[2.0, 1.2], [4.5, 1.2], [4.5, 4.0], [2.0, 4.0]],
                "speed": 0.45, "loop": true},
    "obstacles": [
      {"type": "segment", "a": [0, 0], "b": [6, 0], "thickness": 0.2},
      {"type": "segment", "a": [6, 0], "b": [6, 5], "thickness": 0.2},
      {"type": "segment", "a": [6, 5], "b": [0, 5], "thickness": 0.2},
      {"type": "segment", "a": [0, 5], "b": [0, 0], "thickness": 0.2}
    ],
    "lidar": {"beams": 180, "max_range": 8.0},
    "episode": {"sampler_box": [1.0, 1.0, 5.0, 4.0]}
  })";
}

}  // namespace

TEST_CASE("version and error surface") {
  CHECK(std::strlen(rldwa_version()) > 0);
  CHECK(rldwa_world_create("{ definitely not json") == nullptr);
  CHECK(std::strlen(rldwa_last_error()) > 0);
  CHECK(rldwa_world_create_from_file("/nonexistent/world.json") == nullptr);
}

TEST_CASE("world handle lifecycle") {
  rldwa_world* w = rldwa_world_create(kWorldJson);
  REQUIRE(w != nullptr);

  double x = -1, y = -1, heading = -1;
  CHECK(rldwa_world_robot_pose(w, &x, &y, &heading) == RLDWA_OK);
  CHECK(x == 0.0);
  CHECK(heading == 0.0);

  CHECK(rldwa_world_step(w, 0.5, 0.0, 0.0, 0.1) == RLDWA_OK);
  CHECK(rldwa_world_robot_pose(w, &x, &y, &heading) == RLDWA_OK);
  CHECK(x == doctest::Approx(0.05));
  CHECK(rldwa_world_collided(w) == 0);

  double px = 0, py = 0;
  CHECK(rldwa_world_person_position(w, &px, &py) == RLDWA_OK);
  CHECK(px == doctest::Approx(2.0));
  CHECK(py == doctest::Approx(0.05));  // person walked toward the next waypoint

  const int beams = rldwa_world_scan_size(w);
  CHECK(beams == 90);
  std::vector<double> ranges(static_cast<std::size_t>(beams));
  CHECK(rldwa_world_scan(w, ranges.data(), beams) == RLDWA_OK);
  CHECK(rldwa_world_scan(w, ranges.data(), beams - 1) == RLDWA_ERR_RUNTIME);
  bool any_wall_hit = false;
  for (double r : ranges) any_wall_hit = any_wall_hit || r < 7.9;
  CHECK(any_wall_hit);

  CHECK(rldwa_world_line_of_sight(w, 0, 0, 3, 0) == 1);
  CHECK(rldwa_world_line_of_sight(w, 0, 0, 5, 0) == 0);  // through the wall

  CHECK(rldwa_world_step(w, 0.1, 0.0, 0.0, -1.0) == RLDWA_ERR_RUNTIME);
  CHECK(std::string(rldwa_last_error()).find("dt") != std::string::npos);

  rldwa_world_destroy(w);
  CHECK(rldwa_world_collided(nullptr) == -1);
  CHECK(rldwa_world_scan_size(nullptr) == -1);
}

TEST_CASE("agent handle: load, seed, act") {
  TempDir dir("rldwa_capi_agent");
  const std::string ckpt = dir.str("p.rldwa");
  rldwa::testing::write_p_controller_checkpoint(ckpt, 3.0);

  rldwa_agent* agent = rldwa_agent_load(ckpt.c_str());
  REQUIRE(agent != nullptr);

  const double state[3] = {0.3, 0.25, 0.0};  // heading error pi/4
  double omega = 0.0;
  CHECK(rldwa_agent_act(agent, state, 1, &omega) == RLDWA_OK);
  CHECK(omega == doctest::Approx(std::tanh(3.0 * 0.25)));

  // Stochastic actions follow the seeded stream and stay within bounds.
  CHECK(rldwa_agent_seed(agent, 42) == RLDWA_OK);
  double first = 0.0;
  CHECK(rldwa_agent_act(agent, state, 0, &first) == RLDWA_OK);
  CHECK(rldwa_agent_seed(agent, 42) == RLDWA_OK);
  double again = 0.0;
  CHECK(rldwa_agent_act(agent, state, 0, &again) == RLDWA_OK);
  CHECK(first == again);
  CHECK(std::abs(first) <= 1.0);

  rldwa_agent_destroy(agent);
  CHECK(rldwa_agent_load(dir.str("missing.rldwa").c_str()) == nullptr);
}

TEST_CASE("train, eval, replay, metrics through the C API") {
  TempDir dir("rldwa_capi_batch");
  const std::string cfg_path = dir.str("train.json");
  {
    std::ofstream f(cfg_path);
    f << tiny_train_config();
  }

  CHECK(rldwa_train(cfg_path.c_str(), "smoke", 3, dir.str("out").c_str()) == RLDWA_OK);
  const std::string ckpt = dir.str("out/checkpoint_final.rldwa");
  CHECK(fs::exists(ckpt));
  CHECK(fs::exists(dir.str("out/training_log.csv")));

  CHECK(rldwa_eval(ckpt.c_str(), cfg_path.c_str(), "omni", 2, 11, dir.str("eval").c_str()) ==
        RLDWA_OK);
  CHECK(fs::exists(dir.str("eval/run001.csv")));
  CHECK(fs::exists(dir.str("eval/run002.svg")));
  CHECK(fs::exists(dir.str("eval/summary.json")));

  // Logged heading errors reproduce exactly from the logged poses.
  {
    std::ifstream f(dir.str("eval/run001.csv"));
    std::string line;
    int checked = 0;
    double prev_t = -1.0;
    while (std::getline(f, line)) {
      if (line.empty() || line[0] == '#' || line[0] == 't') continue;
      std::stringstream ss(line);
      std::vector<double> cells;
      std::string cell;
      while (std::getline(ss, cell, ',')) cells.push_back(std::stod(cell));
      REQUIRE(cells.size() == 17);
      CHECK(cells[0] > prev_t);  // strictly time-ordered
      prev_t = cells[0];
      const double dx = cells[4] - cells[1];
      const double dy = cells[5] - cells[2];
      const double bearing = std::atan2(dy, dx) - cells[3];
      const double wrapped = std::remainder(bearing, 2.0 * 3.14159265358979323846);
      const double recomputed = wrapped * 180.0 / 3.14159265358979323846;
      CHECK(std::abs(recomputed - cells[8]) < 1e-9);
      ++checked;
    }
    CHECK(checked > 50);
  }

  CHECK(rldwa_replay(dir.str("eval/run001.csv").c_str(), dir.str("replayed.svg").c_str()) ==
        RLDWA_OK);
  CHECK(fs::exists(dir.str("replayed.svg")));

  CHECK(rldwa_metrics(dir.str("eval").c_str(), dir.str("summary2.json").c_str()) == RLDWA_OK);
  CHECK(fs::exists(dir.str("summary2.json")));

  // Error codes: missing config is a config error (exit code 2), a missing
  // checkpoint is a runtime error (exit code 3).
  CHECK(rldwa_train(dir.str("absent.json").c_str(), "smoke", 1, dir.str("x").c_str()) ==
        RLDWA_ERR_CONFIG);
  CHECK(rldwa_eval(dir.str("absent.rldwa").c_str(), cfg_path.c_str(), "omni", 1, 1,
                   dir.str("y").c_str()) == RLDWA_ERR_RUNTIME);
  CHECK(rldwa_eval(ckpt.c_str(), cfg_path.c_str(), "hover", 1, 1, dir.str("z").c_str()) ==
        RLDWA_ERR_CONFIG);
  CHECK(rldwa_train(cfg_path.c_str(), "warp", 1, dir.str("w").c_str()) == RLDWA_ERR_CONFIG);
  CHECK(rldwa_replay(dir.str("eval/summary.json").c_str(), dir.str("no.svg").c_str()) ==
        RLDWA_ERR_RUNTIME);
}
