#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "rldwa/controller.hpp"
#include "rldwa/world.hpp"
#include "test_helpers.hpp"

using namespace rldwa;

namespace {

struct Fixture {
  WorldState world;
  SacAgent agent;
  ControlContext ctx;

  explicit Fixture(double gain = 3.0)
      : agent(make_agent(gain)) {
    world.person.position = {3, 0};
    world.person.waypoints = {{3, 0}};
    world.person.speed = 0.0;
    ctx.agent = &agent;
    ctx.dwa.inflation = 0.35;
    ctx.limits = world.limits;
  }

  static SacAgent make_agent(double gain) {
    namespace fs = std::filesystem;
    const std::string path = (fs::temp_directory_path() / "rldwa_ctl_agent.rldwa").string();
    testing::write_p_controller_checkpoint(path, gain);
    SacAgent agent = SacAgent::load_checkpoint(path);
    fs::remove(path);
    return agent;
  }

  WorldView view() const {
    WorldView v;
    v.robot_pose = world.robot.pose;
    v.velocity = world.robot.velocity;
    v.scan = scan(world);
    return v;
  }

  TrackState track_at_person() const {
    TrackState t;
    t.goal_estimate = world.person.position;
    t.ever_seen = true;
    t.status = TrackStatus::Tracked;
    return t;
  }
};

}  // namespace

TEST_CASE("mode names round trip") {
  CHECK(drive_mode_from_string("omni") == DriveMode::OmniRl);
  CHECK(drive_mode_from_string("diff") == DriveMode::Differential);
  CHECK(drive_mode_from_string("diff_agent") == DriveMode::DifferentialAgent);
  CHECK(to_string(DriveMode::OmniRl) == "omni");
  CHECK_THROWS_AS(drive_mode_from_string("hover"), std::invalid_argument);
}

TEST_CASE("omni equilibrium: inside the standoff and aligned, the command is ~zero") {
  Fixture f;
  f.world.person.position = {0.8, 0};  // inside the 1.0 m standoff
  f.world.person.waypoints = {{0.8, 0}};
  const Velocity2D cmd = control_tick(f.view(), f.track_at_person(), DriveMode::OmniRl, f.ctx, 0.0);
  CHECK(std::abs(cmd.vx) < 0.06);
  CHECK(std::abs(cmd.vy) < 0.06);
  CHECK(std::abs(cmd.omega) < 1e-6);  // aligned: tanh(0)
}

TEST_CASE("omni decoupling: obstacle detours run on vy while omega holds the person") {
  // An obstacle sits between robot and person, so the collision-free path
  // bends sideways. The omni platform takes the detour with lateral
  // velocity while the yaw stays locked on the person; the differential
  // platform must swing its heading off the person to steer around.
  const auto run = [](DriveMode mode, double& mean_abs_dtheta, double& max_vy) {
    Fixture f;
    f.world.person.position = {3.0, -0.5};
    f.world.person.waypoints = {{3.0, 2.0}};
    f.world.person.speed = 0.4;
    Obstacle block;
    block.shape = Obstacle::Shape::Circle;
    block.center = {1.7, 0.6};
    block.radius = 0.4;
    f.world.obstacles.push_back(block);

    TrackState track = f.track_at_person();
    CameraModel cam;
    Rng rng(3);
    double omega_prev = 0.0;
    mean_abs_dtheta = 0.0;
    max_vy = 0.0;
    const int steps = 120;
    for (int t = 0; t < steps; ++t) {
      const Velocity2D cmd = control_tick(f.view(), track, mode, f.ctx, omega_prev);
      if (mode != DriveMode::OmniRl) CHECK(cmd.vy == 0.0);
      max_vy = std::max(max_vy, std::abs(cmd.vy));
      step_robot(f.world, cmd, 0.1);
      step_person(f.world, 0.1);
      const auto det = observe(f.world, cam, {0, 0}, rng);
      track = update_track(track, det, f.world.robot.pose, cam, f.world.time);
      omega_prev = cmd.omega;
      mean_abs_dtheta +=
          std::abs(bearing_error(f.world.robot.pose, f.world.person.position)) / steps;
    }
    CHECK(f.world.collision_count == 0);
  };

  double omni_dtheta = 0.0, omni_vy = 0.0;
  run(DriveMode::OmniRl, omni_dtheta, omni_vy);
  CHECK(omni_vy > 0.05);
  CHECK(omni_dtheta < 15.0 * kPi / 180.0);

  double diff_dtheta = 0.0, diff_vy = 0.0;
  run(DriveMode::Differential, diff_dtheta, diff_vy);
  CHECK(diff_vy == 0.0);
  CHECK(diff_dtheta > omni_dtheta);
}

TEST_CASE("every emitted command respects the platform limits") {
  Fixture f;
  Rng rng(13);
  for (int i = 0; i < 300; ++i) {
    f.world.robot.pose = {rng.uniform(-2, 2), rng.uniform(-2, 2), wrap_angle(rng.uniform(-3, 3))};
    f.world.robot.velocity = {rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), rng.uniform(-1, 1)};
    TrackState track;
    track.goal_estimate = {rng.uniform(-4, 4), rng.uniform(-4, 4)};
    track.ever_seen = true;
    const DriveMode mode = i % 3 == 0   ? DriveMode::OmniRl
                           : i % 3 == 1 ? DriveMode::Differential
                                        : DriveMode::DifferentialAgent;
    const Velocity2D cmd = control_tick(f.view(), track, mode, f.ctx, rng.uniform(-1, 1));
    CHECK(std::abs(cmd.vx) <= f.ctx.limits.vx_max + 1e-12);
    CHECK(std::abs(cmd.vy) <= f.ctx.limits.vy_max + 1e-12);
    CHECK(std::abs(cmd.omega) <= f.ctx.limits.omega_max + 1e-12);
    if (mode != DriveMode::OmniRl) CHECK(cmd.vy == 0.0);
  }
}

TEST_CASE("deterministic: same view and track give the same command") {
  Fixture f;
  const WorldView v = f.view();
  const TrackState track = f.track_at_person();
  const Velocity2D a = control_tick(v, track, DriveMode::OmniRl, f.ctx, 0.2);
  const Velocity2D b = control_tick(v, track, DriveMode::OmniRl, f.ctx, 0.2);
  CHECK(a.vx == b.vx);
  CHECK(a.vy == b.vy);
  CHECK(a.omega == b.omega);

  TrackState unseen;
  CHECK_THROWS_AS(control_tick(v, unseen, DriveMode::OmniRl, f.ctx, 0.0), std::runtime_error);

  ControlContext no_agent = f.ctx;
  no_agent.agent = nullptr;
  CHECK_THROWS_AS(control_tick(v, track, DriveMode::OmniRl, no_agent, 0.0), std::runtime_error);
  CHECK_NOTHROW(control_tick(v, track, DriveMode::Differential, no_agent, 0.0));
}
