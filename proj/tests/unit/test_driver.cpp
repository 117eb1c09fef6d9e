#include <doctest.h>

#include <cmath>

#include "approx.hpp"
#include "evsim/driver.hpp"
#include "evsim/error.hpp"
#include "fixtures.hpp"

using namespace evsim;


TEST_CASE("speed command") {
  DriverConfig cfg;
  SpeedLoopState loop;
  CHECK(speed_command(5, 5, loop, cfg) == 0.0);
  CHECK(loop.integral == 0.0);

  cfg.kp_speed = 2.0;
  cfg.ki_speed = 0.0;
  CHECK(speed_command(6, 5, loop, cfg) == 2.0);
  CHECK(loop.integral == Approx(0.01));

  SUBCASE("integral acts once the error is gone") {
    SpeedLoopState l{0.5};
    cfg.ki_speed = 1.0;
    CHECK(speed_command(3, 3, l, cfg) == Approx(0.5));
  }

  SUBCASE("saturation with anti-windup") {
    SpeedLoopState l;
    cfg.a_max = 1.0;
    CHECK(speed_command(100, 0, l, cfg) == 1.0);
    CHECK(l.integral == 0.0);
    CHECK(speed_command(0, 100, l, cfg) == -1.0);
    CHECK(l.integral == 0.0);
  }
}

TEST_CASE("steering command") {
  const auto p = fixtures::rcc();
  DriverConfig cfg;
  const ManeuverSchedule straight;
  CHECK(steering_command({1.0, 0, 0}, straight, cfg, p, 0.0) == 0.0);

  // Left of the lane centre (positive y): steer right, toward it.
  CHECK(steering_command({1.0, 0, 0, 0, 0.2, 0}, straight, cfg, p, 0.0) < 0.0);
  CHECK(steering_command({1.0, 0, 0, 0, -0.2, 0}, straight, cfg, p, 0.0) > 0.0);
  // Heading away from the centre line also steers back.
  CHECK(steering_command({1.0, 0, 0, 0, 0, 0.1}, straight, cfg, p, 0.0) < 0.0);

  // Low-speed guard.
  CHECK(steering_command({0.01, 0, 0, 0, 0.2, 0}, straight, cfg, p, 0.0) == 0.0);

  SUBCASE("limits") {
    cfg.max_steer_rate = 1.0;
    const double s = steering_command({1.0, 0, 0, 0, -5.0, 0}, straight, cfg, p, 0.0);
    CHECK(s == Approx(1.0 * cfg.sample_period()));
    cfg.max_steer_rate = 1e6;
    // Long wheelbase and a close target ask for more than max_steer.
    CHECK(steering_command({1.0, 0, 0, 0, -0.5, 0}, straight, cfg, fixtures::rivian(), 0.0) ==
          cfg.max_steer);
    CHECK(steering_command({1.0, 0, 0, 0, 0.5, 0}, straight, cfg, fixtures::rivian(), 0.0) ==
          -cfg.max_steer);
  }

  SUBCASE("pure pursuit geometry") {
    cfg.max_steer_rate = 1e6;
    const VehicleState pose{2.0, 0, 0, 0, -0.1, 0};
    const double ld = cfg.lookahead(2.0);
    const double curvature = 2 * 0.1 / (ld * ld + 0.01);
    CHECK(steering_command(pose, straight, cfg, p, 0.0) ==
          Approx(std::atan(0.324 * curvature)).epsilon(1e-12));
  }
}

TEST_CASE("driver holds commands between samples") {
  const auto p = fixtures::rcc();
  DriverConfig cfg;
  Driver driver(cfg, p, {});
  const auto first = driver.update(0.0, {0.0, 0, 0}, 2.0);
  CHECK(first.accel > 0.0);
  const auto held = driver.update(0.005, {1.0, 0, 0}, 2.0);
  CHECK(held.accel == first.accel);
  const auto next = driver.update(0.01, {1.0, 0, 0}, 2.0);
  CHECK(next.accel != first.accel);

  SUBCASE("dead zone drops tiny references") {
    Driver d(cfg, p, {});
    // 0.1 m/s maps to 24 rad/s at the motor, under the 41.9 rad/s threshold.
    CHECK(d.update(0.0, {0.0, 0, 0}, 0.1).accel == 0.0);
  }

  SUBCASE("reset restores the initial state") {
    driver.reset();
    const auto again = driver.update(0.0, {0.0, 0, 0}, 2.0);
    CHECK(again.accel == first.accel);
  }
}

TEST_CASE("driver config") {
  DriverConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.lookahead(0.0) == cfg.min_lookahead);
  CHECK(cfg.lookahead(1000.0) == cfg.max_lookahead);

  const auto s = cfg.scaled(0.1, 0.25);
  CHECK(s.kp_speed == Approx(cfg.kp_speed / 0.25));
  CHECK(s.ki_speed == Approx(cfg.ki_speed / 0.0625));
  CHECK(s.a_max == Approx(cfg.a_max * 0.1 / 0.0625));
  CHECK(s.sample_rate == Approx(cfg.sample_rate / 0.25));
  CHECK(s.lookahead(0.4 * 3.0) == Approx(0.1 * cfg.lookahead(3.0)));

  auto bad = cfg;
  bad.sample_rate = 0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  CHECK_THROWS_AS(Driver(bad, fixtures::rcc(), {}), ValidationError);
}
