#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "approx.hpp"
#include "evsim/dynamics.hpp"
#include "evsim/error.hpp"
#include "fixtures.hpp"

using namespace evsim;


TEST_CASE("slip angles") {
  const auto p = fixtures::rivian();

  auto s = slip_angles({10, 0, 0}, 0.0, p);
  REQUIRE(s);
  CHECK(s->front == 0.0);
  CHECK(s->rear == 0.0);

  s = slip_angles({10, 0, 0}, 0.1, p);
  CHECK(s->front == Approx(-0.1));
  CHECK(s->rear == 0.0);

  s = slip_angles({10, 0.5, 0.2}, 0.0, p);
  CHECK(s->front == Approx(std::atan2(0.5 + 1.6915 * 0.2, 10.0)).epsilon(1e-14));
  CHECK(s->front == Approx(0.08364).epsilon(1e-3));
  CHECK(s->rear == Approx(0.01479).epsilon(1e-3));

  SUBCASE("low-speed guard returns the degenerate variant") {
    CHECK_FALSE(slip_angles({0.05, 0, 0}, 0.1, p));
    CHECK_FALSE(slip_angles({0.0, 0.1, 0.1}, 0.1, p));
    const auto f = tire_forces({0.01, 0.1, 0.1}, 0.2, p);
    CHECK(f.front == 0.0);
    CHECK(f.rear == 0.0);
  }
}

TEST_CASE("lateral forces") {
  auto p = fixtures::rcc();
  auto f = lateral_forces({0, 0}, p);
  CHECK(f.front == 0.0);
  CHECK(f.rear == 0.0);

  f = lateral_forces({-0.1, 0}, p);
  CHECK(f.front == Approx(18.0));
  CHECK(f.rear == 0.0);

  p.cornering_stiffness_front = p.cornering_stiffness_rear = 45000;
  f = lateral_forces({0.01, 0.01}, p);
  CHECK(f.front == Approx(-900.0));
  CHECK(f.rear == Approx(-900.0));

  SUBCASE("odd in slip") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-0.3, 0.3);
    for (int i = 0; i < 200; ++i) {
      const SlipAngles a{u(rng), u(rng)};
      const auto pos = lateral_forces(a, p);
      const auto neg = lateral_forces({-a.front, -a.rear}, p);
      CHECK(pos.front == -neg.front);
      CHECK(pos.rear == -neg.rear);
    }
  }
}

TEST_CASE("state derivative") {
  const auto p = fixtures::rivian();

  auto d = state_derivative({10, 0, 0}, {0, 0}, p);
  CHECK(d.vx == 0.0);
  CHECK(d.vy == 0.0);
  CHECK(d.yaw_rate == 0.0);
  CHECK(d.x == 10.0);
  CHECK(d.y == 0.0);
  CHECK(d.heading == 0.0);

  d = state_derivative({10, 0, 0}, {2, 0}, p);
  CHECK(d.vx == 2.0);
  CHECK(d.vy == 0.0);
  CHECK(d.yaw_rate == 0.0);

  SUBCASE("matches a hand evaluation of the equations") {
    const VehicleState s{8.0, 0.3, -0.1, 0, 0, 0.4};
    const double delta = 0.05;
    const double aF = std::atan2(0.3 + 1.6915 * -0.1, 8.0) - delta;
    const double aR = std::atan2(0.3 - 1.7605 * -0.1, 8.0);
    const double FF = -2 * 40700 * aF;
    const double FR = -2 * 40700 * aR;
    d = state_derivative(s, {0.7, delta}, p);
    CHECK(d.vx == Approx(0.7 - (FF * std::sin(delta) - 3152 * 0.3 * -0.1) / 3152).epsilon(1e-13));
    CHECK(d.vy == Approx((FF * std::cos(delta) + FR - 3152 * 8.0 * -0.1) / 3152).epsilon(1e-13));
    CHECK(d.yaw_rate ==
          Approx((FF * 1.6915 * std::cos(delta) - FR * 1.7605) / 5000).epsilon(1e-13));
    CHECK(d.x == Approx(8.0 * std::cos(0.4) - 0.3 * std::sin(0.4)));
    CHECK(d.y == Approx(8.0 * std::sin(0.4) + 0.3 * std::cos(0.4)));
    CHECK(d.heading == -0.1);
  }

  SUBCASE("non-finite input names the term") {
    auto bad = p;
    bad.yaw_inertia = 0.0;
    try {
      state_derivative({10, 0.1, 0.1}, {0, 0.1}, bad);
      FAIL("expected NumericError");
    } catch (const NumericError& e) {
      CHECK(std::string(e.what()).find("dr") != std::string::npos);
    }
  }

  SUBCASE("zero steering keeps the lateral subspace at rest") {
    VehicleState s{0, 0, 0};
    for (int i = 0; i < 3000; ++i) {
      s = step_rk4(s, {std::sin(0.01 * i), 0.0}, p, 1e-2);
      if (s.vx < 0) s.vx = 0;
      REQUIRE(s.vy == 0.0);
      REQUIRE(s.yaw_rate == 0.0);
      REQUIRE(s.y == 0.0);
    }
  }
}

namespace {

// Independent Newton solve of dvy = dr = 0 at fixed vx and steer, written
// from the model equations without calling the library.
std::array<double, 2> cornering_fixed_point(const VehicleParams& p, double vx, double delta,
                                            std::array<double, 2> guess) {
  auto residual = [&](double vy, double r) {
    const double FF = -2 * p.cornering_stiffness_front *
                      (std::atan2(vy + p.cg_to_front * r, vx) - delta);
    const double FR = -2 * p.cornering_stiffness_rear * std::atan2(vy - p.cg_to_rear * r, vx);
    return std::array<double, 2>{(FF * std::cos(delta) + FR) / p.mass - vx * r,
                                 (FF * p.cg_to_front * std::cos(delta) - FR * p.cg_to_rear) /
                                     p.yaw_inertia};
  };
  auto x = guess;
  for (int it = 0; it < 50; ++it) {
    const auto f = residual(x[0], x[1]);
    const double h = 1e-7;
    const auto fv = residual(x[0] + h, x[1]);
    const auto fr = residual(x[0], x[1] + h);
    const double j00 = (fv[0] - f[0]) / h, j10 = (fv[1] - f[1]) / h;
    const double j01 = (fr[0] - f[0]) / h, j11 = (fr[1] - f[1]) / h;
    const double det = j00 * j11 - j01 * j10;
    x[0] -= (j11 * f[0] - j01 * f[1]) / det;
    x[1] -= (-j10 * f[0] + j00 * f[1]) / det;
  }
  return x;
}

// Small-angle linear model, solved in closed form.
std::array<double, 2> linear_fixed_point(const VehicleParams& p, double vx, double delta) {
  const double cf = 2 * p.cornering_stiffness_front, cr = 2 * p.cornering_stiffness_rear;
  const double a = p.cg_to_front, b = p.cg_to_rear, m = p.mass;
  // [ -(cf+cr)/vx            -(cf a - cr b)/vx - m vx ] [vy]   [ -cf delta   ]
  // [ -(cf a - cr b)/vx      -(cf a^2 + cr b^2)/vx    ] [r ] = [ -cf a delta ]
  const double m00 = -(cf + cr) / vx, m01 = -(cf * a - cr * b) / vx - m * vx;
  const double m10 = -(cf * a - cr * b) / vx, m11 = -(cf * a * a + cr * b * b) / vx;
  const double r0 = -cf * delta, r1 = -cf * a * delta;
  const double det = m00 * m11 - m01 * m10;
  return {(r0 * m11 - m01 * r1) / det, (m00 * r1 - m10 * r0) / det};
}

}  // namespace

TEST_CASE("steady-state cornering") {
  const auto p = fixtures::rivian();
  const double vx = 10.0, delta = 0.02;

  VehicleState s{vx, 0, 0};
  for (int i = 0; i < 20000; ++i) {
    const auto d = state_derivative(s, {0.0, delta}, p);
    s = step_rk4(s, {-(d.vx), delta}, p, 1e-3);  // hold vx
    s.vx = vx;
  }
  const auto d = state_derivative(s, {0.0, delta}, p);
  CHECK(std::abs(d.vy) < 1e-8);
  CHECK(std::abs(d.yaw_rate) < 1e-8);

  const auto lin = linear_fixed_point(p, vx, delta);
  const auto oracle = cornering_fixed_point(p, vx, delta, lin);
  CHECK(fixtures::rel_err(s.vy, oracle[0]) < 1e-8);
  CHECK(fixtures::rel_err(s.yaw_rate, oracle[1]) < 1e-8);
  // The linearised solve agrees to small-angle accuracy.
  CHECK(fixtures::rel_err(s.yaw_rate, lin[1]) < 1e-3);
}

TEST_CASE("rk4 step") {
  const auto p = fixtures::rcc();
  const VehicleState rest{};
  const auto same = step_rk4(rest, {0, 0}, p, 0.1);
  CHECK(same.vx == 0.0);
  CHECK(same.x == 0.0);

  const auto s = step_rk4(rest, {1.0, 0.0}, p, 0.1);
  CHECK(s.vx == Approx(0.1).epsilon(1e-15));
  CHECK(s.x == Approx(0.005).epsilon(1e-14));

  CHECK_THROWS_AS(step_rk4(rest, {1, 0}, p, 0.0), ValidationError);
  CHECK_THROWS_AS(step_rk4(rest, {1, 0}, p, -1e-3), ValidationError);
}

namespace {

// Lane-change-like manoeuvre: steering piecewise constant over 20 ms
// blocks so every tested step size integrates the same input signal.
VehicleState run_lane_change(const VehicleParams& p, double dt, double duration) {
  const double hold = 0.02;
  VehicleState s{5.0, 0, 0};
  const long steps = std::lround(duration / dt);
  for (long k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double block = std::floor(t / hold + 1e-9) * hold;
    const double steer = 0.08 * std::sin(2 * std::numbers::pi * block / 1.5);
    s = step_rk4(s, {0.3, steer}, p, dt);
  }
  return s;
}

double state_distance(const VehicleState& a, const VehicleState& b) {
  return std::abs(a.vx - b.vx) + std::abs(a.vy - b.vy) + std::abs(a.yaw_rate - b.yaw_rate) +
         std::abs(a.x - b.x) + std::abs(a.y - b.y) + std::abs(a.heading - b.heading);
}

}  // namespace

TEST_CASE("rk4 global error is fourth order") {
  const auto p = fixtures::rcc();
  const double dt = 0.01;
  const auto ref = run_lane_change(p, dt / 16, 3.0);
  const double e1 = state_distance(run_lane_change(p, dt, 3.0), ref);
  const double e2 = state_distance(run_lane_change(p, dt / 2, 3.0), ref);
  INFO("errors " << e1 << " " << e2);
  CHECK(e1 / e2 >= 8.0);
}

TEST_CASE("holding speed through a lane change takes positive work") {
  // a = (FFy sin(delta) - m vy r) / m keeps vx constant; its work over the
  // manoeuvre is positive, the straight run needs none.
  const auto p = fixtures::rcc();
  const double vx = 2.0, dt = 1e-3;
  VehicleState s{vx, 0, 0};
  double work = 0.0;
  for (int k = 0; k < 4000; ++k) {
    const double t = k * dt;
    const double steer = t < 2.0 ? 0.05 * std::sin(std::numbers::pi * t) : 0.0;
    const auto f = tire_forces(s, steer, p);
    const double a = (f.front * std::sin(steer) - p.mass * s.vy * s.yaw_rate) / p.mass;
    work += p.mass * a * s.vx * dt;
    s = step_rk4(s, {a, steer}, p, dt);
    REQUIRE(s.vx == Approx(vx).epsilon(1e-3));
    s.vx = vx;
  }
  CHECK(work > 0.0);
}
