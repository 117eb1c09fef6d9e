#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "approx.hpp"
#include "evsim/error.hpp"
#include "evsim/powertrain.hpp"
#include "fixtures.hpp"

using namespace evsim;


TEST_CASE("wheel to motor") {
  const auto p = fixtures::rcc();
  auto m = wheel_to_motor(0, 0, p);
  CHECK(m.torque == 0.0);
  CHECK(m.speed == 0.0);

  m = wheel_to_motor(3.78 * 1.0, 0.0, p);
  CHECK(m.torque == Approx(3.78 * 0.049 / 11.82).epsilon(1e-14));
  CHECK(m.torque == Approx(0.01567).epsilon(1e-3));

  m = wheel_to_motor(0.0, 5.0, p);
  CHECK(m.speed == Approx(1206.1).epsilon(1e-4));

  SUBCASE("differential loss raises the motor torque") {
    auto lossy = p;
    lossy.diff_efficiency = 0.95;
    CHECK(wheel_to_motor(10, 1, lossy).torque == Approx(wheel_to_motor(10, 1, p).torque / 0.95));
  }

  SUBCASE("round trip") {
    auto q = fixtures::rivian();
    q.diff_efficiency = 0.97;
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> force(-5000, 5000), speed(0, 40);
    for (int i = 0; i < 100; ++i) {
      const double f = force(rng), v = speed(rng);
      const auto back = motor_to_wheel(wheel_to_motor(f, v, q), q);
      CHECK(back.force == Approx(f).epsilon(1e-12));
      CHECK(back.velocity == Approx(v).epsilon(1e-12));
    }
  }
}

TEST_CASE("shaft torque") {
  auto p = fixtures::rcc();
  CHECK(shaft_torque(0, 0, 0, p) == 0.0);
  CHECK(shaft_torque(100, 50, 0.5, p) == Approx(2.2e-6 * 50 + 1.17e-5 * 100 + 0.5));
  CHECK(shaft_torque(100, 50, 0.5, p) == Approx(0.5013).epsilon(1e-4));

  p.shaft_damping = 1.2714e-5;
  CHECK(shaft_torque(527, 0, 0, p) == Approx(0.0067).epsilon(1e-3));
}

TEST_CASE("electrical relations") {
  CHECK(motor_input_power({}) == 0.0);
  CHECK(motor_input_power({0, 10, 0, 4}) == Approx(60.0));
  CHECK(motor_input_power({2, 10, -1, 4}) == Approx(57.0));

  const auto p = fixtures::rcc();
  CHECK(torque_from_iq(0, p) == 0.0);
  CHECK(torque_from_iq(10, p) == Approx(2 * 1.5 * 0.887e-3 * 10).epsilon(1e-14));
  CHECK(torque_from_iq(10, p) == Approx(0.02661).epsilon(1e-4));
  CHECK(iq_from_torque(torque_from_iq(7.5, p), p) == Approx(7.5));

  auto bad = p;
  bad.flux_linkage = 0;
  CHECK_THROWS_AS(iq_from_torque(1.0, bad), ValidationError);
}

TEST_CASE("efficiency lookup") {
  const EfficiencyMap patch({0, 100}, {0, 1}, {0.8, 0.9, 0.84, 0.94});
  CHECK(efficiency_lookup(patch, 0, 0) == 0.8);
  CHECK(efficiency_lookup(patch, 0, 100) == 0.9);
  CHECK(efficiency_lookup(patch, 1, 0) == 0.84);
  CHECK(efficiency_lookup(patch, 1, 100) == 0.94);
  CHECK(efficiency_lookup(patch, 0.5, 50) == Approx(0.87).epsilon(1e-14));
  CHECK(efficiency_lookup(patch, 0.0, 500) == 0.9);
  CHECK(efficiency_lookup(patch, -1.0, 50) == Approx(0.89));  // |torque|
  CHECK_THROWS_AS(efficiency_lookup(EfficiencyMap{}, 1, 1), ValidationError);

  SUBCASE("bilinear oracle on a random map") {
    const std::vector<double> speeds{0, 50, 200, 400};
    const std::vector<double> torques{0, 0.1, 0.3};
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.4, 0.95);
    std::vector<double> eta(speeds.size() * torques.size());
    for (auto& e : eta) e = u(rng);
    const EfficiencyMap map(speeds, torques, eta);
    std::uniform_real_distribution<double> qs(0, 400), qt(0, 0.3);
    for (int n = 0; n < 200; ++n) {
      const double w = qs(rng), tau = qt(rng);
      std::size_t i = 0, j = 0;
      while (j + 2 < speeds.size() && w > speeds[j + 1]) ++j;
      while (i + 2 < torques.size() && tau > torques[i + 1]) ++i;
      const double fx = (w - speeds[j]) / (speeds[j + 1] - speeds[j]);
      const double fy = (tau - torques[i]) / (torques[i + 1] - torques[i]);
      const auto at = [&](std::size_t r, std::size_t c) { return eta[r * speeds.size() + c]; };
      const double expected = (1 - fy) * ((1 - fx) * at(i, j) + fx * at(i, j + 1)) +
                              fy * ((1 - fx) * at(i + 1, j) + fx * at(i + 1, j + 1));
      CHECK(map.lookup(tau, w) == Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("efficiency map csv") {
  const auto map = EfficiencyMap::parse_csv("tau\\omega,0,100,200\n0,0.5,0.6,0.7\n0.2,0.6,0.8,0.9\n");
  CHECK(map.speed_grid() == std::vector<double>{0, 100, 200});
  CHECK(map.torque_grid() == std::vector<double>{0, 0.2});
  CHECK(map.lookup(0.2, 100) == 0.8);
  const auto again = EfficiencyMap::parse_csv(map.to_csv());
  CHECK(again.values() == map.values());
  CHECK(again.speed_grid() == map.speed_grid());

  CHECK_THROWS_AS(EfficiencyMap::parse_csv(""), ValidationError);
  CHECK_THROWS_AS(EfficiencyMap::parse_csv("x,0,1\n0,0.5\n"), ValidationError);
  CHECK_THROWS_AS(EfficiencyMap::parse_csv("x,1,0\n0,0.5,0.5\n"), ValidationError);
  CHECK_THROWS_AS(EfficiencyMap::parse_csv("x,0,1\n0,0.5,1.5\n"), ValidationError);
}

TEST_CASE("envelope and rescaling") {
  const auto p = fixtures::rcc();
  const auto map = synthetic_efficiency_map(p, kHobbyMotorMapShape);
  REQUIRE(map.has_envelope());
  CHECK(map.torque_limit(0) == Approx(0.211));
  const double w = 3 * 800.0 / 0.211;
  CHECK(map.torque_limit(w) <= Approx(800.0 / w).epsilon(1e-9));
  CHECK(EfficiencyMap::constant(0.9).torque_limit(1e6) == std::numeric_limits<double>::infinity());
  for (double e : map.values()) {
    CHECK(e >= 0.45 - 1e-12);
    CHECK(e <= 0.75 + 1e-12);
  }

  const auto r = map.rescaled(2.0, 3.0);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> qs(0, map.speed_grid().back()),
      qt(0, map.torque_grid().back());
  for (int i = 0; i < 50; ++i) {
    const double wq = qs(rng), tq = qt(rng);
    CHECK(r.lookup(3 * tq, 2 * wq) == Approx(map.lookup(tq, wq)).epsilon(1e-12));
  }
}

TEST_CASE("battery power") {
  CHECK(battery_power(0, 123, 0.9, {}) == 0.0);
  CHECK(battery_power(1, 100, 0.9, {}) == Approx(111.111).epsilon(1e-5));
  CHECK(battery_power(-1, 100, 0.9, {false}) == 0.0);
  CHECK(battery_power(-1, 100, 0.9, {true}) == Approx(-90.0));
  CHECK_THROWS_AS(battery_power(1, 1, 0.0, {}), ValidationError);
  CHECK_THROWS_AS(battery_power(1, 1, -0.5, {}), ValidationError);

  SUBCASE("never below mechanical power while motoring") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> tau(0, 5), omega(0, 1000), eta(0.05, 1.0);
    for (int i = 0; i < 200; ++i) {
      const double t = tau(rng), w = omega(rng);
      CHECK(battery_power(t, w, eta(rng), {}) >= t * w);
    }
  }
}

TEST_CASE("dead zone") {
  const auto p = fixtures::rcc();
  CHECK(apply_dead_zone(0, p) == 0.0);
  CHECK(apply_dead_zone(30, p) == 0.0);
  CHECK(apply_dead_zone(-30, p) == 0.0);
  CHECK(apply_dead_zone(100, p) == 100.0);
  CHECK(apply_dead_zone(-100, p) == -100.0);
  CHECK(apply_dead_zone(5, fixtures::rivian()) == 5.0);
}
