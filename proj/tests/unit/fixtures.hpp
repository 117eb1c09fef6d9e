#pragma once

#include <cmath>
#include <string>

#include "evsim/params.hpp"

namespace fixtures {

// Table values typed in by hand, independent of the bundled config files.
inline evsim::VehicleParams rcc() {
  evsim::VehicleParams p;
  p.name = "rcc";
  p.mass = 3.78;
  p.yaw_inertia = 0.0382;
  p.cg_to_front = 0.15876;
  p.cg_to_rear = 0.324 - 0.15876;
  p.wheelbase = 0.324;
  p.cornering_stiffness_front = 90.0;
  p.cornering_stiffness_rear = 90.0;
  p.wheel_radius = 0.049;
  p.final_drive_ratio = 11.82;
  p.diff_efficiency = 1.0;
  p.shaft_inertia = 2.2e-6;
  p.shaft_damping = 1.17e-5;
  p.pole_count = 4.0;
  p.flux_linkage = 0.887e-3;
  p.dead_zone_speed = 41.9;
  p.rated_torque = 0.211;
  p.rated_power = 800.0;
  return p;
}

inline evsim::VehicleParams rivian(double cornering_stiffness = 40700.0) {
  evsim::VehicleParams p;
  p.name = "rivian_r1t";
  p.mass = 3152.0;
  p.yaw_inertia = 5000.0;
  p.cg_to_front = 1.6915;
  p.cg_to_rear = 1.7605;
  p.wheelbase = 3.452;
  p.cornering_stiffness_front = cornering_stiffness;
  p.cornering_stiffness_rear = cornering_stiffness;
  p.wheel_radius = 0.4191;
  p.final_drive_ratio = 12.0;
  p.diff_efficiency = 1.0;
  p.shaft_inertia = 0.2;
  p.shaft_damping = 0.1;
  p.pole_count = 8.0;
  p.flux_linkage = 0.05;
  p.dead_zone_speed = 0.0;
  p.rated_torque = 1231.0;
  p.rated_power = 400000.0;
  return p;
}

inline double rel_err(double value, double expected) {
  return std::abs(value - expected) / std::abs(expected);
}

inline std::string data_path(const std::string& rel) { return std::string(EVSIM_DATA_DIR) + "/" + rel; }

}  // namespace fixtures
