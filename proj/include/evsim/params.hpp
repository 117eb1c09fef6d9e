#pragma once

#include <string>

namespace evsim {

/// Physical constants of one vehicle. SI units throughout.
///
/// The config-file key for each field is given in brackets.
struct VehicleParams {
  std::string name;

  double mass = 0.0;                      // [m]  kg
  double yaw_inertia = 0.0;               // [Iz] kg m^2
  double cg_to_front = 0.0;               // [lF] m
  double cg_to_rear = 0.0;                // [lR] m
  double wheelbase = 0.0;                 // [l]  m
  double cornering_stiffness_front = 0.0; // [CF] N/rad, per tire
  double cornering_stiffness_rear = 0.0;  // [CR] N/rad, per tire
  double wheel_radius = 0.0;              // [rw] m
  double final_drive_ratio = 1.0;         // [Nd]
  double diff_efficiency = 1.0;           // [eta_i]
  double shaft_inertia = 0.0;             // [J]  kg m^2, reflected to the motor shaft
  double shaft_damping = 0.0;             // [B]  N m s/rad, reflected to the motor shaft
  double pole_count = 4.0;                // [Np]
  double flux_linkage = 0.0;              // [lambda] Wb
  double dead_zone_speed = 0.0;           // [dead_zone_speed] rad/s at the motor
  double rated_torque = 0.0;              // [tau_rated] N m
  double rated_power = 0.0;               // [P_rated] W

  /// Motor speed per unit vehicle speed, Nd / rw.
  [[nodiscard]] double motor_speed_per_velocity() const { return final_drive_ratio / wheel_radius; }

  /// Throws ValidationError naming the first violated constraint.
  void validate() const;
};

/// Geometrically and dynamically similar copy of `base`, scaled by the
/// given base-dimension ratios (new/old). Every dimensionless group of the
/// bicycle + drivetrain model is preserved.
VehicleParams similar_vehicle(const VehicleParams& base, double mass_ratio, double length_ratio,
                              double time_ratio);

}  // namespace evsim
