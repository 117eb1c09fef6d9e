#pragma once

namespace evsim {

inline constexpr double kStandardGravity = 9.81;

/// Yaw inertia from a bifilar (two-wire) torsional pendulum: body mass,
/// wire spacing `spacing`, wire length `length` and oscillation period.
double bifilar_inertia(double mass, double spacing, double length, double period,
                       double gravity = kStandardGravity);

struct AxleDistances {
  double cg_to_front = 0.0;
  double cg_to_rear = 0.0;
};

/// CoG position from static axle loads: the rear share of the weight sits
/// in front of the CoG, so lF = l * W_rear / W.
AxleDistances cog_from_axle_loads(double wheelbase, double front_load, double rear_load);

struct ShaftEstimate {
  double damping = 0.0;  // N m s/rad
  double inertia = 0.0;  // kg m^2
};

/// Free-spinning step response: steady torque over steady speed gives the
/// damping, and the first-order time constant times the damping gives the
/// inertia.
ShaftEstimate estimate_damping_inertia(double steady_speed, double steady_torque,
                                       double time_constant);

}  // namespace evsim
