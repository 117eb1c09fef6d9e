#pragma once

#include <optional>

#include "evsim/params.hpp"

namespace evsim {

/// Below this longitudinal speed slip angles are undefined and tire forces
/// are zeroed.
inline constexpr double kDefaultMinSpeed = 0.05;
inline constexpr double kDefaultMaxSteer = 0.45;

/// Planar bicycle-model state. x, y and heading are kinematic bookkeeping
/// and do not feed back into the force model.
struct VehicleState {
  double vx = 0.0;        // m/s, body frame
  double vy = 0.0;        // m/s, body frame
  double yaw_rate = 0.0;  // rad/s
  double x = 0.0;         // m
  double y = 0.0;         // m
  double heading = 0.0;   // rad
};

using StateDerivative = VehicleState;

struct VehicleInputs {
  double accel = 0.0;  // commanded longitudinal acceleration at the CoG, m/s^2
  double steer = 0.0;  // front wheel angle, rad
};

struct SlipAngles {
  double front = 0.0;
  double rear = 0.0;
};

/// Axle lateral forces (both tires of an axle lumped).
struct AxleForces {
  double front = 0.0;
  double rear = 0.0;
};

/// Kinematic slip angles. Returns nullopt below `min_speed`, where the
/// caller must fall back to the force-free degenerate model.
std::optional<SlipAngles> slip_angles(const VehicleState& state, double steer,
                                      const VehicleParams& params,
                                      double min_speed = kDefaultMinSpeed);

/// Linear tire law, two tires per axle.
AxleForces lateral_forces(const SlipAngles& slip, const VehicleParams& params);

/// Tire forces for `state`, zero in the low-speed regime.
AxleForces tire_forces(const VehicleState& state, double steer, const VehicleParams& params,
                       double min_speed = kDefaultMinSpeed);

/// Right-hand side of the bicycle model. Throws NumericError naming the
/// offending term when any component is non-finite.
StateDerivative state_derivative(const VehicleState& state, const VehicleInputs& inputs,
                                 const VehicleParams& params,
                                 double min_speed = kDefaultMinSpeed);

/// One classical fourth-order Runge-Kutta step with inputs held constant.
VehicleState step_rk4(const VehicleState& state, const VehicleInputs& inputs,
                      const VehicleParams& params, double dt,
                      double min_speed = kDefaultMinSpeed);

}  // namespace evsim
