#include "evsim/dynamics.hpp"

#include <cmath>
#include <string>

#include "evsim/error.hpp"

namespace evsim {

namespace {

void require_finite(double value, const char* term) {
  if (!std::isfinite(value)) {
    throw NumericError(std::string("non-finite state derivative term: ") + term);
  }
}

VehicleState add_scaled(const VehicleState& s, const StateDerivative& d, double h) {
  return {s.vx + h * d.vx,         s.vy + h * d.vy, s.yaw_rate + h * d.yaw_rate,
          s.x + h * d.x,           s.y + h * d.y,   s.heading + h * d.heading};
}

}  // namespace

std::optional<SlipAngles> slip_angles(const VehicleState& state, double steer,
                                      const VehicleParams& params, double min_speed) {
  if (!(state.vx > min_speed)) return std::nullopt;
  return SlipAngles{
      std::atan2(state.vy + params.cg_to_front * state.yaw_rate, state.vx) - steer,
      std::atan2(state.vy - params.cg_to_rear * state.yaw_rate, state.vx)};
}

AxleForces lateral_forces(const SlipAngles& slip, const VehicleParams& params) {
  return {-2.0 * params.cornering_stiffness_front * slip.front,
          -2.0 * params.cornering_stiffness_rear * slip.rear};
}

AxleForces tire_forces(const VehicleState& state, double steer, const VehicleParams& params,
                       double min_speed) {
  const auto slip = slip_angles(state, steer, params, min_speed);
  return slip ? lateral_forces(*slip, params) : AxleForces{};
}

StateDerivative state_derivative(const VehicleState& state, const VehicleInputs& inputs,
                                 const VehicleParams& params, double min_speed) {
  const AxleForces f = tire_forces(state, inputs.steer, params, min_speed);
  const double m = params.mass;
  const double cos_d = std::cos(inputs.steer);
  const double sin_d = std::sin(inputs.steer);
  const double cos_h = std::cos(state.heading);
  const double sin_h = std::sin(state.heading);

  StateDerivative d;
  d.vx = inputs.accel - (f.front * sin_d - m * state.vy * state.yaw_rate) / m;
  d.vy = (f.front * cos_d + f.rear - m * state.vx * state.yaw_rate) / m;
  d.yaw_rate =
      (f.front * params.cg_to_front * cos_d - f.rear * params.cg_to_rear) / params.yaw_inertia;
  d.x = state.vx * cos_h - state.vy * sin_h;
  d.y = state.vx * sin_h + state.vy * cos_h;
  d.heading = state.yaw_rate;

  require_finite(d.vx, "dvx");
  require_finite(d.vy, "dvy");
  require_finite(d.yaw_rate, "dr");
  require_finite(d.x, "dx");
  require_finite(d.y, "dy");
  require_finite(d.heading, "dpsi");
  return d;
}

VehicleState step_rk4(const VehicleState& state, const VehicleInputs& inputs,
                      const VehicleParams& params, double dt, double min_speed) {
  if (!(dt > 0.0)) throw ValidationError("integration step must be positive");
  const StateDerivative k1 = state_derivative(state, inputs, params, min_speed);
  const StateDerivative k2 =
      state_derivative(add_scaled(state, k1, 0.5 * dt), inputs, params, min_speed);
  const StateDerivative k3 =
      state_derivative(add_scaled(state, k2, 0.5 * dt), inputs, params, min_speed);
  const StateDerivative k4 = state_derivative(add_scaled(state, k3, dt), inputs, params, min_speed);

  const double w = dt / 6.0;
  VehicleState next;
  next.vx = state.vx + w * (k1.vx + 2.0 * k2.vx + 2.0 * k3.vx + k4.vx);
  next.vy = state.vy + w * (k1.vy + 2.0 * k2.vy + 2.0 * k3.vy + k4.vy);
  next.yaw_rate =
      state.yaw_rate + w * (k1.yaw_rate + 2.0 * k2.yaw_rate + 2.0 * k3.yaw_rate + k4.yaw_rate);
  next.x = state.x + w * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
  next.y = state.y + w * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y);
  next.heading =
      state.heading + w * (k1.heading + 2.0 * k2.heading + 2.0 * k3.heading + k4.heading);
  return next;
}

}  // namespace evsim
