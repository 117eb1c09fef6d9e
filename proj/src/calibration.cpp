#include "evsim/calibration.hpp"

#include <cmath>
#include <numbers>

#include "evsim/error.hpp"

namespace evsim {

double bifilar_inertia(double mass, double spacing, double length, double period, double gravity) {
  if (!(mass > 0.0 && spacing > 0.0 && length > 0.0 && period > 0.0 && gravity > 0.0)) {
    throw ValidationError("bifilar inputs must all be positive");
  }
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return mass * gravity * spacing * spacing * period * period / (16.0 * pi2 * length);
}

AxleDistances cog_from_axle_loads(double wheelbase, double front_load, double rear_load) {
  if (!(wheelbase > 0.0)) throw ValidationError("wheelbase must be positive");
  if (!(front_load >= 0.0 && rear_load >= 0.0)) throw ValidationError("axle loads must be >= 0");
  const double total = front_load + rear_load;
  if (!(total > 0.0)) throw ValidationError("total axle load must be positive");
  const double lf = wheelbase * rear_load / total;
  return {lf, wheelbase - lf};
}

ShaftEstimate estimate_damping_inertia(double steady_speed, double steady_torque,
                                       double time_constant) {
  if (!(steady_speed > 0.0)) throw ValidationError("steady-state speed must be positive");
  if (!(time_constant > 0.0)) throw ValidationError("time constant must be positive");
  const double damping = steady_torque / steady_speed;
  return {damping, damping * time_constant};
}

}  // namespace evsim
