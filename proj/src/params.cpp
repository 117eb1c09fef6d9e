#include "evsim/params.hpp"

#include <cmath>
#include <string>

#include "evsim/error.hpp"

namespace evsim {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError("invalid vehicle parameters: " + what);
}

}  // namespace

void VehicleParams::validate() const {
  const double fields[] = {mass,           yaw_inertia,       cg_to_front,    cg_to_rear,
                           wheelbase,      cornering_stiffness_front,         cornering_stiffness_rear,
                           wheel_radius,   final_drive_ratio, diff_efficiency, shaft_inertia,
                           shaft_damping,  pole_count,        flux_linkage,   dead_zone_speed,
                           rated_torque,   rated_power};
  for (double v : fields) require(std::isfinite(v), "all fields must be finite");

  require(mass > 0.0, "m must be > 0");
  require(yaw_inertia > 0.0, "Iz must be > 0");
  require(cornering_stiffness_front > 0.0, "CF must be > 0");
  require(cornering_stiffness_rear > 0.0, "CR must be > 0");
  require(wheel_radius > 0.0, "rw must be > 0");
  require(final_drive_ratio > 0.0, "Nd must be > 0");
  require(diff_efficiency > 0.0 && diff_efficiency <= 1.0, "eta_i must be in (0, 1]");
  require(wheelbase > 0.0, "l must be > 0");
  require(cg_to_front >= 0.0 && cg_to_rear >= 0.0, "lF and lR must be >= 0");
  require(std::abs(cg_to_front + cg_to_rear - wheelbase) <= 1e-9 * wheelbase,
          "lF + lR must equal l");
  require(shaft_inertia >= 0.0, "J must be >= 0");
  require(shaft_damping >= 0.0, "B must be >= 0");
  require(dead_zone_speed >= 0.0, "dead_zone_speed must be >= 0");
  require(rated_torque > 0.0, "tau_rated must be > 0");
  require(rated_power > 0.0, "P_rated must be > 0");
}

VehicleParams similar_vehicle(const VehicleParams& base, double mass_ratio, double length_ratio,
                              double time_ratio) {
  if (!(mass_ratio > 0.0 && length_ratio > 0.0 && time_ratio > 0.0)) {
    throw ValidationError("similarity ratios must be positive");
  }
  const double M = mass_ratio;
  const double L = length_ratio;
  const double T = time_ratio;
  const double force = M * L / (T * T);
  const double torque = M * L * L / (T * T);

  VehicleParams p = base;
  p.mass *= M;
  p.yaw_inertia *= M * L * L;
  p.cg_to_front *= L;
  p.cg_to_rear *= L;
  p.wheelbase *= L;
  p.cornering_stiffness_front *= force;
  p.cornering_stiffness_rear *= force;
  // Nd is dimensionless, so Nd/rw carries the 1/L of the reflected shaft terms.
  p.wheel_radius *= L;
  p.shaft_inertia *= M * L * L;
  p.shaft_damping *= M * L * L / T;
  p.dead_zone_speed /= T;
  p.rated_torque *= torque;
  p.rated_power *= torque / T;
  return p;
}

}  // namespace evsim
