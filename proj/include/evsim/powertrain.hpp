#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "evsim/params.hpp"

namespace evsim {

struct MotorOperatingPoint {
  double torque = 0.0;  // N m at the motor shaft
  double speed = 0.0;   // rad/s
};

struct WheelOperatingPoint {
  double force = 0.0;     // N at the contact patch
  double velocity = 0.0;  // m/s
};

/// Reflects a tractive force and vehicle speed to the motor shaft.
MotorOperatingPoint wheel_to_motor(double force, double vx, const VehicleParams& params);

/// Inverse of wheel_to_motor.
WheelOperatingPoint motor_to_wheel(const MotorOperatingPoint& motor, const VehicleParams& params);

/// Motor torque needed to drive load torque `load_torque` through the
/// shaft inertia and damping.
double shaft_torque(double omega, double domega, double load_torque, const VehicleParams& params);

// dq-frame electrical quantities. Analysis utilities; the closed-loop
// simulation uses the efficiency-map path instead.
struct MotorElectricalState {
  double vd = 0.0;
  double vq = 0.0;
  double id = 0.0;
  double iq = 0.0;
};

double motor_input_power(const MotorElectricalState& e);
double torque_from_iq(double iq, const VehicleParams& params);
double iq_from_torque(double torque, const VehicleParams& params);

/// Motor efficiency over (speed, |torque|), plus the continuous torque
/// envelope over the same speed axis.
///
/// Lookup is bilinear; queries outside the grid clamp to the nearest edge.
class EfficiencyMap {
 public:
  EfficiencyMap() = default;

  /// `eta` is row-major with one row per torque grid value. `envelope` is
  /// either empty (unlimited) or one entry per speed grid value.
  EfficiencyMap(std::vector<double> speed_grid, std::vector<double> torque_grid,
                std::vector<double> eta, std::vector<double> envelope = {});

  /// Map with a single efficiency everywhere.
  static EfficiencyMap constant(double eta);

  /// CSV: first row is the speed grid (leading cell ignored), first column
  /// is the torque grid, body holds efficiencies.
  static EfficiencyMap parse_csv(std::string_view text);
  [[nodiscard]] std::string to_csv() const;

  [[nodiscard]] bool empty() const { return eta_.empty(); }
  [[nodiscard]] double lookup(double torque, double omega) const;

  /// Envelope torque at `omega`; +inf when no envelope is set.
  [[nodiscard]] double torque_limit(double omega) const;
  [[nodiscard]] bool has_envelope() const { return !envelope_.empty(); }

  /// Envelope from rated torque and power: min(tau_rated, P_rated/|omega|).
  [[nodiscard]] EfficiencyMap with_rated_envelope(const VehicleParams& params) const;

  /// Same efficiency surface with both axes stretched (speeds multiplied by
  /// `speed_factor`, torques by `torque_factor`). Maps one motor onto a
  /// similar motor at a different scale.
  [[nodiscard]] EfficiencyMap rescaled(double speed_factor, double torque_factor) const;

  /// Mean of the grid efficiencies.
  [[nodiscard]] double mean_efficiency() const;

  [[nodiscard]] const std::vector<double>& speed_grid() const { return speed_; }
  [[nodiscard]] const std::vector<double>& torque_grid() const { return torque_; }
  [[nodiscard]] const std::vector<double>& values() const { return eta_; }
  [[nodiscard]] const std::vector<double>& envelope() const { return envelope_; }

 private:
  void validate() const;
  [[nodiscard]] double at(std::size_t torque_index, std::size_t speed_index) const {
    return eta_[torque_index * speed_.size() + speed_index];
  }

  std::vector<double> speed_;
  std::vector<double> torque_;
  std::vector<double> eta_;
  std::vector<double> envelope_;
};

double efficiency_lookup(const EfficiencyMap& map, double torque, double omega);

/// Shape of the built-in synthetic maps. Efficiency rises from `eta_min`
/// toward `eta_max` with both torque and speed (normalized to the rated
/// corner point).
struct SyntheticMapShape {
  double eta_min = 0.85;
  double eta_max = 0.97;
  double torque_knee = 0.08;  // fraction of rated torque
  double speed_knee = 0.10;   // fraction of base speed
};

inline constexpr SyntheticMapShape kFullSizeMapShape{0.85, 0.97, 0.08, 0.10};
inline constexpr SyntheticMapShape kHobbyMotorMapShape{0.45, 0.75, 0.10, 0.15};

/// Synthetic map over [0, 3 x base speed] x [0, tau_rated] for `params`,
/// with the rated envelope attached.
EfficiencyMap synthetic_efficiency_map(const VehicleParams& params, const SyntheticMapShape& shape);

struct RegenPolicy {
  bool enabled = false;
};

/// Battery power for a motor operating point. Propulsion divides by the
/// efficiency; braking recovers eta * tau * omega when regen is enabled and
/// draws nothing otherwise.
double battery_power(double torque, double omega, double eta, RegenPolicy regen);

/// Speed commands whose magnitude is below the dead-zone threshold map to 0.
double apply_dead_zone(double omega_cmd, const VehicleParams& params);

}  // namespace evsim
