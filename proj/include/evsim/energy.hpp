#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evsim/dynamics.hpp"

namespace evsim {

struct TrajectorySample {
  double t = 0.0;
  VehicleState state;
  VehicleInputs inputs;
  double torque = 0.0;        // motor shaft torque, N m
  double motor_speed = 0.0;   // rad/s
  double battery_power = 0.0; // W
  double energy = 0.0;        // cumulative battery energy, J
};

/// Uniformly sampled closed-loop run.
struct Trajectory {
  double dt = 0.0;
  std::string vehicle;
  std::string schedule;
  long envelope_violations = 0;
  std::vector<TrajectorySample> samples;

  /// CSV with columns t,x,y,psi,vx,vy,r,a,delta,tau,omega,Pb,Eb at full
  /// double precision.
  [[nodiscard]] std::string to_csv() const;
};

/// Cumulative trapezoidal integral of a uniformly sampled power series.
/// The result has the same length as the input and starts at 0.
std::vector<double> integrate_energy(std::span<const double> power, double dt);

struct EnergyReport {
  double energy_wh = 0.0;
  double distance_m = 0.0;
  std::optional<double> wh_per_m;  // absent for zero-distance runs
  double peak_power_w = 0.0;
  std::optional<double> delta_percent;  // set when paired with a baseline

  /// Flat JSON object, six significant digits.
  [[nodiscard]] std::string to_json() const;
  static std::string csv_header();
  [[nodiscard]] std::string to_csv_row(const std::string& label) const;
};

/// Energy, distance (trapezoidal integral of vx) and Wh/m for one run.
EnergyReport energy_report(const Trajectory& traj);

/// Percent increase of the lane-change run's Wh/m over the straight run.
double compare_runs(const EnergyReport& straight, const EnergyReport& with_lane_changes);

}  // namespace evsim
