#pragma once

#include <functional>

#include "evsim/drivecycle.hpp"
#include "evsim/driver.hpp"
#include "evsim/dynamics.hpp"
#include "evsim/energy.hpp"
#include "evsim/powertrain.hpp"

namespace evsim {

struct SimulationOptions {
  double dt = 1e-3;
  double min_speed = kDefaultMinSpeed;
  RegenPolicy regen;
  bool enforce_envelope = true;
  /// A run fails when |vx - v_ref| stays above this fraction of the cycle's
  /// peak speed for longer than divergence_time.
  double divergence_fraction = 0.2;
  double divergence_time = 2.0;

  void validate() const;
};

/// Closed-loop run over `cycle`. At each step the driver produces (a, delta),
/// the bicycle model is advanced with RK4 and the powertrain logs torque,
/// motor speed and battery power; energy is the trapezoidal integral of
/// battery power.
///
/// Throws NumericError when speed tracking diverges or the state becomes
/// non-finite.
Trajectory simulate(const VehicleParams& params, const EfficiencyMap& efficiency, Driver& driver,
                    const DriveCycle& cycle, const SimulationOptions& options = {});

using InputProfile = std::function<VehicleInputs(double t)>;

/// Open-loop run with prescribed inputs, `duration` long, starting from
/// `initial`. Same powertrain accounting as simulate().
Trajectory simulate_open_loop(const VehicleParams& params, const EfficiencyMap& efficiency,
                              const InputProfile& inputs, const VehicleState& initial,
                              double duration, const SimulationOptions& options = {});

/// One fully specified closed-loop run.
struct Scenario {
  VehicleParams params;
  EfficiencyMap efficiency;
  DriverConfig driver;
  ManeuverSchedule lane;
  DriveCycle cycle;
  SimulationOptions options;

  [[nodiscard]] Trajectory run() const;

  /// The exactly similar run on a vehicle whose mass, lengths and times are
  /// `ratios` times this one's: every pi group, the driver, the schedule,
  /// the cycle, the efficiency map and the step size are carried across.
  [[nodiscard]] Scenario similar(const BaseRatios& ratios) const;
};

}  // namespace evsim
