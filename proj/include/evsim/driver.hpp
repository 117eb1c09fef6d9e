#pragma once

#include "evsim/drivecycle.hpp"
#include "evsim/dynamics.hpp"
#include "evsim/params.hpp"

namespace evsim {

/// Gains and limits of the closed-loop driver. Dimensional values are for
/// the vehicle the config belongs to; use scaled() to carry a config across
/// vehicle sizes.
struct DriverConfig {
  double kp_speed = 1.5;         // 1/s
  double ki_speed = 0.3;         // 1/s^2
  double lookahead_time = 0.9;   // s, lookahead distance = vx * lookahead_time
  double min_lookahead = 0.5;    // m
  double max_lookahead = 10.0;   // m
  double a_max = 3.0;            // m/s^2
  double sample_rate = 100.0;    // Hz, zero-order hold on all commands
  double max_steer = kDefaultMaxSteer;  // rad
  double max_steer_rate = 6.0;   // rad/s
  double min_speed = kDefaultMinSpeed;  // m/s, no steering below this

  void validate() const;
  [[nodiscard]] double sample_period() const { return 1.0 / sample_rate; }
  [[nodiscard]] double lookahead(double vx) const;

  /// Config for a similar vehicle whose lengths are `length_ratio` and
  /// times `time_ratio` times this one's.
  [[nodiscard]] DriverConfig scaled(double length_ratio, double time_ratio) const;
};

struct SpeedLoopState {
  double integral = 0.0;  // integrated speed error, m
};

/// PI speed law, saturated at +/- a_max. The integrator advances by one
/// sample period and is frozen while the output is pushed further into
/// saturation.
double speed_command(double v_ref, double v, SpeedLoopState& loop, const DriverConfig& cfg);

/// Pure pursuit toward the lane-centre target line, saturated at max_steer
/// and rate-limited relative to `previous_steer` over one sample period.
/// Returns 0 at or below the low-speed guard.
double steering_command(const VehicleState& pose, const ManeuverSchedule& lane,
                        const DriverConfig& cfg, const VehicleParams& params,
                        double previous_steer);

/// Stateful driver for one run: samples the reference and vehicle state at
/// cfg.sample_rate and holds its commands in between.
class Driver {
 public:
  Driver(DriverConfig cfg, VehicleParams params, ManeuverSchedule lane);

  VehicleInputs update(double t, const VehicleState& state, double v_ref);
  void reset();

  [[nodiscard]] const DriverConfig& config() const { return cfg_; }
  [[nodiscard]] const ManeuverSchedule& lane() const { return lane_; }

 private:
  DriverConfig cfg_;
  VehicleParams params_;
  ManeuverSchedule lane_;
  SpeedLoopState loop_;
  VehicleInputs held_;
  long next_sample_ = 0;
};

}  // namespace evsim
