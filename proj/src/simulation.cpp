#include "evsim/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "evsim/detail/text.hpp"
#include "evsim/error.hpp"

namespace evsim {

void SimulationOptions::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("time step must be positive");
  if (!(min_speed >= 0.0)) throw ValidationError("low-speed guard must be >= 0");
  if (!(divergence_fraction > 0.0 && divergence_time > 0.0)) {
    throw ValidationError("divergence bounds must be positive");
  }
}

namespace {

/// Advances one vehicle by fixed steps and records the powertrain channels.
class Stepper {
 public:
  Stepper(const VehicleParams& params, const EfficiencyMap& efficiency,
          const SimulationOptions& options, Trajectory& out)
      : params_(params), map_(efficiency), opts_(options), out_(out) {}

  /// Applies the envelope and standstill limits to `cmd`, logs the sample
  /// at time t and returns the inputs actually applied.
  VehicleInputs record(double t, const VehicleState& state, VehicleInputs cmd) {
    if (state.vx <= 0.0 && cmd.accel < 0.0) cmd.accel = 0.0;  // no reversing

    const double k = params_.motor_speed_per_velocity();
    const double omega = k * state.vx;
    StateDerivative d = state_derivative(state, cmd, params_, opts_.min_speed);

    if (opts_.enforce_envelope && map_.has_envelope()) {
      const double limit = map_.torque_limit(omega);
      const double tau = torque_for(cmd.accel, d.vx, omega);
      if (std::abs(tau) > limit * (1.0 + 1e-12)) {
        // tau is affine in the commanded acceleration.
        const double gain = params_.shaft_inertia * k +
                            params_.wheel_radius * params_.mass /
                                (params_.diff_efficiency * params_.final_drive_ratio);
        const double offset = tau - gain * cmd.accel;
        const double target = std::copysign(limit, tau);
        const double coupling = d.vx - cmd.accel;
        cmd.accel = (target - offset) / gain;
        d.vx = cmd.accel + coupling;
        ++out_.envelope_violations;
      }
    }

    TrajectorySample s;
    s.t = t;
    s.state = state;
    s.inputs = cmd;
    s.motor_speed = omega;
    s.torque = torque_for(cmd.accel, d.vx, omega);
    const double eta = map_.lookup(s.torque, omega);
    s.battery_power = battery_power(s.torque, omega, eta, opts_.regen);
    out_.samples.push_back(s);
    return cmd;
  }

  VehicleState advance(const VehicleState& state, const VehicleInputs& applied) const {
    VehicleState next = step_rk4(state, applied, params_, opts_.dt, opts_.min_speed);
    if (next.vx < 0.0) next.vx = 0.0;
    return next;
  }

  void finish() {
    std::vector<double> power;
    power.reserve(out_.samples.size());
    for (const auto& s : out_.samples) power.push_back(s.battery_power);
    const auto energy = integrate_energy(power, opts_.dt);
    for (std::size_t i = 0; i < energy.size(); ++i) out_.samples[i].energy = energy[i];
  }

 private:
  [[nodiscard]] double torque_for(double accel, double dvx, double omega) const {
    const double k = params_.motor_speed_per_velocity();
    const double load = wheel_to_motor(params_.mass * accel, 0.0, params_).torque;
    return shaft_torque(omega, k * dvx, load, params_);
  }

  const VehicleParams& params_;
  const EfficiencyMap& map_;
  const SimulationOptions& opts_;
  Trajectory& out_;
};

long step_count(double duration, double dt) {
  return static_cast<long>(std::floor(duration / dt + 1e-9));
}

}  // namespace

Trajectory simulate(const VehicleParams& params, const EfficiencyMap& efficiency, Driver& driver,
                    const DriveCycle& cycle, const SimulationOptions& options) {
  params.validate();
  options.validate();
  cycle.validate();
  if (efficiency.empty()) throw ValidationError("simulation needs an efficiency map");

  Trajectory traj;
  traj.dt = options.dt;
  traj.vehicle = params.name;
  traj.schedule = driver.lane().id();

  const long steps = step_count(cycle.duration(), options.dt);
  traj.samples.reserve(static_cast<std::size_t>(steps) + 1);
  Stepper stepper(params, efficiency, options, traj);
  driver.reset();

  const double bound = options.divergence_fraction * cycle.max_speed();
  double off_track_since = -1.0;
  VehicleState state;
  for (long k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * options.dt;
    const double v_ref = cycle.speed_at(t);
    const VehicleInputs applied = stepper.record(t, state, driver.update(t, state, v_ref));

    if (bound > 0.0 && std::abs(state.vx - v_ref) > bound) {
      if (off_track_since < 0.0) off_track_since = t;
      if (t - off_track_since > options.divergence_time) {
        throw NumericError("speed tracking diverged at t = " + detail::format_sig(t) +
                           " s (v = " + detail::format_sig(state.vx) +
                           " m/s, v_ref = " + detail::format_sig(v_ref) + " m/s)");
      }
    } else {
      off_track_since = -1.0;
    }

    if (k < steps) state = stepper.advance(state, applied);
  }
  stepper.finish();
  return traj;
}

Trajectory simulate_open_loop(const VehicleParams& params, const EfficiencyMap& efficiency,
                              const InputProfile& inputs, const VehicleState& initial,
                              double duration, const SimulationOptions& options) {
  params.validate();
  options.validate();
  if (!(duration >= 0.0)) throw ValidationError("duration must be >= 0");
  if (efficiency.empty()) throw ValidationError("simulation needs an efficiency map");

  Trajectory traj;
  traj.dt = options.dt;
  traj.vehicle = params.name;
  traj.schedule = "open_loop";

  const long steps = step_count(duration, options.dt);
  traj.samples.reserve(static_cast<std::size_t>(steps) + 1);
  Stepper stepper(params, efficiency, options, traj);
  VehicleState state = initial;
  for (long k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * options.dt;
    const VehicleInputs applied = stepper.record(t, state, inputs(t));
    if (k < steps) state = stepper.advance(state, applied);
  }
  stepper.finish();
  return traj;
}

Trajectory Scenario::run() const {
  Driver driver(this->driver, params, lane);
  return simulate(params, efficiency, driver, cycle, options);
}

Scenario Scenario::similar(const BaseRatios& ratios) const {
  const double M = ratios.mass;
  const double L = ratios.length;
  const double T = ratios.time;
  Scenario s;
  s.params = similar_vehicle(params, M, L, T);
  s.efficiency = efficiency.rescaled(1.0 / T, M * L * L / (T * T));
  s.driver = driver.scaled(L, T);
  s.lane = scale_schedule(lane, L);
  ScaleFactors f;
  f.velocity = L / T;
  f.time = T;
  f.distance = L;
  f.acceleration = L / (T * T);
  f.yaw_rate = 1.0 / T;
  f.energy = M * L * L / (T * T);
  s.cycle = scale_cycle(cycle, f);
  s.options = options;
  s.options.dt *= T;
  s.options.min_speed *= L / T;
  s.options.divergence_time *= T;
  return s;
}

}  // namespace evsim
