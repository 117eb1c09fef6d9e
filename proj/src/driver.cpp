#include "evsim/driver.hpp"

#include <algorithm>
#include <cmath>

#include "evsim/error.hpp"
#include "evsim/powertrain.hpp"

namespace evsim {

void DriverConfig::validate() const {
  if (!(kp_speed >= 0.0 && ki_speed >= 0.0)) throw ValidationError("driver gains must be >= 0");
  if (!(lookahead_time > 0.0 && min_lookahead > 0.0 && max_lookahead >= min_lookahead)) {
    throw ValidationError("driver lookahead must be positive with min <= max");
  }
  if (!(a_max > 0.0)) throw ValidationError("driver a_max must be > 0");
  if (!(sample_rate > 0.0)) throw ValidationError("driver sample_rate must be > 0");
  if (!(max_steer > 0.0 && max_steer_rate > 0.0)) {
    throw ValidationError("driver steering limits must be > 0");
  }
  if (!(min_speed >= 0.0)) throw ValidationError("driver min_speed must be >= 0");
}

double DriverConfig::lookahead(double vx) const {
  return std::clamp(lookahead_time * vx, min_lookahead, max_lookahead);
}

DriverConfig DriverConfig::scaled(double length_ratio, double time_ratio) const {
  DriverConfig c = *this;
  c.kp_speed /= time_ratio;
  c.ki_speed /= time_ratio * time_ratio;
  c.lookahead_time *= time_ratio;
  c.min_lookahead *= length_ratio;
  c.max_lookahead *= length_ratio;
  c.a_max *= length_ratio / (time_ratio * time_ratio);
  c.sample_rate /= time_ratio;
  c.max_steer_rate /= time_ratio;
  c.min_speed *= length_ratio / time_ratio;
  return c;
}

double speed_command(double v_ref, double v, SpeedLoopState& loop, const DriverConfig& cfg) {
  const double error = v_ref - v;
  const double raw = cfg.kp_speed * error + cfg.ki_speed * loop.integral;
  const double a = std::clamp(raw, -cfg.a_max, cfg.a_max);
  const bool winding_up = (raw > cfg.a_max && error > 0.0) || (raw < -cfg.a_max && error < 0.0);
  if (!winding_up) loop.integral += error * cfg.sample_period();
  return a;
}

double steering_command(const VehicleState& pose, const ManeuverSchedule& lane,
                        const DriverConfig& cfg, const VehicleParams& params,
                        double previous_steer) {
  if (!(pose.vx > cfg.min_speed)) return 0.0;

  const double ld = cfg.lookahead(pose.vx);
  const double dx = ld;
  const double dy = lane.lateral_target(pose.x + ld) - pose.y;
  const double c = std::cos(pose.heading);
  const double s = std::sin(pose.heading);
  const double lateral = -s * dx + c * dy;  // target offset in the vehicle frame
  const double curvature = 2.0 * lateral / (dx * dx + dy * dy);

  double steer = std::atan(params.wheelbase * curvature);
  steer = std::clamp(steer, -cfg.max_steer, cfg.max_steer);
  const double max_delta = cfg.max_steer_rate * cfg.sample_period();
  return std::clamp(steer, previous_steer - max_delta, previous_steer + max_delta);
}

Driver::Driver(DriverConfig cfg, VehicleParams params, ManeuverSchedule lane)
    : cfg_(cfg), params_(std::move(params)), lane_(std::move(lane)) {
  cfg_.validate();
}

void Driver::reset() {
  loop_ = {};
  held_ = {};
  next_sample_ = 0;
}

VehicleInputs Driver::update(double t, const VehicleState& state, double v_ref) {
  const double period = cfg_.sample_period();
  if (t + 1e-9 * period < static_cast<double>(next_sample_) * period) return held_;
  // Skip any sample instants that fell inside a long integration step.
  while (static_cast<double>(next_sample_ + 1) * period <= t + 1e-9 * period) ++next_sample_;
  ++next_sample_;

  // The motor speed loop ignores references inside its dead zone.
  const double k = params_.motor_speed_per_velocity();
  const double v_cmd = apply_dead_zone(k * v_ref, params_) / k;

  held_.accel = speed_command(v_cmd, state.vx, loop_, cfg_);
  held_.steer = steering_command(state, lane_, cfg_, params_, held_.steer);
  return held_;
}

}  // namespace evsim
