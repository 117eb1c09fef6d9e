#include "evsim/powertrain.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

#include "evsim/error.hpp"
#include "evsim/detail/text.hpp"

namespace evsim {

MotorOperatingPoint wheel_to_motor(double force, double vx, const VehicleParams& params) {
  return {params.wheel_radius * force / (params.diff_efficiency * params.final_drive_ratio),
          params.final_drive_ratio * vx / params.wheel_radius};
}

WheelOperatingPoint motor_to_wheel(const MotorOperatingPoint& motor, const VehicleParams& params) {
  return {motor.torque * params.diff_efficiency * params.final_drive_ratio / params.wheel_radius,
          motor.speed * params.wheel_radius / params.final_drive_ratio};
}

double shaft_torque(double omega, double domega, double load_torque, const VehicleParams& params) {
  return params.shaft_inertia * domega + params.shaft_damping * omega + load_torque;
}

double motor_input_power(const MotorElectricalState& e) {
  return 1.5 * (e.vq * e.iq + e.vd * e.id);
}

double torque_from_iq(double iq, const VehicleParams& params) {
  return 0.5 * params.pole_count * 1.5 * params.flux_linkage * iq;
}

double iq_from_torque(double torque, const VehicleParams& params) {
  const double k = 0.5 * params.pole_count * 1.5 * params.flux_linkage;
  if (!(k > 0.0)) throw ValidationError("torque constant requires Np > 0 and lambda > 0");
  return torque / k;
}

// ---------------------------------------------------------------------------
// EfficiencyMap

namespace {

// Index of the cell [i, i+1] containing x, with x already clamped to the grid.
std::size_t cell_index(const std::vector<double>& grid, double x) {
  if (grid.size() < 2) return 0;
  const auto it = std::upper_bound(grid.begin(), grid.end(), x);
  const auto i = static_cast<std::size_t>(std::distance(grid.begin(), it));
  return std::min(i == 0 ? 0 : i - 1, grid.size() - 2);
}

double interp_weight(const std::vector<double>& grid, std::size_t i, double x) {
  if (grid.size() < 2) return 0.0;
  return (x - grid[i]) / (grid[i + 1] - grid[i]);
}

void require_ascending(const std::vector<double>& grid, const char* axis) {
  if (grid.empty()) throw ValidationError(std::string("efficiency map has an empty ") + axis);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) {
      throw ValidationError(std::string("efficiency map ") + axis + " has a non-finite value");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw ValidationError(std::string("efficiency map ") + axis + " must be strictly ascending");
    }
  }
}

}  // namespace

EfficiencyMap::EfficiencyMap(std::vector<double> speed_grid, std::vector<double> torque_grid,
                             std::vector<double> eta, std::vector<double> envelope)
    : speed_(std::move(speed_grid)),
      torque_(std::move(torque_grid)),
      eta_(std::move(eta)),
      envelope_(std::move(envelope)) {
  validate();
}

void EfficiencyMap::validate() const {
  require_ascending(speed_, "speed grid");
  require_ascending(torque_, "torque grid");
  if (eta_.size() != speed_.size() * torque_.size()) {
    throw ValidationError("efficiency map body does not match its grid dimensions");
  }
  for (double e : eta_) {
    if (!(e > 0.0 && e <= 1.0)) throw ValidationError("efficiency values must lie in (0, 1]");
  }
  if (!envelope_.empty()) {
    if (envelope_.size() != speed_.size()) {
      throw ValidationError("torque envelope must have one entry per speed grid value");
    }
    for (double t : envelope_) {
      if (!(t >= 0.0)) throw ValidationError("torque envelope must be non-negative");
    }
  }
}

EfficiencyMap EfficiencyMap::constant(double eta) {
  return EfficiencyMap({0.0}, {0.0}, {eta});
}

EfficiencyMap EfficiencyMap::parse_csv(std::string_view text) {
  const auto lines = detail::split_lines(text);
  std::vector<std::vector<double>> rows;
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const auto trimmed = detail::trim(lines[n]);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto cells = detail::split(trimmed, ',');
    std::vector<double> row;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (rows.empty() && c == 0) {
        row.push_back(0.0);  // corner cell, may hold a label
        continue;
      }
      const auto v = detail::parse_double(cells[c]);
      if (!v) {
        throw ValidationError("efficiency map line " + std::to_string(n + 1) +
                              ": cannot parse '" + std::string(detail::trim(cells[c])) + "'");
      }
      row.push_back(*v);
    }
    rows.push_back(std::move(row));
  }
  if (rows.size() < 2) throw ValidationError("efficiency map is empty");

  std::vector<double> speed(rows.front().begin() + 1, rows.front().end());
  std::vector<double> torque;
  std::vector<double> eta;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != speed.size() + 1) {
      throw ValidationError("efficiency map row " + std::to_string(r + 1) + " has " +
                            std::to_string(rows[r].size()) + " cells, expected " +
                            std::to_string(speed.size() + 1));
    }
    torque.push_back(rows[r].front());
    eta.insert(eta.end(), rows[r].begin() + 1, rows[r].end());
  }
  return EfficiencyMap(std::move(speed), std::move(torque), std::move(eta));
}

std::string EfficiencyMap::to_csv() const {
  std::string out = "torque_nm\\speed_radps";
  for (double s : speed_) out += "," + detail::format_full(s);
  out += "\n";
  for (std::size_t i = 0; i < torque_.size(); ++i) {
    out += detail::format_full(torque_[i]);
    for (std::size_t j = 0; j < speed_.size(); ++j) out += "," + detail::format_full(at(i, j));
    out += "\n";
  }
  return out;
}

double EfficiencyMap::lookup(double torque, double omega) const {
  if (empty()) throw ValidationError("efficiency lookup on an empty map");
  const double s = std::clamp(std::abs(omega), speed_.front(), speed_.back());
  const double q = std::clamp(std::abs(torque), torque_.front(), torque_.back());
  const std::size_t j = cell_index(speed_, s);
  const std::size_t i = cell_index(torque_, q);
  const double ws = interp_weight(speed_, j, s);
  const double wq = interp_weight(torque_, i, q);
  const std::size_t j1 = speed_.size() > 1 ? j + 1 : j;
  const std::size_t i1 = torque_.size() > 1 ? i + 1 : i;
  const double low = (1.0 - ws) * at(i, j) + ws * at(i, j1);
  const double high = (1.0 - ws) * at(i1, j) + ws * at(i1, j1);
  return (1.0 - wq) * low + wq * high;
}

double EfficiencyMap::torque_limit(double omega) const {
  if (envelope_.empty()) return std::numeric_limits<double>::infinity();
  const double s = std::clamp(std::abs(omega), speed_.front(), speed_.back());
  const std::size_t j = cell_index(speed_, s);
  if (speed_.size() < 2) return envelope_.front();
  const double w = interp_weight(speed_, j, s);
  return (1.0 - w) * envelope_[j] + w * envelope_[j + 1];
}

EfficiencyMap EfficiencyMap::with_rated_envelope(const VehicleParams& params) const {
  std::vector<double> env;
  env.reserve(speed_.size());
  for (double s : speed_) {
    const double power_limited =
        s > 0.0 ? params.rated_power / s : std::numeric_limits<double>::infinity();
    env.push_back(std::min(params.rated_torque, power_limited));
  }
  return EfficiencyMap(speed_, torque_, eta_, std::move(env));
}

EfficiencyMap EfficiencyMap::rescaled(double speed_factor, double torque_factor) const {
  if (!(speed_factor > 0.0 && torque_factor > 0.0)) {
    throw ValidationError("efficiency map scale factors must be positive");
  }
  auto speed = speed_;
  auto torque = torque_;
  auto env = envelope_;
  for (double& s : speed) s *= speed_factor;
  for (double& t : torque) t *= torque_factor;
  for (double& t : env) t *= torque_factor;
  return EfficiencyMap(std::move(speed), std::move(torque), eta_, std::move(env));
}

double EfficiencyMap::mean_efficiency() const {
  if (empty()) throw ValidationError("mean efficiency of an empty map");
  return std::accumulate(eta_.begin(), eta_.end(), 0.0) / static_cast<double>(eta_.size());
}

double efficiency_lookup(const EfficiencyMap& map, double torque, double omega) {
  return map.lookup(torque, omega);
}

EfficiencyMap synthetic_efficiency_map(const VehicleParams& params,
                                       const SyntheticMapShape& shape) {
  params.validate();
  constexpr int kSpeedPoints = 31;
  constexpr int kTorquePoints = 21;
  const double base_speed = params.rated_power / params.rated_torque;

  std::vector<double> speed(kSpeedPoints);
  std::vector<double> torque(kTorquePoints);
  for (int j = 0; j < kSpeedPoints; ++j) speed[j] = 3.0 * base_speed * j / (kSpeedPoints - 1);
  for (int i = 0; i < kTorquePoints; ++i) torque[i] = params.rated_torque * i / (kTorquePoints - 1);

  std::vector<double> eta;
  eta.reserve(kSpeedPoints * kTorquePoints);
  const double span = shape.eta_max - shape.eta_min;
  for (int i = 0; i < kTorquePoints; ++i) {
    const double tn = torque[i] / params.rated_torque;
    // Copper losses pull efficiency down again near full torque.
    const double torque_shape = (1.0 - std::exp(-tn / shape.torque_knee)) * (1.0 - 0.15 * tn * tn);
    for (int j = 0; j < kSpeedPoints; ++j) {
      const double sn = speed[j] / base_speed;
      const double speed_shape = 1.0 - std::exp(-sn / shape.speed_knee);
      eta.push_back(shape.eta_min + span * torque_shape * speed_shape);
    }
  }
  return EfficiencyMap(std::move(speed), std::move(torque), std::move(eta))
      .with_rated_envelope(params);
}

double battery_power(double torque, double omega, double eta, RegenPolicy regen) {
  if (!(eta > 0.0)) throw ValidationError("efficiency must be positive");
  const double mechanical = torque * omega;
  if (mechanical >= 0.0) return mechanical / eta;
  return regen.enabled ? eta * mechanical : 0.0;
}

double apply_dead_zone(double omega_cmd, const VehicleParams& params) {
  return std::abs(omega_cmd) < params.dead_zone_speed ? 0.0 : omega_cmd;
}

}  // namespace evsim
