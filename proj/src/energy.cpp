#include "evsim/energy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "evsim/detail/text.hpp"
#include "evsim/error.hpp"

namespace evsim {

using detail::format_full;
using detail::format_sig;

std::string Trajectory::to_csv() const {
  std::string out = "t,x,y,psi,vx,vy,r,a,delta,tau,omega,Pb,Eb\n";
  out.reserve(out.size() + samples.size() * 13 * 24);
  for (const auto& s : samples) {
    const double row[] = {s.t,           s.state.x,      s.state.y,       s.state.heading,
                          s.state.vx,    s.state.vy,     s.state.yaw_rate, s.inputs.accel,
                          s.inputs.steer, s.torque,      s.motor_speed,   s.battery_power,
                          s.energy};
    for (std::size_t i = 0; i < std::size(row); ++i) {
      if (i) out += ',';
      out += format_full(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::vector<double> integrate_energy(std::span<const double> power, double dt) {
  if (!(dt > 0.0)) throw ValidationError("energy integration step must be positive");
  std::vector<double> energy(power.size(), 0.0);
  for (std::size_t i = 0; i < power.size(); ++i) {
    if (!std::isfinite(power[i])) {
      throw NumericError("non-finite power sample at index " + std::to_string(i));
    }
    if (i > 0) energy[i] = energy[i - 1] + 0.5 * dt * (power[i - 1] + power[i]);
  }
  return energy;
}

EnergyReport energy_report(const Trajectory& traj) {
  EnergyReport r;
  const auto& s = traj.samples;
  if (s.empty()) return r;
  double distance = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    distance += 0.5 * (s[i].t - s[i - 1].t) * (s[i - 1].state.vx + s[i].state.vx);
  }
  for (const auto& sample : s) r.peak_power_w = std::max(r.peak_power_w, sample.battery_power);
  r.energy_wh = s.back().energy / 3600.0;
  r.distance_m = std::max(distance, 0.0);
  if (r.distance_m > 0.0) r.wh_per_m = r.energy_wh / r.distance_m;
  return r;
}

double compare_runs(const EnergyReport& straight, const EnergyReport& with_lane_changes) {
  if (!straight.wh_per_m || !with_lane_changes.wh_per_m) {
    throw ValidationError("compare_runs needs both reports to have a defined Wh/m");
  }
  if (*straight.wh_per_m == 0.0) throw ValidationError("baseline Wh/m is zero");
  return 100.0 * (*with_lane_changes.wh_per_m - *straight.wh_per_m) / *straight.wh_per_m;
}

std::string EnergyReport::to_json() const {
  std::string out = "{\"energy_wh\": " + format_sig(energy_wh) +
                    ", \"distance_m\": " + format_sig(distance_m) + ", \"wh_per_m\": " +
                    (wh_per_m ? format_sig(*wh_per_m) : std::string("null")) +
                    ", \"peak_power_w\": " + format_sig(peak_power_w);
  if (delta_percent) out += ", \"delta_percent\": " + format_sig(*delta_percent);
  out += "}";
  return out;
}

std::string EnergyReport::csv_header() {
  return "label,energy_wh,distance_m,wh_per_m,peak_power_w,delta_percent";
}

std::string EnergyReport::to_csv_row(const std::string& label) const {
  return label + "," + format_sig(energy_wh) + "," + format_sig(distance_m) + "," +
         (wh_per_m ? format_sig(*wh_per_m) : std::string()) + "," + format_sig(peak_power_w) +
         "," + (delta_percent ? format_sig(*delta_percent) : std::string());
}

}  // namespace evsim
