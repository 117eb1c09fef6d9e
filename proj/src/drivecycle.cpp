#include "evsim/drivecycle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "evsim/detail/text.hpp"
#include "evsim/error.hpp"

namespace evsim {

double DriveCycle::speed_at(double t) const {
  if (samples.empty()) return 0.0;
  if (t <= samples.front().t) return samples.front().speed;
  if (t >= samples.back().t) return samples.back().speed;
  const auto it = std::upper_bound(samples.begin(), samples.end(), t,
                                   [](double v, const CycleSample& s) { return v < s.t; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double w = (t - lo.t) / (hi.t - lo.t);
  return lo.speed + w * (hi.speed - lo.speed);
}

double DriveCycle::max_speed() const {
  double v = 0.0;
  for (const auto& s : samples) v = std::max(v, s.speed);
  return v;
}

void DriveCycle::validate() const {
  if (samples.empty()) throw ValidationError("drive cycle '" + name + "' is empty");
  if (samples.front().t != 0.0) throw ValidationError("drive cycle must start at t = 0");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(samples[i].t) || !std::isfinite(samples[i].speed)) {
      throw ValidationError("drive cycle sample " + std::to_string(i) + " is not finite");
    }
    if (samples[i].speed < 0.0) {
      throw ValidationError("drive cycle sample " + std::to_string(i) + " has negative speed");
    }
    if (i > 0 && !(samples[i].t > samples[i - 1].t)) {
      throw ValidationError("drive cycle time is not strictly increasing at sample " +
                            std::to_string(i));
    }
  }
}

DriveCycle parse_drive_cycle(std::string_view text, std::string name) {
  DriveCycle cycle;
  cycle.name = std::move(name);
  const auto lines = detail::split_lines(text);
  bool header_seen = false;
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const auto line = detail::trim(lines[n]);
    if (line.empty() || line.front() == '#') continue;
    const std::string where = "line " + std::to_string(n + 1);
    if (!header_seen) {
      if (line != "time_s,speed_mps") {
        throw ValidationError(where + ": expected header 'time_s,speed_mps'");
      }
      header_seen = true;
      continue;
    }
    const auto cells = detail::split(line, ',');
    if (cells.size() != 2) throw ValidationError(where + ": expected 2 columns");
    const auto t = detail::parse_double(cells[0]);
    const auto v = detail::parse_double(cells[1]);
    if (!t || !v) throw ValidationError(where + ": malformed row");
    if (!std::isfinite(*t) || !std::isfinite(*v)) throw ValidationError(where + ": non-finite value");
    if (*v < 0.0) throw ValidationError(where + ": negative speed");
    if (cycle.samples.empty() && *t != 0.0) throw ValidationError(where + ": time must start at 0");
    if (!cycle.samples.empty() && !(*t > cycle.samples.back().t)) {
      throw ValidationError(where + ": time is not strictly increasing");
    }
    cycle.samples.push_back({*t, *v});
  }
  if (!header_seen) throw ValidationError("drive cycle has no header");
  if (cycle.samples.empty()) throw ValidationError("drive cycle has no samples");
  return cycle;
}

std::string write_drive_cycle(const DriveCycle& cycle) {
  std::string out = "time_s,speed_mps\n";
  for (const auto& s : cycle.samples) {
    out += detail::format_full(s.t) + "," + detail::format_full(s.speed) + "\n";
  }
  return out;
}

DriveCycle scale_cycle(const DriveCycle& cycle, const ScaleFactors& factors) {
  if (!(factors.time > 0.0 && factors.velocity > 0.0)) {
    throw ValidationError("cycle scale factors must be positive");
  }
  DriveCycle out;
  out.name = cycle.name;
  out.samples.reserve(cycle.samples.size());
  for (const auto& s : cycle.samples) {
    out.samples.push_back({s.t * factors.time, s.speed * factors.velocity});
  }
  return out;
}

CycleStats cycle_stats(const DriveCycle& cycle) {
  CycleStats st;
  st.duration = cycle.duration();
  st.max_speed = cycle.max_speed();
  for (std::size_t i = 1; i < cycle.samples.size(); ++i) {
    const auto& a = cycle.samples[i - 1];
    const auto& b = cycle.samples[i];
    st.distance += 0.5 * (b.t - a.t) * (a.speed + b.speed);
  }
  st.mean_speed = st.duration > 0.0 ? st.distance / st.duration : 0.0;
  return st;
}

// ---------------------------------------------------------------------------

double ManeuverSchedule::lateral_target(double x) const {
  double y = 0.0;
  for (const auto& e : events) {
    if (x <= e.start) break;
    if (x >= e.start + length) {
      y += e.shift;
    } else {
      const double phase = (x - e.start) / length;
      y += e.shift * 0.5 * (1.0 - std::cos(std::numbers::pi * phase));
    }
  }
  return y;
}

std::string ManeuverSchedule::id() const {
  if (events.empty()) return "straight";
  return "lc_every_" + detail::format_sig(interval) + "m_offset_" + detail::format_sig(offset) +
         "m_len_" + detail::format_sig(length) + "m";
}

std::string ManeuverSchedule::to_json() const {
  std::string out = "{\"interval_m\": " + detail::format_sig(interval) +
                    ", \"offset_m\": " + detail::format_sig(offset) +
                    ", \"length_m\": " + detail::format_sig(length) + ", \"events\": [";
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (i) out += ", ";
    out += "{\"start_m\": " + detail::format_sig(events[i].start) +
           ", \"shift_m\": " + detail::format_sig(events[i].shift) + "}";
  }
  return out + "]}";
}

ManeuverSchedule build_schedule(double track_length, double interval, double offset,
                                double lc_length) {
  if (!(lc_length > 0.0)) throw ValidationError("lane-change length must be positive");
  if (!(interval > lc_length)) {
    throw ValidationError("lane-change interval must exceed the lane-change length");
  }
  if (!std::isfinite(track_length) || !std::isfinite(offset)) {
    throw ValidationError("schedule inputs must be finite");
  }
  ManeuverSchedule s;
  s.interval = interval;
  s.offset = offset;
  s.length = lc_length;
  const double last_start = track_length - lc_length;
  double sign = 1.0;
  for (int k = 1;; ++k) {
    const double start = k * interval;
    if (start > last_start + 1e-9 * interval) break;
    s.events.push_back({start, sign * offset});
    sign = -sign;
  }
  return s;
}

ManeuverSchedule scale_schedule(const ManeuverSchedule& schedule, double length_ratio) {
  if (!(length_ratio > 0.0)) throw ValidationError("schedule length ratio must be positive");
  ManeuverSchedule s = schedule;
  s.interval *= length_ratio;
  s.offset *= length_ratio;
  s.length *= length_ratio;
  for (auto& e : s.events) {
    e.start *= length_ratio;
    e.shift *= length_ratio;
  }
  return s;
}

}  // namespace evsim
