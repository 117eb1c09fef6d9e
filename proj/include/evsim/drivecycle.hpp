#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "evsim/similitude.hpp"

namespace evsim {

struct CycleSample {
  double t = 0.0;      // s
  double speed = 0.0;  // m/s
};

/// Time-indexed reference speed. Time starts at 0 and is strictly
/// increasing; speeds are non-negative.
struct DriveCycle {
  std::string name;
  std::vector<CycleSample> samples;

  [[nodiscard]] double duration() const { return samples.empty() ? 0.0 : samples.back().t; }
  /// Linear interpolation, held constant outside the sampled span.
  [[nodiscard]] double speed_at(double t) const;
  [[nodiscard]] double max_speed() const;
  /// Throws ValidationError on any invariant violation.
  void validate() const;
};

/// CSV with header "time_s,speed_mps". Errors carry the line number.
DriveCycle parse_drive_cycle(std::string_view text, std::string name = "cycle");
std::string write_drive_cycle(const DriveCycle& cycle);

/// t' = k_t t, v' = k_v v.
DriveCycle scale_cycle(const DriveCycle& cycle, const ScaleFactors& factors);

struct CycleStats {
  double duration = 0.0;
  double distance = 0.0;
  double max_speed = 0.0;
  double mean_speed = 0.0;
};

CycleStats cycle_stats(const DriveCycle& cycle);

// ---------------------------------------------------------------------------

struct LaneChangeEvent {
  double start = 0.0;  // longitudinal position where the change begins, m
  double shift = 0.0;  // signed lateral displacement, m
};

/// Periodic lane changes along a straight road. Each change moves the lane
/// target by `offset` along a half-cosine over `length` metres; consecutive
/// changes alternate direction, so the target swings between 0 and offset.
struct ManeuverSchedule {
  double interval = 0.0;
  double offset = 0.0;
  double length = 0.0;
  std::vector<LaneChangeEvent> events;

  [[nodiscard]] bool empty() const { return events.empty(); }
  /// Lateral lane-centre target at longitudinal position `x`.
  [[nodiscard]] double lateral_target(double x) const;
  /// Compact identifier used in run metadata.
  [[nodiscard]] std::string id() const;
  [[nodiscard]] std::string to_json() const;
};

/// Events at interval, 2 interval, ... while the change still completes
/// within the track (start <= track_length - lc_length).
ManeuverSchedule build_schedule(double track_length, double interval, double offset,
                                double lc_length);

/// Schedule with the same geometry scaled to another vehicle size.
ManeuverSchedule scale_schedule(const ManeuverSchedule& schedule, double length_ratio);

}  // namespace evsim
