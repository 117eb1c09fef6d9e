#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "evsim/driver.hpp"
#include "evsim/params.hpp"
#include "evsim/powertrain.hpp"

namespace evsim {

/// Everything one vehicle config file describes.
struct VehicleConfig {
  VehicleParams params;
  EfficiencyMap efficiency;
  std::string efficiency_source;
  DriverConfig driver;
  double min_speed = kDefaultMinSpeed;
  double lane_offset = 0.5;         // m
  double lane_change_length = 8.0;  // m
};

/// Flat "key = value" text, '#' starts a comment. Vehicle keys are named
/// after the physical symbols (m, Iz, lF, lR, l, CF, CR, rw, Nd, eta_i, J,
/// B, Np, lambda, dead_zone_speed, tau_rated, P_rated) and are all
/// required. Optional keys: name, efficiency_map (synthetic_ev,
/// synthetic_rcc, or a CSV path relative to `base_dir`), the driver gains
/// (kp_speed, ki_speed, lookahead_time, min_lookahead, max_lookahead,
/// a_max, sample_rate, max_steer, max_steer_rate), vx_eps, lane_offset and
/// lane_change_length.
///
/// Throws ValidationError naming the offending key.
VehicleConfig parse_vehicle_config(std::string_view text,
                                   const std::filesystem::path& base_dir = {});

VehicleConfig load_vehicle_config(const std::filesystem::path& path);

/// Reads a whole file; ValidationError when it cannot be opened.
std::string read_text_file(const std::filesystem::path& path);

/// Writes through a temporary sibling and renames it into place, so readers
/// never observe a partial file.
void write_text_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace evsim
