#include "evsim/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "evsim/detail/text.hpp"
#include "evsim/error.hpp"

namespace evsim {

namespace {

using Setter = std::function<void(VehicleConfig&, double)>;

const std::map<std::string, Setter, std::less<>>& vehicle_keys() {
  static const std::map<std::string, Setter, std::less<>> keys = {
      {"m", [](VehicleConfig& c, double v) { c.params.mass = v; }},
      {"Iz", [](VehicleConfig& c, double v) { c.params.yaw_inertia = v; }},
      {"lF", [](VehicleConfig& c, double v) { c.params.cg_to_front = v; }},
      {"lR", [](VehicleConfig& c, double v) { c.params.cg_to_rear = v; }},
      {"l", [](VehicleConfig& c, double v) { c.params.wheelbase = v; }},
      {"CF", [](VehicleConfig& c, double v) { c.params.cornering_stiffness_front = v; }},
      {"CR", [](VehicleConfig& c, double v) { c.params.cornering_stiffness_rear = v; }},
      {"rw", [](VehicleConfig& c, double v) { c.params.wheel_radius = v; }},
      {"Nd", [](VehicleConfig& c, double v) { c.params.final_drive_ratio = v; }},
      {"eta_i", [](VehicleConfig& c, double v) { c.params.diff_efficiency = v; }},
      {"J", [](VehicleConfig& c, double v) { c.params.shaft_inertia = v; }},
      {"B", [](VehicleConfig& c, double v) { c.params.shaft_damping = v; }},
      {"Np", [](VehicleConfig& c, double v) { c.params.pole_count = v; }},
      {"lambda", [](VehicleConfig& c, double v) { c.params.flux_linkage = v; }},
      {"dead_zone_speed", [](VehicleConfig& c, double v) { c.params.dead_zone_speed = v; }},
      {"tau_rated", [](VehicleConfig& c, double v) { c.params.rated_torque = v; }},
      {"P_rated", [](VehicleConfig& c, double v) { c.params.rated_power = v; }},
  };
  return keys;
}

const std::map<std::string, Setter, std::less<>>& optional_keys() {
  static const std::map<std::string, Setter, std::less<>> keys = {
      {"kp_speed", [](VehicleConfig& c, double v) { c.driver.kp_speed = v; }},
      {"ki_speed", [](VehicleConfig& c, double v) { c.driver.ki_speed = v; }},
      {"lookahead_time", [](VehicleConfig& c, double v) { c.driver.lookahead_time = v; }},
      {"min_lookahead", [](VehicleConfig& c, double v) { c.driver.min_lookahead = v; }},
      {"max_lookahead", [](VehicleConfig& c, double v) { c.driver.max_lookahead = v; }},
      {"a_max", [](VehicleConfig& c, double v) { c.driver.a_max = v; }},
      {"sample_rate", [](VehicleConfig& c, double v) { c.driver.sample_rate = v; }},
      {"max_steer", [](VehicleConfig& c, double v) { c.driver.max_steer = v; }},
      {"max_steer_rate", [](VehicleConfig& c, double v) { c.driver.max_steer_rate = v; }},
      {"vx_eps",
       [](VehicleConfig& c, double v) {
         c.min_speed = v;
         c.driver.min_speed = v;
       }},
      {"lane_offset", [](VehicleConfig& c, double v) { c.lane_offset = v; }},
      {"lane_change_length", [](VehicleConfig& c, double v) { c.lane_change_length = v; }},
  };
  return keys;
}

EfficiencyMap resolve_map(const std::string& source, const VehicleParams& params,
                          const std::filesystem::path& base_dir) {
  if (source == "synthetic_ev") return synthetic_efficiency_map(params, kFullSizeMapShape);
  if (source == "synthetic_rcc") return synthetic_efficiency_map(params, kHobbyMotorMapShape);
  const std::filesystem::path path = base_dir / source;
  return EfficiencyMap::parse_csv(read_text_file(path)).with_rated_envelope(params);
}

}  // namespace

VehicleConfig parse_vehicle_config(std::string_view text, const std::filesystem::path& base_dir) {
  VehicleConfig cfg;
  std::map<std::string, bool, std::less<>> seen;
  std::string map_source = "synthetic_ev";

  const auto lines = detail::split_lines(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    auto line = lines[n];
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;

    const std::string where = "config line " + std::to_string(n + 1);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ValidationError(where + ": expected 'key = value'");
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string value(detail::trim(line.substr(eq + 1)));
    if (key.empty()) throw ValidationError(where + ": empty key");
    if (seen.count(key)) throw ValidationError(where + ": duplicate key '" + key + "'");
    seen[key] = true;

    if (key == "name") {
      cfg.params.name = value;
      continue;
    }
    if (key == "efficiency_map") {
      map_source = value;
      continue;
    }
    const auto vit = vehicle_keys().find(key);
    const auto oit = optional_keys().find(key);
    if (vit == vehicle_keys().end() && oit == optional_keys().end()) {
      throw ValidationError(where + ": unknown key '" + key + "'");
    }
    const auto number = detail::parse_double(value);
    if (!number) throw ValidationError(where + ": '" + key + "' is not a number");
    (vit != vehicle_keys().end() ? vit->second : oit->second)(cfg, *number);
  }

  for (const auto& [key, setter] : vehicle_keys()) {
    if (!seen.count(key)) throw ValidationError("config is missing required field '" + key + "'");
  }
  cfg.params.validate();
  cfg.driver.validate();
  if (!(cfg.lane_offset >= 0.0 && cfg.lane_change_length > 0.0)) {
    throw ValidationError("lane_offset must be >= 0 and lane_change_length > 0");
  }
  cfg.efficiency = resolve_map(map_source, cfg.params, base_dir);
  cfg.efficiency_source = map_source;
  return cfg;
}

VehicleConfig load_vehicle_config(const std::filesystem::path& path) {
  try {
    VehicleConfig cfg = parse_vehicle_config(read_text_file(path), path.parent_path());
    if (cfg.params.name.empty()) cfg.params.name = path.stem().string();
    return cfg;
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + path.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw ValidationError("failed writing " + path.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw ValidationError("cannot move output into place at " + path.string() + ": " +
                          ec.message());
  }
}

}  // namespace evsim
