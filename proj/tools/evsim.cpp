// evsim: command-line front end for the simulator, the similitude tools and
// the calibration helpers.
//
// Exit codes: 0 success, 1 invalid input, 2 numeric failure.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <future>
#include <iostream>
#include <optional>
#include <string>

#include "evsim/calibration.hpp"
#include "evsim/config.hpp"
#include "evsim/detail/text.hpp"
#include "evsim/drivecycle.hpp"
#include "evsim/error.hpp"
#include "evsim/reporting.hpp"
#include "evsim/simulation.hpp"
#include "evsim/similitude.hpp"

namespace {

using evsim::detail::format_sig;

constexpr int kExitValidation = 1;
constexpr int kExitNumeric = 2;

struct SimulateArgs {
  std::string config;
  std::string cycle;
  std::optional<double> lane_interval;
  bool no_lane_changes = false;
  double dt = 1e-3;
  std::string regen = "off";
  std::string out;
  bool paired = false;
};

evsim::DriveCycle load_cycle(const std::string& path) {
  return evsim::parse_drive_cycle(evsim::read_text_file(path),
                                  std::filesystem::path(path).stem().string());
}

evsim::RegenPolicy parse_regen(const std::string& value) {
  if (value == "on") return {true};
  if (value == "off") return {false};
  throw evsim::ValidationError("--regen must be 'on' or 'off'");
}

int run_simulate(const SimulateArgs& args) {
  if (args.lane_interval && args.no_lane_changes) {
    throw evsim::ValidationError("--lane-changes and --no-lane-changes are exclusive");
  }
  if (args.lane_interval && !(*args.lane_interval > 0.0)) {
    throw evsim::ValidationError("--lane-changes interval must be > 0");
  }
  if (args.paired && !args.out.empty()) {
    throw evsim::ValidationError("--out cannot be combined with --paired");
  }
  const auto cfg = evsim::load_vehicle_config(args.config);
  const auto cycle = load_cycle(args.cycle);
  const auto regen = parse_regen(args.regen);

  if (args.paired) {
    const double interval = args.lane_interval.value_or(20.0);
    auto straight = std::async(std::launch::async, [&] {
      return evsim::energy_report(evsim::make_scenario(cfg, cycle, 0.0, args.dt, regen).run());
    });
    auto lane = evsim::energy_report(
        evsim::make_scenario(cfg, cycle, interval, args.dt, regen).run());
    const auto base = straight.get();
    lane.delta_percent = evsim::compare_runs(base, lane);
    std::cout << "{\"straight\": " << base.to_json() << ", \"lane_change\": " << lane.to_json()
              << ", \"increase_percent\": " << format_sig(*lane.delta_percent) << "}\n";
    return 0;
  }

  const double interval = args.no_lane_changes ? 0.0 : args.lane_interval.value_or(0.0);
  const auto traj = evsim::make_scenario(cfg, cycle, interval, args.dt, regen).run();
  if (!args.out.empty()) evsim::write_text_file_atomic(args.out, traj.to_csv());
  std::cout << evsim::energy_report(traj).to_json() << "\n";
  return 0;
}

int run_pi(const std::string& path_a, const std::string& path_b, double tolerance, bool csv) {
  const auto a = evsim::load_vehicle_config(path_a);
  const auto b = evsim::load_vehicle_config(path_b);
  const auto rows = evsim::match_report(a.params, a.efficiency.mean_efficiency(), b.params,
                                        b.efficiency.mean_efficiency(), tolerance);
  if (csv) {
    std::cout << evsim::match_report_csv(rows);
    return 0;
  }
  std::printf("%-6s %-14s %-14s %-10s %s\n", "group", a.params.name.c_str(),
              b.params.name.c_str(), "ratio", "status");
  for (const auto& r : rows) {
    std::printf("%-6s %-14s %-14s %-10s %s%s%s\n", r.name.c_str(), format_sig(r.value_a).c_str(),
                format_sig(r.value_b).c_str(), format_sig(r.ratio).c_str(),
                r.pass ? "pass" : "MISMATCH", r.note.empty() ? "" : "  ", r.note.c_str());
  }
  return 0;
}

int run_groups(const std::string& quantity_file) {
  std::vector<evsim::Quantity> quantities;
  std::vector<std::string> repeating;
  if (quantity_file.empty()) {
    evsim::VehicleParams unit;
    quantities = evsim::vehicle_quantities(unit, 1.0);
    repeating = evsim::vehicle_repeating_quantities();
  } else {
    quantities = evsim::parse_quantities(evsim::read_text_file(quantity_file));
  }
  const auto set = evsim::compute_pi_groups(quantities, repeating);
  const int rank = evsim::matrix_rank(evsim::dimension_matrix(quantities));
  std::cout << quantities.size() << " quantities, rank " << rank << ", " << set.groups.size()
            << " groups\n";
  for (const auto& g : set.groups) std::cout << g.name << " = " << set.expression(g) << "\n";
  return 0;
}

int run_scale_cycle(const std::string& cycle_path, const std::string& path_a,
                    const std::string& path_b, const std::string& out) {
  const auto cycle = load_cycle(cycle_path);
  const auto a = evsim::load_vehicle_config(path_a);
  const auto b = evsim::load_vehicle_config(path_b);
  const auto factors = evsim::scale_factors(a.params, b.params);
  const auto scaled = evsim::scale_cycle(cycle, factors);
  evsim::write_text_file_atomic(out, evsim::write_drive_cycle(scaled));
  std::cout << "factors " << factors.to_json() << "\n";
  std::cout << "distance_ratio " << format_sig(factors.distance) << " (1/"
            << format_sig(1.0 / factors.distance) << ")\n";
  return 0;
}

int run_suite(const std::string& data_dir, const std::string& out_dir, double dt) {
  evsim::SuiteOptions opts;
  opts.dt = dt;
  const auto result = evsim::run_experiment_suite(evsim::bundled_suite(data_dir), opts);
  evsim::write_suite_tables(result, out_dir);
  std::cout << "sanity " << result.sanity.label << ": direct " << format_sig(result.sanity.direct_wh_per_m)
            << " Wh/m, via similar vehicle " << format_sig(result.sanity.predicted_wh_per_m)
            << " Wh/m\n";
  for (const auto& r : result.rows) {
    std::cout << r.label << ": " << format_sig(r.straight.wh_per_m.value_or(0.0)) << " -> "
              << format_sig(r.lane_change.wh_per_m.value_or(0.0)) << " Wh/m ("
              << format_sig(r.increase_percent) << "%)";
    if (r.prediction_error_percent) {
      std::cout << ", predicted from " << r.reference_label << " "
                << format_sig(*r.predicted_wh_per_m) << " Wh/m ("
                << format_sig(*r.prediction_error_percent) << "%)";
    }
    std::cout << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bicycle-model EV energy simulator with similitude scaling"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run one closed-loop drive cycle");
  simulate->add_option("config", sim.config, "Vehicle config file")->required();
  simulate->add_option("cycle", sim.cycle, "Drive cycle CSV")->required();
  simulate->add_option("--lane-changes", sim.lane_interval, "Lane change every N metres");
  simulate->add_flag("--no-lane-changes", sim.no_lane_changes, "Straight run");
  simulate->add_option("--dt", sim.dt, "Integration step, s")->capture_default_str();
  simulate->add_option("--regen", sim.regen, "Regenerative braking: on|off")->capture_default_str();
  simulate->add_option("--out", sim.out, "Trajectory CSV output path");
  simulate->add_flag("--paired", sim.paired, "Run with and without lane changes and compare");

  std::string pi_a, pi_b;
  double pi_tol = 0.10;
  bool pi_csv = false;
  auto* pi = app.add_subcommand("pi", "Compare the constant pi groups of two vehicles");
  pi->add_option("config_a", pi_a)->required();
  pi->add_option("config_b", pi_b)->required();
  pi->add_option("--tolerance", pi_tol, "Allowed |ratio - 1|")->capture_default_str();
  pi->add_flag("--csv", pi_csv, "CSV output");

  std::string quantity_file;
  auto* groups = app.add_subcommand("groups", "Buckingham pi groups of a quantity set");
  groups->add_option("quantities", quantity_file,
                     "Quantity file (default: the vehicle model's 16 quantities)");

  std::string sc_cycle, sc_a, sc_b, sc_out;
  auto* scale = app.add_subcommand("scale-cycle", "Scale a drive cycle from vehicle B onto A");
  scale->add_option("cycle", sc_cycle)->required();
  scale->add_option("config_a", sc_a, "Target vehicle")->required();
  scale->add_option("config_b", sc_b, "Vehicle the cycle belongs to")->required();
  scale->add_option("--out", sc_out, "Scaled cycle CSV")->required();

  auto* calibrate = app.add_subcommand("calibrate", "Parameter estimates from bench tests");
  calibrate->require_subcommand(1);
  double bi_m = 0, bi_d = 0, bi_l = 0, bi_t = 0, bi_g = evsim::kStandardGravity;
  auto* inertia = calibrate->add_subcommand("inertia", "Yaw inertia from a bifilar pendulum");
  inertia->add_option("mass", bi_m, "kg")->required();
  inertia->add_option("spacing", bi_d, "Wire spacing, m")->required();
  inertia->add_option("length", bi_l, "Wire length, m")->required();
  inertia->add_option("period", bi_t, "Oscillation period, s")->required();
  inertia->add_option("--g", bi_g, "Gravity, m/s^2")->capture_default_str();
  double dr_w = 0, dr_tau = 0, dr_ts = 0;
  auto* drivetrain = calibrate->add_subcommand("drivetrain", "Shaft damping and inertia");
  drivetrain->add_option("speed", dr_w, "Steady motor speed, rad/s")->required();
  drivetrain->add_option("torque", dr_tau, "Steady torque, N m")->required();
  drivetrain->add_option("time_constant", dr_ts, "s")->required();
  double cg_l = 0, cg_f = 0, cg_r = 0;
  auto* cog = calibrate->add_subcommand("cog", "CoG position from axle loads");
  cog->add_option("wheelbase", cg_l, "m")->required();
  cog->add_option("front_load", cg_f, "N")->required();
  cog->add_option("rear_load", cg_r, "N")->required();

  std::string suite_data = EVSIM_DEFAULT_DATA_DIR, suite_out = ".";
  double suite_dt = 1e-3;
  auto* suite = app.add_subcommand("suite", "Run the bundled lane-change experiment tables");
  suite->add_option("--data", suite_data, "Data directory")->capture_default_str();
  suite->add_option("--out", suite_out, "Output directory")->capture_default_str();
  suite->add_option("--dt", suite_dt, "Integration step, s")->capture_default_str();

  std::string map_config, map_out, map_target;
  auto* export_map = app.add_subcommand("export-map", "Write a config's efficiency map as CSV");
  export_map->add_option("config", map_config)->required();
  export_map->add_option("--rescale-to", map_target,
                         "Carry the map onto a similar motor in this vehicle config");
  export_map->add_option("--out", map_out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*simulate) return run_simulate(sim);
    if (*pi) return run_pi(pi_a, pi_b, pi_tol, pi_csv);
    if (*groups) return run_groups(quantity_file);
    if (*scale) return run_scale_cycle(sc_cycle, sc_a, sc_b, sc_out);
    if (*inertia) {
      std::cout << "Iz " << format_sig(evsim::bifilar_inertia(bi_m, bi_d, bi_l, bi_t, bi_g))
                << " kg m^2\n";
      return 0;
    }
    if (*drivetrain) {
      const auto est = evsim::estimate_damping_inertia(dr_w, dr_tau, dr_ts);
      std::cout << "B " << format_sig(est.damping) << " N m s/rad\n"
                << "J " << format_sig(est.inertia) << " kg m^2\n";
      return 0;
    }
    if (*cog) {
      const auto d = evsim::cog_from_axle_loads(cg_l, cg_f, cg_r);
      std::cout << "lF " << format_sig(d.cg_to_front) << " m\n"
                << "lR " << format_sig(d.cg_to_rear) << " m\n";
      return 0;
    }
    if (*suite) return run_suite(suite_data, suite_out, suite_dt);
    if (*export_map) {
      const auto source = evsim::load_vehicle_config(map_config);
      auto map = source.efficiency;
      if (!map_target.empty()) {
        const auto target = evsim::load_vehicle_config(map_target);
        const auto r = evsim::base_ratios(target.params, source.params);
        map = map.rescaled(1.0 / r.time, r.mass * r.length * r.length / (r.time * r.time));
      }
      const auto csv = map.to_csv();
      if (map_out.empty()) {
        std::cout << csv;
      } else {
        evsim::write_text_file_atomic(map_out, csv);
      }
      return 0;
    }
  } catch (const evsim::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const evsim::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  }
  return 0;
}
