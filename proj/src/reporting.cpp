#include "evsim/reporting.hpp"

#include <cmath>
#include <filesystem>
#include <future>
#include <sstream>

#include "evsim/detail/text.hpp"
#include "evsim/error.hpp"

namespace evsim {

using detail::format_full;

Scenario make_scenario(const VehicleConfig& config, const DriveCycle& cycle, double interval,
                       double dt, const RegenPolicy& regen) {
  Scenario s;
  s.params = config.params;
  s.efficiency = config.efficiency;
  s.driver = config.driver;
  s.cycle = cycle;
  s.options.dt = dt;
  s.options.min_speed = config.min_speed;
  s.options.regen = regen;
  if (interval > 0.0) {
    s.lane = build_schedule(cycle_stats(cycle).distance, interval, config.lane_offset,
                            config.lane_change_length);
  }
  return s;
}

SanityResult matched_pi_check(const Scenario& scenario, const BaseRatios& ratios,
                              double tolerance) {
  const Scenario copy = scenario.similar(ratios);
  auto direct = std::async(std::launch::async, [&] { return energy_report(scenario.run()); });
  const EnergyReport other = energy_report(copy.run());
  const EnergyReport base = direct.get();

  SanityResult r;
  r.label = scenario.params.name;
  if (!base.wh_per_m || !other.wh_per_m) {
    throw NumericError("matched-pi check: run covered no distance");
  }
  r.direct_wh_per_m = *base.wh_per_m;
  r.similar_wh_per_m = *other.wh_per_m;
  r.predicted_wh_per_m =
      scaled_efficiency(r.similar_wh_per_m, scale_factors(scenario.params, copy.params));
  r.relative_error = std::abs(r.predicted_wh_per_m - r.direct_wh_per_m) / r.direct_wh_per_m;
  r.pass = r.relative_error <= tolerance;
  return r;
}

namespace {

struct CellResult {
  EnergyReport straight;
  EnergyReport lane_change;
};

BaseRatios sanity_ratios(const std::vector<SuiteCase>& cases, std::size_t target) {
  if (const auto ref = cases[target].reference) {
    return base_ratios(cases[*ref].config.params, cases[target].config.params);
  }
  return {8.0, 2.0, 1.5};
}

}  // namespace

SuiteResult run_experiment_suite(const std::vector<SuiteCase>& cases, const SuiteOptions& options) {
  if (cases.empty()) throw ValidationError("experiment suite needs at least one case");
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    c.config.params.validate();
    c.cycle.validate();
    if (c.reference && (*c.reference >= cases.size() || *c.reference == i)) {
      throw ValidationError("suite case '" + c.label + "' has an invalid reference");
    }
    if (!(c.lane_change_interval > 0.0)) {
      throw ValidationError("suite case '" + c.label + "' needs a positive lane-change interval");
    }
  }

  // Sanity pair first: the first case with a reference, else the first case.
  std::size_t target = 0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    if (cases[i].reference) {
      target = i;
      break;
    }
  }
  const auto& tc = cases[target];
  SuiteResult result;
  result.sanity = matched_pi_check(
      make_scenario(tc.config, tc.cycle, tc.lane_change_interval, options.dt, options.regen),
      sanity_ratios(cases, target), options.sanity_tolerance);
  if (!result.sanity.pass) {
    throw NumericError("matched-pi sanity check failed for '" + tc.label + "': relative error " +
                       detail::format_sig(result.sanity.relative_error));
  }

  std::vector<std::future<EnergyReport>> cells;
  for (const auto& c : cases) {
    for (const double interval : {0.0, c.lane_change_interval}) {
      cells.push_back(std::async(std::launch::async, [&c, interval, &options] {
        return energy_report(
            make_scenario(c.config, c.cycle, interval, options.dt, options.regen).run());
      }));
    }
  }

  std::vector<CellResult> done(cases.size());
  for (std::size_t i = 0; i < cases.size(); ++i) {
    done[i].straight = cells[2 * i].get();
    done[i].lane_change = cells[2 * i + 1].get();
  }

  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    SuiteRow row;
    row.label = c.label;
    row.vehicle = c.config.params.name;
    row.cycle = c.cycle.name;
    row.scale = c.scale;
    row.interval = c.lane_change_interval;
    row.straight = done[i].straight;
    row.lane_change = done[i].lane_change;
    row.increase_percent = compare_runs(row.straight, row.lane_change);
    row.lane_change.delta_percent = row.increase_percent;
    if (c.reference) {
      const auto& ref = cases[*c.reference];
      row.reference_label = ref.label;
      if (const auto ref_eff = done[*c.reference].straight.wh_per_m) {
        const double predicted =
            scaled_efficiency(*ref_eff, scale_factors(c.config.params, ref.config.params));
        row.predicted_wh_per_m = predicted;
        if (row.straight.wh_per_m) {
          row.prediction_error_percent = 100.0 * (*row.straight.wh_per_m - predicted) / predicted;
        }
      }
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

namespace {

std::string optional_cell(const std::optional<double>& v, double scale = 1.0) {
  return v ? format_full(*v * scale) : std::string();
}

}  // namespace

std::string SuiteResult::table_sim_ev() const {
  std::ostringstream out;
  out << "case,vehicle,cycle,energy_kwh,distance_km,kwh_per_km,"
         "lc_energy_kwh,lc_distance_km,lc_kwh_per_km\n";
  for (const auto& r : rows) {
    if (r.scale != VehicleScale::full_size) continue;
    out << r.label << ',' << r.vehicle << ',' << r.cycle << ','
        << format_full(r.straight.energy_wh / 1000.0) << ','
        << format_full(r.straight.distance_m / 1000.0) << ','
        << optional_cell(r.straight.wh_per_m) << ','
        << format_full(r.lane_change.energy_wh / 1000.0) << ','
        << format_full(r.lane_change.distance_m / 1000.0) << ','
        << optional_cell(r.lane_change.wh_per_m) << '\n';
  }
  return out.str();
}

std::string SuiteResult::table_rcc_eff() const {
  std::ostringstream out;
  out << "case,vehicle,cycle,energy_wh,distance_m,wh_per_m,lc_energy_wh,lc_distance_m,"
         "lc_wh_per_m,reference,predicted_wh_per_m,prediction_error_percent\n";
  for (const auto& r : rows) {
    if (r.scale != VehicleScale::scaled) continue;
    out << r.label << ',' << r.vehicle << ',' << r.cycle << ','
        << format_full(r.straight.energy_wh) << ',' << format_full(r.straight.distance_m) << ','
        << optional_cell(r.straight.wh_per_m) << ',' << format_full(r.lane_change.energy_wh)
        << ',' << format_full(r.lane_change.distance_m) << ','
        << optional_cell(r.lane_change.wh_per_m) << ',' << r.reference_label << ','
        << optional_cell(r.predicted_wh_per_m) << ','
        << optional_cell(r.prediction_error_percent) << '\n';
  }
  return out.str();
}

std::string SuiteResult::table_lc_delta() const {
  std::ostringstream out;
  out << "case,vehicle,cycle,lane_change_interval_m,wh_per_m,lc_wh_per_m,increase_percent\n";
  for (const auto& r : rows) {
    out << r.label << ',' << r.vehicle << ',' << r.cycle << ',' << format_full(r.interval) << ','
        << optional_cell(r.straight.wh_per_m) << ',' << optional_cell(r.lane_change.wh_per_m)
        << ',' << format_full(r.increase_percent) << '\n';
  }
  return out.str();
}

std::vector<SuiteCase> bundled_suite(const std::filesystem::path& data_dir) {
  const auto ev = load_vehicle_config(data_dir / "configs" / "rivian_r1t_sim.cfg");
  const auto rcc = load_vehicle_config(data_dir / "configs" / "rcc.cfg");
  const double length_ratio = base_ratios(ev.params, rcc.params).length;
  constexpr double kRccInterval = 20.0;

  auto cycle = [&](const std::string& file, const std::string& name) {
    return parse_drive_cycle(read_text_file(data_dir / "cycles" / file), name);
  };
  std::vector<SuiteCase> cases;
  cases.push_back({"ev_cycle_1", ev, cycle("udds_1_ev.csv", "cycle_1"), VehicleScale::full_size,
                   std::nullopt, kRccInterval * length_ratio});
  cases.push_back({"ev_cycle_2", ev, cycle("udds_2_ev.csv", "cycle_2"), VehicleScale::full_size,
                   std::nullopt, kRccInterval * length_ratio});
  cases.push_back({"rcc_scaled_1", rcc, cycle("udds_1_rcc.csv", "scaled_1"), VehicleScale::scaled,
                   0, kRccInterval});
  cases.push_back({"rcc_scaled_2", rcc, cycle("udds_2_rcc.csv", "scaled_2"), VehicleScale::scaled,
                   1, kRccInterval});
  return cases;
}

void write_suite_tables(const SuiteResult& result, const std::string& dir) {
  const std::filesystem::path root(dir);
  std::error_code ec;
  std::filesystem::create_directories(root, ec);
  if (ec) throw ValidationError("cannot create output directory " + dir + ": " + ec.message());
  write_text_file_atomic(root / "table_sim_ev.csv", result.table_sim_ev());
  write_text_file_atomic(root / "table_rcc_eff.csv", result.table_rcc_eff());
  write_text_file_atomic(root / "table_lc_delta.csv", result.table_lc_delta());
}

}  // namespace evsim
