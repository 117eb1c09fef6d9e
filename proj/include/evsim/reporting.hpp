#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "evsim/config.hpp"
#include "evsim/drivecycle.hpp"
#include "evsim/energy.hpp"
#include "evsim/simulation.hpp"

namespace evsim {

enum class VehicleScale { full_size, scaled };

/// One (vehicle, cycle) cell of the experiment table. `reference` points at
/// another case whose Wh/m is carried onto this vehicle with
/// scaled_efficiency() for the cross-scale prediction column.
struct SuiteCase {
  std::string label;
  VehicleConfig config;
  DriveCycle cycle;
  VehicleScale scale = VehicleScale::full_size;
  std::optional<std::size_t> reference;
  double lane_change_interval = 20.0;  // m, in this vehicle's frame
};

struct SuiteOptions {
  double dt = 1e-3;  // s
  RegenPolicy regen;
  double sanity_tolerance = 0.01;
};

/// Straight or lane-change run of one suite case, ready to execute.
/// `interval` is in the case's own length units; 0 disables lane changes.
Scenario make_scenario(const VehicleConfig& config, const DriveCycle& cycle, double interval,
                       double dt, const RegenPolicy& regen);

struct SuiteRow {
  std::string label;
  std::string vehicle;
  std::string cycle;
  VehicleScale scale = VehicleScale::full_size;
  double interval = 0.0;  // m, lane-change spacing actually used
  EnergyReport straight;
  EnergyReport lane_change;
  double increase_percent = 0.0;
  std::string reference_label;
  std::optional<double> predicted_wh_per_m;       // straight run, from the reference
  std::optional<double> prediction_error_percent; // (direct - predicted) / predicted
};

/// The matched-pi check: a run and its exactly similar copy at another size,
/// compared through scaled_efficiency().
struct SanityResult {
  std::string label;
  double direct_wh_per_m = 0.0;
  double similar_wh_per_m = 0.0;
  double predicted_wh_per_m = 0.0;
  double relative_error = 0.0;
  bool pass = false;
};

SanityResult matched_pi_check(const Scenario& scenario, const BaseRatios& ratios,
                              double tolerance);

struct SuiteResult {
  SanityResult sanity;
  std::vector<SuiteRow> rows;

  /// Full-size rows: energy in kWh, distance in km, kWh/km.
  [[nodiscard]] std::string table_sim_ev() const;
  /// Scaled rows: Wh, m, Wh/m and the prediction from the reference case.
  [[nodiscard]] std::string table_rcc_eff() const;
  /// Every row: straight vs lane-change Wh/m and the percent increase.
  [[nodiscard]] std::string table_lc_delta() const;
};

/// Runs the matched-pi sanity pair, then every case with and without lane
/// changes (cells run concurrently). Throws NumericError when the sanity
/// pair disagrees by more than options.sanity_tolerance.
SuiteResult run_experiment_suite(const std::vector<SuiteCase>& cases,
                                 const SuiteOptions& options = {});

/// The shipped experiment: the RCC-compatible EV on the two EV-scale
/// cycles and the RCC on their scaled versions, lane changes every 20 m on
/// the RCC and at the similar spacing on the EV. Reads configs/ and cycles/
/// under `data_dir`.
std::vector<SuiteCase> bundled_suite(const std::filesystem::path& data_dir);

/// Writes the three tables into `dir` (created if needed).
void write_suite_tables(const SuiteResult& result, const std::string& dir);

}  // namespace evsim
