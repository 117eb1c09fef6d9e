#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <tuple>

#include "evsim/calibration.hpp"
#include "evsim/config.hpp"
#include "evsim/drivecycle.hpp"
#include "evsim/error.hpp"
#include "evsim/reporting.hpp"
#include "evsim/simulation.hpp"
#include "evsim/similitude.hpp"

namespace py = pybind11;
using namespace evsim;

namespace {

py::dict report_dict(const EnergyReport& r) {
  py::dict d;
  d["energy_wh"] = r.energy_wh;
  d["distance_m"] = r.distance_m;
  d["wh_per_m"] = r.wh_per_m ? py::cast(*r.wh_per_m) : py::none();
  d["peak_power_w"] = r.peak_power_w;
  d["delta_percent"] = r.delta_percent ? py::cast(*r.delta_percent) : py::none();
  return d;
}

py::dict trajectory_dict(const Trajectory& traj) {
  const auto n = static_cast<py::ssize_t>(traj.samples.size());
  auto column = [&](auto get) {
    py::array_t<double> a(n);
    auto view = a.mutable_unchecked<1>();
    for (py::ssize_t i = 0; i < n; ++i) view(i) = get(traj.samples[static_cast<std::size_t>(i)]);
    return a;
  };
  py::dict d;
  d["t"] = column([](const TrajectorySample& s) { return s.t; });
  d["x"] = column([](const TrajectorySample& s) { return s.state.x; });
  d["y"] = column([](const TrajectorySample& s) { return s.state.y; });
  d["psi"] = column([](const TrajectorySample& s) { return s.state.heading; });
  d["vx"] = column([](const TrajectorySample& s) { return s.state.vx; });
  d["vy"] = column([](const TrajectorySample& s) { return s.state.vy; });
  d["r"] = column([](const TrajectorySample& s) { return s.state.yaw_rate; });
  d["a"] = column([](const TrajectorySample& s) { return s.inputs.accel; });
  d["delta"] = column([](const TrajectorySample& s) { return s.inputs.steer; });
  d["tau"] = column([](const TrajectorySample& s) { return s.torque; });
  d["omega"] = column([](const TrajectorySample& s) { return s.motor_speed; });
  d["Pb"] = column([](const TrajectorySample& s) { return s.battery_power; });
  d["Eb"] = column([](const TrajectorySample& s) { return s.energy; });
  return d;
}

std::vector<Quantity> to_quantities(
    const std::vector<std::tuple<std::string, std::optional<double>, std::tuple<int, int, int>>>&
        items) {
  std::vector<Quantity> out;
  for (const auto& [name, value, dims] : items) {
    out.push_back({name, value, {std::get<0>(dims), std::get<1>(dims), std::get<2>(dims)}});
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bicycle-model EV energy simulator with similitude scaling";

  auto validation = py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
  (void)validation;

  py::class_<VehicleParams>(m, "VehicleParams")
      .def(py::init<>())
      .def_readwrite("name", &VehicleParams::name)
      .def_readwrite("m", &VehicleParams::mass)
      .def_readwrite("Iz", &VehicleParams::yaw_inertia)
      .def_readwrite("lF", &VehicleParams::cg_to_front)
      .def_readwrite("lR", &VehicleParams::cg_to_rear)
      .def_readwrite("l", &VehicleParams::wheelbase)
      .def_readwrite("CF", &VehicleParams::cornering_stiffness_front)
      .def_readwrite("CR", &VehicleParams::cornering_stiffness_rear)
      .def_readwrite("rw", &VehicleParams::wheel_radius)
      .def_readwrite("Nd", &VehicleParams::final_drive_ratio)
      .def_readwrite("eta_i", &VehicleParams::diff_efficiency)
      .def_readwrite("J", &VehicleParams::shaft_inertia)
      .def_readwrite("B", &VehicleParams::shaft_damping)
      .def_readwrite("Np", &VehicleParams::pole_count)
      .def_readwrite("flux_linkage", &VehicleParams::flux_linkage)
      .def_readwrite("dead_zone_speed", &VehicleParams::dead_zone_speed)
      .def_readwrite("tau_rated", &VehicleParams::rated_torque)
      .def_readwrite("P_rated", &VehicleParams::rated_power)
      .def("validate", &VehicleParams::validate)
      .def("__repr__", [](const VehicleParams& p) {
        return "<VehicleParams " + p.name + " m=" + std::to_string(p.mass) + ">";
      });

  py::class_<VehicleConfig>(m, "VehicleConfig")
      .def_readonly("params", &VehicleConfig::params)
      .def_readonly("efficiency_source", &VehicleConfig::efficiency_source)
      .def_readonly("lane_offset", &VehicleConfig::lane_offset)
      .def_readonly("lane_change_length", &VehicleConfig::lane_change_length)
      .def("mean_efficiency",
           [](const VehicleConfig& c) { return c.efficiency.mean_efficiency(); })
      .def("efficiency", [](const VehicleConfig& c, double torque, double omega) {
        return c.efficiency.lookup(torque, omega);
      });

  m.def("load_config", &load_vehicle_config, py::arg("path"));
  m.def("parse_config", &parse_vehicle_config, py::arg("text"),
        py::arg("base_dir") = std::filesystem::path());

  py::class_<DriveCycle>(m, "DriveCycle")
      .def_readonly("name", &DriveCycle::name)
      .def_property_readonly("duration", &DriveCycle::duration)
      .def_property_readonly("max_speed", &DriveCycle::max_speed)
      .def("speed_at", &DriveCycle::speed_at)
      .def("__len__", [](const DriveCycle& c) { return c.samples.size(); })
      .def("to_csv", &write_drive_cycle);

  m.def("parse_drive_cycle", &parse_drive_cycle, py::arg("text"), py::arg("name") = "cycle");
  m.def("load_drive_cycle", [](const std::filesystem::path& path) {
    return parse_drive_cycle(read_text_file(path), path.stem().string());
  });
  m.def("cycle_stats", [](const DriveCycle& c) {
    const auto s = cycle_stats(c);
    py::dict d;
    d["duration"] = s.duration;
    d["distance"] = s.distance;
    d["max_speed"] = s.max_speed;
    d["mean_speed"] = s.mean_speed;
    return d;
  });

  py::class_<ScaleFactors>(m, "ScaleFactors")
      .def(py::init<>())
      .def_readwrite("velocity", &ScaleFactors::velocity)
      .def_readwrite("time", &ScaleFactors::time)
      .def_readwrite("distance", &ScaleFactors::distance)
      .def_readwrite("energy", &ScaleFactors::energy)
      .def_readwrite("acceleration", &ScaleFactors::acceleration)
      .def_readwrite("yaw_rate", &ScaleFactors::yaw_rate)
      .def("inverse", &ScaleFactors::inverse)
      .def("to_json", &ScaleFactors::to_json);

  m.def("scale_factors", &scale_factors, py::arg("a"), py::arg("b"));
  m.def("scaled_efficiency", &scaled_efficiency, py::arg("wh_per_m_b"), py::arg("factors"));
  m.def("scale_cycle", &scale_cycle, py::arg("cycle"), py::arg("factors"));

  m.def("evaluate_vehicle_pi_groups", &evaluate_vehicle_pi_groups, py::arg("params"),
        py::arg("eta"));
  m.def(
      "match_report",
      [](const VehicleParams& a, double eta_a, const VehicleParams& b, double eta_b, double tol) {
        py::list rows;
        for (const auto& r : match_report(a, eta_a, b, eta_b, tol)) {
          py::dict d;
          d["group"] = r.name;
          d["expression"] = r.expression;
          d["value_a"] = r.value_a;
          d["value_b"] = r.value_b;
          d["ratio"] = r.ratio;
          d["pass"] = r.pass;
          d["note"] = r.note;
          rows.append(d);
        }
        return rows;
      },
      py::arg("a"), py::arg("eta_a"), py::arg("b"), py::arg("eta_b"), py::arg("tolerance") = 0.10);

  m.def(
      "compute_pi_groups",
      [](const std::vector<std::tuple<std::string, std::optional<double>, std::tuple<int, int, int>>>&
             items,
         const std::vector<std::string>& repeating) {
        const auto quantities = to_quantities(items);
        const auto set = compute_pi_groups(quantities, repeating);
        py::list groups;
        for (const auto& g : set.groups) {
          py::dict d;
          d["name"] = g.name;
          d["expression"] = set.expression(g);
          py::list exps;
          for (const auto& e : g.exponents) exps.append(py::make_tuple(e.num(), e.den()));
          d["exponents"] = exps;
          d["dimensionless"] = is_dimensionless(g, quantities);
          groups.append(d);
        }
        return groups;
      },
      py::arg("quantities"), py::arg("repeating") = std::vector<std::string>{},
      "quantities: list of (name, value or None, (M, L, T)).");
  m.def(
      "dimension_rank",
      [](const std::vector<std::tuple<std::string, std::optional<double>,
                                      std::tuple<int, int, int>>>& items) {
        return matrix_rank(dimension_matrix(to_quantities(items)));
      },
      py::arg("quantities"));

  m.def("bifilar_inertia", &bifilar_inertia, py::arg("mass"), py::arg("spacing"),
        py::arg("length"), py::arg("period"), py::arg("gravity") = kStandardGravity);
  m.def(
      "cog_from_axle_loads",
      [](double l, double front, double rear) {
        const auto d = cog_from_axle_loads(l, front, rear);
        return py::make_tuple(d.cg_to_front, d.cg_to_rear);
      },
      py::arg("wheelbase"), py::arg("front_load"), py::arg("rear_load"));
  m.def(
      "estimate_damping_inertia",
      [](double speed, double torque, double time_constant) {
        const auto e = estimate_damping_inertia(speed, torque, time_constant);
        return py::make_tuple(e.damping, e.inertia);
      },
      py::arg("steady_speed"), py::arg("steady_torque"), py::arg("time_constant"));

  m.def(
      "simulate",
      [](const VehicleConfig& cfg, const DriveCycle& cycle, double lane_change_interval,
         double dt, bool regen) {
        Trajectory traj;
        {
          py::gil_scoped_release release;
          traj = make_scenario(cfg, cycle, lane_change_interval, dt, RegenPolicy{regen}).run();
        }
        py::dict out;
        out["report"] = report_dict(energy_report(traj));
        out["trajectory"] = trajectory_dict(traj);
        out["envelope_violations"] = traj.envelope_violations;
        return out;
      },
      py::arg("config"), py::arg("cycle"), py::arg("lane_change_interval") = 0.0,
      py::arg("dt") = 1e-3, py::arg("regen") = false);

  m.def(
      "run_bundled_suite",
      [](const std::filesystem::path& data_dir, double dt) {
        SuiteResult result;
        {
          py::gil_scoped_release release;
          SuiteOptions opts;
          opts.dt = dt;
          result = run_experiment_suite(bundled_suite(data_dir), opts);
        }
        py::dict out;
        py::dict sanity;
        sanity["direct_wh_per_m"] = result.sanity.direct_wh_per_m;
        sanity["predicted_wh_per_m"] = result.sanity.predicted_wh_per_m;
        sanity["relative_error"] = result.sanity.relative_error;
        out["sanity"] = sanity;
        py::list rows;
        for (const auto& r : result.rows) {
          py::dict d;
          d["case"] = r.label;
          d["vehicle"] = r.vehicle;
          d["straight"] = report_dict(r.straight);
          d["lane_change"] = report_dict(r.lane_change);
          d["increase_percent"] = r.increase_percent;
          d["predicted_wh_per_m"] =
              r.predicted_wh_per_m ? py::cast(*r.predicted_wh_per_m) : py::none();
          rows.append(d);
        }
        out["rows"] = rows;
        out["table_sim_ev"] = result.table_sim_ev();
        out["table_rcc_eff"] = result.table_rcc_eff();
        out["table_lc_delta"] = result.table_lc_delta();
        return out;
      },
      py::arg("data_dir"), py::arg("dt") = 1e-3);
}
