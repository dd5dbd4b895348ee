#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "cellless/antenna.hpp"
#include "cellless/errors.hpp"
#include "cellless/exposure.hpp"
#include "cellless/harness.hpp"
#include "cellless/radio_metrics.hpp"
#include "cellless/scenario.hpp"
#include "cellless/serialization.hpp"
#include "cellless/solution.hpp"
#include "cellless/solver_ctm.hpp"
#include "cellless/solver_maxrate.hpp"

namespace py = pybind11;
using namespace cellless;

PYBIND11_MODULE(_cellless, m) {
  m.doc() = "Minimum-power configuration of cell-less radio networks";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<PlacementError>(m, "PlacementError", PyExc_RuntimeError);
  py::register_exception<NoFeasibleSolution>(m, "NoFeasibleSolution", PyExc_RuntimeError);
  py::register_exception<UnservedUser>(m, "UnservedUser", PyExc_ValueError);

  py::class_<Position3D>(m, "Position3D")
      .def(py::init<double, double, double>(), py::arg("x") = 0.0, py::arg("y") = 0.0,
           py::arg("z") = 0.0)
      .def_readwrite("x", &Position3D::x)
      .def_readwrite("y", &Position3D::y)
      .def_readwrite("z", &Position3D::z)
      .def("__repr__", [](const Position3D& p) {
        return "Position3D(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ", " +
               std::to_string(p.z) + ")";
      });

  py::class_<PoA>(m, "PoA")
      .def_readonly("id", &PoA::id)
      .def_readonly("position", &PoA::position)
      .def_readonly("frequency_hz", &PoA::frequency_hz)
      .def_readonly("bandwidth_hz", &PoA::bandwidth_hz)
      .def_readonly("max_tx_power_dbm", &PoA::max_tx_power_dbm)
      .def_readonly("min_beam_width", &PoA::min_beam_width)
      .def_readonly("beams", &PoA::beams);

  py::class_<EndUser>(m, "EndUser")
      .def_readonly("id", &EndUser::id)
      .def_readonly("position", &EndUser::position)
      .def_readonly("required_rate_bps", &EndUser::required_rate_bps);

  py::class_<Human>(m, "Human")
      .def_readonly("id", &Human::id)
      .def_readonly("position", &Human::position)
      .def_readonly("phantom", &Human::phantom)
      .def_readonly("linked_user", &Human::linked_user);

  py::class_<Scenario>(m, "Scenario")
      .def_readonly("name", &Scenario::name)
      .def_property_readonly("kind", [](const Scenario& s) { return std::string(to_string(s.kind)); })
      .def_readonly("sar_limit_wkg", &Scenario::sar_limit_wkg)
      .def_readonly("poas", &Scenario::poas)
      .def_readonly("users", &Scenario::users)
      .def_readonly("humans", &Scenario::humans)
      .def("to_json", &scenario_to_json);

  m.def("builtin_names", &builtin_names);
  m.def("builtin_scenario", [](const std::string& name, std::uint64_t seed) {
    return builtin_scenario(name, seed);
  }, py::arg("name"), py::arg("seed"));
  m.def("parse_scenario", &parse_scenario, py::arg("text"));
  m.def("load_scenario", &load_scenario, py::arg("path"));

  py::class_<BeamConfig>(m, "BeamConfig")
      .def_readwrite("beam_id", &BeamConfig::beam_id)
      .def_readwrite("owner_poa", &BeamConfig::owner_poa)
      .def_readwrite("azimuth", &BeamConfig::azimuth)
      .def_readwrite("zenith", &BeamConfig::zenith)
      .def_readwrite("width", &BeamConfig::width)
      .def_readwrite("served_users", &BeamConfig::served_users);

  py::class_<SolutionState>(m, "SolutionState")
      .def(py::init<>())
      .def_readwrite("beams", &SolutionState::beams)
      .def_readwrite("tx_power_dbm", &SolutionState::tx_power_dbm)
      .def("to_json", &solution_to_json);
  m.def("parse_solution", &parse_solution, py::arg("text"));

  py::class_<Violation>(m, "Violation")
      .def_readonly("variable", &Violation::variable)
      .def_readonly("message", &Violation::message);
  m.def("validate", &validate, py::arg("solution"), py::arg("scenario"));

  py::class_<MetricsBundle>(m, "MetricsBundle")
      .def_readonly("user_ids", &MetricsBundle::user_ids)
      .def_readonly("user_rate_bps", &MetricsBundle::user_rate_bps)
      .def_readonly("user_sinr", &MetricsBundle::user_sinr)
      .def_readonly("human_ids", &MetricsBundle::human_ids)
      .def_readonly("human_sar_wkg", &MetricsBundle::human_sar_wkg)
      .def_readonly("poa_power_dbm", &MetricsBundle::poa_power_dbm)
      .def_readonly("total_power_w", &MetricsBundle::total_power_w)
      .def_readonly("feasible", &MetricsBundle::feasible)
      .def_readonly("violated", &MetricsBundle::violated)
      .def_property_readonly("min_rate", &MetricsBundle::min_rate)
      .def_property_readonly("max_sar", &MetricsBundle::max_sar);

  m.def("evaluate", &cellless::evaluate, py::arg("solution"), py::arg("scenario"),
        py::arg("seed"), py::arg("n_realizations") = 10, py::arg("workers") = 1,
        py::call_guard<py::gil_scoped_release>());

  py::class_<CtmConfig>(m, "CtmConfig")
      .def(py::init<>())
      .def_readwrite("delta_db", &CtmConfig::delta_db)
      .def_readwrite("refinement_rounds", &CtmConfig::refinement_rounds)
      .def_readwrite("kmeans_restarts", &CtmConfig::kmeans_restarts)
      .def_readwrite("kmeans_max_iters", &CtmConfig::kmeans_max_iters)
      .def_readwrite("realizations_per_check", &CtmConfig::realizations_per_check)
      .def_readwrite("seed", &CtmConfig::seed)
      .def_readwrite("workers", &CtmConfig::workers);

  py::class_<AnnealConfig>(m, "AnnealConfig")
      .def(py::init<>())
      .def_readwrite("initial_temp", &AnnealConfig::initial_temp)
      .def_readwrite("cooling_factor", &AnnealConfig::cooling_factor)
      .def_readwrite("iterations", &AnnealConfig::iterations)
      .def_readwrite("moves_per_temp", &AnnealConfig::moves_per_temp)
      .def_readwrite("power_step_db", &AnnealConfig::power_step_db)
      .def_readwrite("angle_step", &AnnealConfig::angle_step)
      .def_readwrite("width_step", &AnnealConfig::width_step)
      .def_readwrite("reassign_weight", &AnnealConfig::reassign_weight)
      .def_readwrite("parallel_candidates", &AnnealConfig::parallel_candidates)
      .def_readwrite("n_realizations", &AnnealConfig::n_realizations)
      .def_readwrite("seed", &AnnealConfig::seed)
      .def_readwrite("workers", &AnnealConfig::workers);

  m.def("solve_ctm", [](const Scenario& s, const CtmConfig& c) {
    auto r = [&] {
      py::gil_scoped_release release;
      return solve_ctm(s, c);
    }();
    return py::make_tuple(r.solution, r.metrics);
  }, py::arg("scenario"), py::arg("config") = CtmConfig{});

  m.def("solve_maxrate", [](const Scenario& s, const AnnealConfig& c) {
    auto r = [&] {
      py::gil_scoped_release release;
      return solve_maxrate(s, c);
    }();
    return py::make_tuple(r.solution, r.metrics);
  }, py::arg("scenario"), py::arg("config") = AnnealConfig{});

  m.def("hungarian", [](const std::vector<std::vector<double>>& cost) {
    const auto a = hungarian(cost);
    return py::make_tuple(a.col_of_row, a.cost);
  }, py::arg("cost"));
  m.def("beam_width", [](const std::vector<double>& az, double min_width) {
    return beam_width(az, min_width);
  }, py::arg("azimuths"), py::arg("min_width"));
  m.def("user_azimuth", &user_azimuth, py::arg("poa"), py::arg("user"));

  m.def("incident_field", &incident_field, py::arg("power_density_wm2"));
  m.def("element_gain_db", [](bool three_gpp, double theta, double phi) {
    return element_gain_db(three_gpp ? ElementPattern::ThreeGpp8dBi : ElementPattern::Isotropic,
                           theta, phi);
  }, py::arg("three_gpp"), py::arg("theta"), py::arg("phi"));
}
