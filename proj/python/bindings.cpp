#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "quadloco/lyapunov.hpp"
#include "quadloco/scenario.hpp"
#include "quadloco/simulator.hpp"
#include "quadloco/swing.hpp"
#include "quadloco/terrain.hpp"

namespace py = pybind11;
using namespace quadloco;

PYBIND11_MODULE(_quadloco, m) {
  m.doc() = "single-rigid-body locomotion controllers and scenario simulator";

  py::register_exception<ConfigError>(m, "ConfigError");

  py::enum_<RunStatus>(m, "RunStatus")
      .value("Ok", RunStatus::Ok)
      .value("Fallen", RunStatus::Fallen)
      .value("SolverFailure", RunStatus::SolverFailure);

  py::class_<RunSummary>(m, "RunSummary")
      .def_readonly("status", &RunSummary::status)
      .def_readonly("end_time", &RunSummary::end_time)
      .def_readonly("fall_time", &RunSummary::fall_time)
      .def_readonly("rms_height_error", &RunSummary::rms_height_error)
      .def_readonly("ss_height_error", &RunSummary::ss_height_error)
      .def_readonly("max_height_error", &RunSummary::max_height_error)
      .def_readonly("max_abs_roll", &RunSummary::max_abs_roll)
      .def_readonly("ss_pitch_error", &RunSummary::ss_pitch_error)
      .def_readonly("max_theta_inf", &RunSummary::max_theta_inf)
      .def_readonly("projection_ok", &RunSummary::projection_ok)
      .def_readonly("csv_path", &RunSummary::csv_path)
      .def("__repr__", [](const RunSummary& s) {
        return "<RunSummary status=" + to_string(s.status) +
               " end_time=" + std::to_string(s.end_time) + ">";
      });

  m.def(
      "run_scenario_file",
      [](const std::string& path, const std::string& csv) {
        return run_scenario(ScenarioConfig::load(path), csv);
      },
      py::arg("path"), py::arg("csv_path") = "");
  m.def(
      "run_scenario_json",
      [](const std::string& text, const std::string& csv) {
        return run_scenario(ScenarioConfig::from_json_text(text), csv);
      },
      py::arg("text"), py::arg("csv_path") = "");

  py::class_<LyapunovCertificate>(m, "LyapunovCertificate")
      .def_readonly("A_m", &LyapunovCertificate::A_m)
      .def_readonly("P", &LyapunovCertificate::P)
      .def_readonly("Q_L", &LyapunovCertificate::Q_L)
      .def_readonly("lam", &LyapunovCertificate::lambda)
      .def_readonly("residual", &LyapunovCertificate::residual);
  m.def(
      "build_certificate",
      [](const Vec6& kp, const Vec6& kd) { return build_certificate(kp, kd); },
      py::arg("kp"), py::arg("kd"));

  m.def("fit_slope", &fit_slope, py::arg("points"));
  m.def("slope_orientation", &slope_orientation, py::arg("a1"), py::arg("a2"));
  m.def("footstep_target", &footstep_target, py::arg("hip_pos"),
        py::arg("stance_time"), py::arg("v_des"), py::arg("v_act"),
        py::arg("z0"), py::arg("g_norm"), py::arg("terrain") = TerrainModel{});

  py::class_<TerrainModel>(m, "TerrainModel")
      .def(py::init<>())
      .def_static("rigid_flat", &TerrainModel::rigid_flat)
      .def_static("rigid_slope", &TerrainModel::rigid_slope, py::arg("a0"),
                  py::arg("a1"), py::arg("a2"))
      .def_static("soft", &TerrainModel::soft, py::arg("k"), py::arg("c"),
                  py::arg("cap"));
}
