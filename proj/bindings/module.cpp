// Python bindings for the core operations: game setup, tuning, trace
// handling and simulation. Thin wrappers only; all numerics live in the
// C++ library so results match the CLI bit for bit.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>

#include "nesh/config.hpp"
#include "nesh/dos.hpp"
#include "nesh/game.hpp"
#include "nesh/quantizer.hpp"
#include "nesh/sim.hpp"
#include "nesh/topology.hpp"
#include "nesh/tuner.hpp"

namespace py = pybind11;

PYBIND11_MODULE(_core, m) {
  m.doc() = "quantized NE seeking under DoS: core operations";

  py::register_exception<nesh::InfeasibleDesign>(m, "InfeasibleDesign", PyExc_ValueError);

  py::class_<nesh::QuantResult>(m, "QuantResult")
      .def_readonly("symbol", &nesh::QuantResult::symbol)
      .def_readonly("saturated", &nesh::QuantResult::saturated)
      .def("__repr__", [](const nesh::QuantResult& r) {
        return "QuantResult(symbol=" + std::to_string(r.symbol) +
               ", saturated=" + (r.saturated ? std::string("True") : std::string("False")) + ")";
      });

  py::class_<nesh::UniformQuantizer>(m, "UniformQuantizer")
      .def(py::init<std::int64_t>(), py::arg("levels"))
      .def_property_readonly("levels", &nesh::UniformQuantizer::levels)
      .def_property_readonly("saturation_edge", &nesh::UniformQuantizer::saturation_edge)
      .def("quantize", &nesh::UniformQuantizer::quantize, py::arg("b"));

  py::class_<nesh::GameConstants>(m, "GameConstants")
      .def_readonly("mu", &nesh::GameConstants::mu)
      .def_readonly("lipschitz_l", &nesh::GameConstants::lipschitz_l);

  py::class_<nesh::GameSpec>(m, "GameSpec")
      .def(py::init<nesh::Vec, nesh::Vec, double, double>(), py::arg("rho"),
           py::arg("x_desired"), py::arg("p0"), py::arg("q0"))
      .def_property_readonly("n", &nesh::GameSpec::n)
      .def("matrix_m", &nesh::GameSpec::matrix_m)
      .def("vector_c", &nesh::GameSpec::vector_c)
      .def("pseudogradient", &nesh::GameSpec::pseudogradient, py::arg("x"))
      .def("mixed_pseudogradient", &nesh::GameSpec::mixed_pseudogradient, py::arg("x"),
           py::arg("estimates"))
      .def("solve_ne", &nesh::GameSpec::solve_ne)
      .def("constants", &nesh::GameSpec::constants);

  py::class_<nesh::Topology>(m, "Topology")
      .def(py::init<nesh::Mat>(), py::arg("adjacency"))
      .def_static("cycle", &nesh::Topology::cycle, py::arg("n"), py::arg("weight") = 1.0)
      .def_static("path", &nesh::Topology::path, py::arg("n"), py::arg("weight") = 1.0)
      .def_static("complete", &nesh::Topology::complete, py::arg("n"), py::arg("weight") = 1.0)
      .def_property_readonly("n", &nesh::Topology::n)
      .def_property_readonly("adjacency", &nesh::Topology::adjacency);

  py::class_<nesh::ProtocolMatrices>(m, "ProtocolMatrices")
      .def_readonly("laplacian", &nesh::ProtocolMatrices::laplacian)
      .def_readonly("a0", &nesh::ProtocolMatrices::a0)
      .def_readonly("s", &nesh::ProtocolMatrices::s)
      .def_readonly("h", &nesh::ProtocolMatrices::h)
      .def_readonly("g", &nesh::ProtocolMatrices::g)
      .def_readonly("gain", &nesh::ProtocolMatrices::gain);

  m.def("build_matrices", &nesh::build_matrices, py::arg("topology"), py::arg("gain"));
  m.def("h_max", &nesh::h_max, py::arg("topology"));
  m.def("spectral_norm", &nesh::spectral_norm, py::arg("matrix"));

  py::class_<nesh::DosInterval>(m, "DosInterval")
      .def(py::init<double, double>(), py::arg("start"), py::arg("duration"))
      .def_readonly("start", &nesh::DosInterval::start)
      .def_readonly("duration", &nesh::DosInterval::duration);

  py::class_<nesh::DosParams>(m, "DosParams")
      .def_readonly("eta", &nesh::DosParams::eta)
      .def_readonly("tau_d", &nesh::DosParams::tau_d)
      .def_readonly("kappa", &nesh::DosParams::kappa)
      .def_readonly("t_dur", &nesh::DosParams::t_dur);

  py::class_<nesh::DosTrace>(m, "DosTrace")
      .def(py::init<std::vector<nesh::DosInterval>, double>(), py::arg("intervals"),
           py::arg("horizon"))
      .def_property_readonly("horizon", &nesh::DosTrace::horizon)
      .def_property_readonly("intervals", &nesh::DosTrace::intervals)
      .def("is_active", &nesh::DosTrace::is_active, py::arg("t"))
      .def("onset_count", &nesh::DosTrace::onset_count, py::arg("tau"), py::arg("t"))
      .def("active_measure", &nesh::DosTrace::active_measure, py::arg("tau"), py::arg("t"))
      .def("save", &nesh::DosTrace::save, py::arg("path"))
      .def_static("load", &nesh::DosTrace::load, py::arg("path"));

  m.def("generate_dos", &nesh::generate_dos, py::arg("duty"), py::arg("mean_period"),
        py::arg("horizon"), py::arg("seed"));
  m.def("certify", &nesh::certify, py::arg("trace"), py::arg("tau_d"), py::arg("t_dur"),
        py::arg("resolution"));
  m.def("ts_lower_bound", &nesh::ts_lower_bound, py::arg("params"), py::arg("delta"),
        py::arg("k"));
  m.def("count_successes", &nesh::count_successes, py::arg("trace"), py::arg("delta"),
        py::arg("k"));

  py::class_<nesh::DesignParams>(m, "DesignParams")
      .def_readonly("h", &nesh::DesignParams::h)
      .def_readonly("delta", &nesh::DesignParams::delta)
      .def_readonly("gamma1", &nesh::DesignParams::gamma1)
      .def_readonly("theta0", &nesh::DesignParams::theta0)
      .def_readonly("c_bound", &nesh::DesignParams::c_bound)
      .def_readonly("c_gamma", &nesh::DesignParams::c_gamma)
      .def_readonly("gamma_decay", &nesh::DesignParams::gamma_decay)
      .def_readonly("rho_hbar", &nesh::DesignParams::rho_hbar)
      .def_readonly("r_x", &nesh::DesignParams::r_x)
      .def_readonly("r_y", &nesh::DesignParams::r_y);

  m.def("synthesize", &nesh::synthesize, py::arg("game"), py::arg("topology"),
        py::arg("theta0"), py::arg("c_x0"), py::arg("c_xstar"),
        py::arg("gamma1_margin") = 0.1, py::arg("h_safety") = 0.99);
  m.def("rho_hbar", &nesh::rho_hbar, py::arg("norm_h"), py::arg("delta"), py::arg("l"),
        py::arg("mu"), py::arg("n"));
  m.def("select_delta", &nesh::select_delta, py::arg("norm_h"), py::arg("l"), py::arg("mu"),
        py::arg("n"));
  m.def("delta_feasible", &nesh::delta_feasible, py::arg("delta"), py::arg("norm_h"),
        py::arg("l"), py::arg("mu"), py::arg("n"));

  py::class_<nesh::StepRecord>(m, "StepRecord")
      .def_readonly("k", &nesh::StepRecord::k)
      .def_readonly("dos", &nesh::StepRecord::dos)
      .def_readonly("x", &nesh::StepRecord::x)
      .def_readonly("theta", &nesh::StepRecord::theta)
      .def_readonly("err_ne", &nesh::StepRecord::err_ne)
      .def_readonly("max_qarg_x", &nesh::StepRecord::max_qarg_x)
      .def_readonly("max_qarg_y", &nesh::StepRecord::max_qarg_y)
      .def_readonly("saturated", &nesh::StepRecord::saturated);

  py::class_<nesh::RunSummary>(m, "RunSummary")
      .def_readonly("final_err", &nesh::RunSummary::final_err)
      .def_readonly("initial_err", &nesh::RunSummary::initial_err)
      .def_readonly("first_saturation", &nesh::RunSummary::first_saturation)
      .def_readonly("min_theta", &nesh::RunSummary::min_theta)
      .def_readonly("ts_empirical", &nesh::RunSummary::ts_empirical)
      .def_readonly("max_qarg_x", &nesh::RunSummary::max_qarg_x)
      .def_readonly("max_qarg_y", &nesh::RunSummary::max_qarg_y);

  py::class_<nesh::SimResult>(m, "SimResult")
      .def_readonly("records", &nesh::SimResult::records)
      .def_readonly("summary", &nesh::SimResult::summary);

  m.def("run", &nesh::run, py::arg("game"), py::arg("topology"), py::arg("design"),
        py::arg("trace"), py::arg("delta_seconds"), py::arg("horizon_steps"),
        py::arg("record_decimation"), py::arg("x0"), py::arg("dual_state_check") = false);
  m.def("write_csv", &nesh::write_csv, py::arg("path"), py::arg("result"),
        py::arg("n_players"));
}
