#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gapstab/config.hpp"
#include "gapstab/flow.hpp"
#include "gapstab/frustration_free.hpp"
#include "gapstab/lieb_robinson.hpp"
#include "gapstab/majorana.hpp"
#include "gapstab/single_particle.hpp"
#include "gapstab/suite.hpp"

namespace py = pybind11;
using namespace gapstab;

namespace {

py::dict structure_dict(const StructureReport& r) {
  py::dict d;
  d["real_part"] = r.real_part;
  d["antisymmetry_A"] = r.antisymmetry_A;
  d["symmetry_abs_A"] = r.symmetry_abs_A;
  d["antisymmetry_sign"] = r.antisymmetry_sign;
  d["selfadjoint_sign"] = r.selfadjoint_sign;
  d["sign_squared"] = r.sign_squared;
  d["polar"] = r.polar;
  d["min_eig_abs_A"] = r.min_eig_abs_A;
  d["gap_mismatch"] = r.gap_mismatch;
  return d;
}

py::dict doubling_dict(const DoublingResidual& r) {
  py::dict d;
  d["gamma_form"] = r.gamma_form;
  d["tilde_form"] = r.tilde_form;
  d["tilde_selfadjoint"] = r.tilde_selfadjoint;
  d["eta_car"] = r.eta_car;
  d["spectrum"] = r.spectrum;
  d["plus_trace_offset"] = r.plus_trace_offset;
  return d;
}

// The report is handed over as JSON text; the package decodes it.
std::string run_config_text(const std::string& text, const std::vector<std::string>& suites) {
  RunConfig cfg = parse_config(text);
  validate_config(cfg);
  auto names = resolve_suites(suites.empty() ? cfg.suites : suites);
  py::gil_scoped_release unlock;
  return to_json(run_suite(cfg, names)).dump();
}

}  // namespace

PYBIND11_MODULE(_gapstab, m) {
  m.doc() = "Gap stability checks for interacting lattice fermions";

  py::register_exception<Error>(m, "GapstabError", PyExc_ValueError);

  py::class_<Lattice>(m, "Lattice")
      .def_property_readonly("dims", &Lattice::dims)
      .def_property_readonly("size", &Lattice::size)
      .def("coordinates", &Lattice::coordinates)
      .def("distance", py::overload_cast<std::size_t, std::size_t>(&Lattice::distance, py::const_))
      .def("diameter", &Lattice::diameter)
      .def("ball", &Lattice::ball, py::arg("centre"), py::arg("radius"));
  m.def("build_lattice", &build_lattice, py::arg("dims"), py::arg("periodic"));

  py::class_<SingleParticleModel>(m, "SingleParticleModel")
      .def_readonly("T", &SingleParticleModel::T)
      .def_readonly("fermi_energy", &SingleParticleModel::fermi_energy)
      .def_readonly("eigenvalues", &SingleParticleModel::eigenvalues)
      .def_readonly("gap", &SingleParticleModel::gap)
      .def_readonly("gapless", &SingleParticleModel::gapless);
  m.def("model_from_matrix", &model_from_matrix, py::arg("lattice"), py::arg("T"), py::arg("fermi_energy") = 0.0);

  py::class_<BdgData>(m, "BdgData")
      .def_readonly("A", &BdgData::A)
      .def_readonly("abs_A", &BdgData::abs_A)
      .def_readonly("sign_A", &BdgData::sign_A)
      .def_readonly("eigenvalues", &BdgData::eigenvalues)
      .def_readonly("gap", &BdgData::gap);
  m.def("build_A", &build_A, py::arg("model"));
  m.def("structure_report", [](const BdgData& b, double gap) { return structure_dict(structure_report(b, gap)); },
        py::arg("bdg"), py::arg("single_particle_gap"));

  py::class_<DoubledHamiltonian>(m, "DoubledHamiltonian")
      .def_property_readonly("H0", [](const DoubledHamiltonian& d) { return d.H0.dense(); })
      .def_readonly("ground_state", &DoubledHamiltonian::ground_state)
      .def_readonly("gap", &DoubledHamiltonian::gap)
      .def_readonly("trace_abs_A", &DoubledHamiltonian::trace_abs_A);
  m.def("build_doubled_h0", &build_doubled_h0, py::arg("bdg"), py::arg("max_sites") = kDefaultMaxDoubledSites);
  m.def("verify_doubling_identity",
        [](const BdgData& b, const DoubledHamiltonian& d) { return doubling_dict(verify_doubling_identity(b, d)); });

  py::class_<FlowState>(m, "FlowState")
      .def_readonly("s", &FlowState::s)
      .def_readonly("energies", &FlowState::energies)
      .def_readonly("gap", &FlowState::gap)
      .def_readonly("U", &FlowState::U)
      .def_readonly("intertwining_residual", &FlowState::intertwining_residual)
      .def_readonly("unitarity_defect", &FlowState::unitarity_defect);
  m.def("integrate_flow", &integrate_flow, py::arg("H0"), py::arg("V"), py::arg("s_grid"), py::arg("rk4_substeps") = 1,
        py::arg("gap_tol") = kFlowGapTol, py::call_guard<py::gil_scoped_release>());
  m.def("uniform_grid", &uniform_grid, py::arg("s_max"), py::arg("steps"));

  m.def("w_hat", &w_hat, py::arg("omega"), py::arg("gamma"));
  m.def("w_time", &w_time, py::arg("t"), py::arg("gamma"), py::arg("omega_nodes") = 0);
  m.def("u_mu", &u_mu, py::arg("mu"), py::arg("r"));

  m.def("config_hash", [](const std::string& text) { return config_hash(parse_config(text)); });
  m.def("suite_names", &suite_names);
  m.def("run_config_text", &run_config_text, py::arg("text"), py::arg("suites") = std::vector<std::string>{});
}
