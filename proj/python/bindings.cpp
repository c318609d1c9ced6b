#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bethe/baesolver.hpp"
#include "bethe/config.hpp"
#include "bethe/eigenfn.hpp"
#include "bethe/harness.hpp"
#include "bethe/quadrature.hpp"
#include "bethe/rootsys.hpp"

namespace py = pybind11;
using namespace bethe;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bethe ansatz on Weyl alcoves";
  m.attr("__version__") = BETHE_VERSION;

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<CapExceeded>(m, "CapExceeded", PyExc_ValueError);
  py::register_exception<PoleError>(m, "PoleError", PyExc_ArithmeticError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
  py::register_exception<CertificateError>(m, "CertificateError", PyExc_RuntimeError);

  py::class_<RootSystem>(m, "RootSystem")
      .def_property_readonly("label", [](const RootSystem& rs) { return rs.label.str(); })
      .def_readonly("dim", &RootSystem::dim)
      .def_readonly("simple_roots", &RootSystem::simple_roots)
      .def_readonly("positive_roots", &RootSystem::positive_roots)
      .def_readonly("coroots", &RootSystem::coroots)
      .def_readonly("highest_root", &RootSystem::highest_root)
      .def_readonly("rho", &RootSystem::rho)
      .def_readonly("marks", &RootSystem::marks)
      .def_readonly("fundamental_weights", &RootSystem::fundamental_weights)
      .def_readonly("length_classes", &RootSystem::length_classes)
      .def("__repr__", [](const RootSystem& rs) { return "<RootSystem " + rs.label.str() + ">"; });

  m.def("build_root_system", [](const std::string& label) { return build_root_system(CartanLabel::parse(label)); },
        py::arg("label"));

  py::class_<WeylGroup>(m, "WeylGroup")
      .def("order", &WeylGroup::order)
      .def_readonly("elements", &WeylGroup::elements);
  m.def("weyl_group", &weyl_group, py::arg("rs"), py::arg("cap") = kDefaultWeylCap);

  m.def("alcove_vertices", &alcove_vertices);
  m.def("volume", &volume);

  py::class_<DominantWeight>(m, "DominantWeight")
      .def_readonly("coeffs", &DominantWeight::coeffs)
      .def_readonly("vec", &DominantWeight::vec);
  m.def("dominant_weights", &dominant_weights, py::arg("rs"), py::arg("height"), py::arg("strict") = true);

  py::class_<Coupling>(m, "Coupling")
      .def(py::init([](double k) { return k == 0.0 ? Coupling::zero() : Coupling::uniform(k); }))
      .def(py::init([](std::vector<double> v) { return Coupling::per_class(std::move(v)); }))
      .def_property_readonly("values", &Coupling::values)
      .def("is_zero", &Coupling::is_zero);

  py::class_<SolverOptions>(m, "SolverOptions")
      .def(py::init<>())
      .def_readwrite("tol", &SolverOptions::tol)
      .def_readwrite("bae_tol", &SolverOptions::bae_tol)
      .def_readwrite("max_iter", &SolverOptions::max_iter)
      .def_readwrite("certify", &SolverOptions::certify);

  py::class_<BaeSolution>(m, "BaeSolution")
      .def_readonly("lambda_", &BaeSolution::lambda)
      .def_readonly("grad_norm", &BaeSolution::grad_norm)
      .def_readonly("iterations", &BaeSolution::iterations)
      .def_readonly("bae_residual", &BaeSolution::bae_residual)
      .def_readonly("hessian_det", &BaeSolution::hessian_det)
      .def_readonly("in_chamber", &BaeSolution::in_chamber);

  m.def(
      "solve_bae",
      [](const RootSystem& rs, const Coupling& k, const std::vector<int>& mu, const SolverOptions& o) {
        return solve_bae(rs, k, make_weight(rs, mu), o);
      },
      py::arg("rs"), py::arg("k"), py::arg("mu"), py::arg("options") = SolverOptions{});
  m.def("master_value", [](const RootSystem& rs, const Coupling& k, const std::vector<int>& mu, const Vector& v) {
    return master_value(rs, k, make_weight(rs, mu), v);
  });
  m.def("master_grad", [](const RootSystem& rs, const Coupling& k, const std::vector<int>& mu, const Vector& v) {
    return master_grad(rs, k, make_weight(rs, mu), v);
  });
  m.def("master_hessian", &master_hessian);
  m.def("c_fun", &c_fun);

  py::class_<BetheFunction>(m, "BetheFunction")
      .def(py::init<const RootSystem&, const WeylGroup&, const Coupling&, Vector>())
      .def("__call__", &BetheFunction::operator())
      .def("directional_derivative", &BetheFunction::directional_derivative)
      .def_property_readonly("eigenvalue", &BetheFunction::eigenvalue);

  m.def(
      "run_config",
      [](const std::string& command, const std::string& text) {
        const Report r = run_command(command, parse_config(text));
        std::ostringstream os;
        write_jsonl(os, r);
        return py::make_tuple(r.passed(), os.str());
      },
      py::arg("command"), py::arg("config_text"));
}
