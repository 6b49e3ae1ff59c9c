#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>
#include <string>

#include "ymflow/acceptance.hpp"
#include "ymflow/ggmt.hpp"
#include "ymflow/model.hpp"
#include "ymflow/report.hpp"
#include "ymflow/spectral.hpp"

namespace py = pybind11;
using namespace ymflow;

namespace {

// records cross the boundary as JSON text; the package decodes them
std::string ggmt_json(int d, double p, const std::string& pathway) {
  const auto pw = ggmt::parse_pathway(pathway);
  if (!pw) throw std::invalid_argument("unknown pathway: " + pathway);
  return report::to_json(ggmt::compute_B(make_dimension(d), p, *pw)).dump();
}

std::string spectrum_json(int d, const std::string& kind, double R, std::size_t N, int k, bool extrapolate) {
  const auto pk = spectral::parse_potential(kind);
  if (!pk) throw std::invalid_argument("unknown operator: " + kind);
  const spectral::OperatorSpec spec{make_dimension(d), *pk};
  const auto r = extrapolate ? spectral::eigen_extrapolated(spec, R, N, k)
                             : spectral::eigen_lowest(spectral::discretize(spec, RadialGrid(R, N)), k);
  return report::to_json(r).dump();
}

ProfileKind profile_kind(const std::string& name) {
  for (auto k : {ProfileKind::W, ProfileKind::V, ProfileKind::qFree, ProfileKind::QSusy, ProfileKind::gTilde,
                 ProfileKind::gMode, ProfileKind::sigmaWeight}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown profile: " + name);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  py::class_<Dimension>(m, "Dimension")
      .def_readonly("d", &Dimension::d)
      .def_readonly("n", &Dimension::n)
      .def_readonly("a", &Dimension::a)
      .def_readonly("b", &Dimension::b)
      .def_readonly("kappa0", &Dimension::kappa0)
      .def_readonly("kappa1", &Dimension::kappa1)
      .def_readonly("g_sigma_norm", &Dimension::g_sigma_norm)
      .def("has_profile", &Dimension::has_profile)
      .def("__repr__", [](const Dimension& x) { return "Dimension(d=" + std::to_string(x.d) + ")"; });

  m.def("make_dimension", &make_dimension, py::arg("d"));
  m.def(
      "profile",
      [](const std::string& kind, int d, const std::vector<double>& rho) {
        const auto k = profile_kind(kind);
        const auto dim = make_dimension(d);
        std::vector<double> out;
        out.reserve(rho.size());
        for (double r : rho) out.push_back(eval_profile(k, dim, r));
        return out;
      },
      py::arg("kind"), py::arg("d"), py::arg("rho"));
  m.def(
      "positivity_threshold", [](int d) { return ggmt::positivity_threshold(make_dimension(d)); }, py::arg("d"));
  m.def("mu", &ggmt::mu, py::arg("p"), py::arg("alpha"));
  m.def("_ggmt", &ggmt_json, py::arg("d"), py::arg("p"), py::arg("pathway"));
  m.def("_spectrum", &spectrum_json, py::arg("d"), py::arg("kind"), py::arg("R"), py::arg("N"), py::arg("k"),
        py::arg("extrapolate"));
  m.def("criterion_ids", &acceptance::criterion_ids);
  m.def(
      "run_criterion",
      [](int id) {
        py::gil_scoped_release release;
        return acceptance::run_criterion(id);
      },
      py::arg("id"));

  py::class_<acceptance::CriterionResult>(m, "CriterionResult")
      .def_readonly("id", &acceptance::CriterionResult::id)
      .def_readonly("name", &acceptance::CriterionResult::name)
      .def_readonly("passed", &acceptance::CriterionResult::passed)
      .def_readonly("detail", &acceptance::CriterionResult::detail)
      .def_readonly("seconds", &acceptance::CriterionResult::seconds)
      .def("__str__", &acceptance::format_line);

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const std::invalid_argument& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });
}
