#include "liek/config.hpp"
#include "liek/extensions.hpp"
#include "liek/quantize.hpp"
#include "liek/verify.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;

namespace {

// shared_ptr<const ...> does not work as a pybind11 holder; wrap it.
struct PyGeometry {
  liek::GeometryPtr ptr;
};

liek::RunConfig config_from_text(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{')
    return liek::parse_config_json(text);
  return liek::parse_config_text(text);
}

liek::DenseOperator py_assemble(const PyGeometry& g, const std::string& symbol,
                                double r, const std::string& profile,
                                bool density_correction,
                                bool force_quadrature) {
  const liek::Symbol sym = liek::symbol_from_name(*g.ptr, symbol);
  const liek::Cutoff chi = liek::make_cutoff(*g.ptr, r, profile);
  liek::AssembleOptions opts;
  opts.density_correction = density_correction;
  opts.force_quadrature = force_quadrature;
  return liek::assemble_kernel(g.ptr, sym, chi, opts);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Kohn-Nirenberg quantization on 1-D model geometries: kernels, "
      "operator algebra, symbol recovery, and the verification suite";

  py::class_<PyGeometry>(m, "Geometry")
      .def_property_readonly(
          "kind", [](const PyGeometry& g) { return to_string(g.ptr->kind()); })
      .def_property_readonly(
          "n", [](const PyGeometry& g) { return g.ptr->size(); })
      .def_property_readonly(
          "window", [](const PyGeometry& g) { return g.ptr->window(); })
      .def_property_readonly(
          "spacing", [](const PyGeometry& g) { return g.ptr->spacing(); })
      .def_property_readonly(
          "nodes_x", [](const PyGeometry& g) { return g.ptr->nodes_x(); })
      .def_property_readonly(
          "nodes_s", [](const PyGeometry& g) { return g.ptr->nodes_s(); })
      .def("straighten",
           [](const PyGeometry& g, double x) { return g.ptr->straighten(x); })
      .def("unstraighten",
           [](const PyGeometry& g, double s) { return g.ptr->unstraighten(s); })
      .def("__repr__", [](const PyGeometry& g) {
        return "<Geometry " + to_string(g.ptr->kind()) +
               " n=" + std::to_string(g.ptr->size()) + ">";
      });

  py::class_<liek::DenseOperator>(m, "Operator")
      .def_property_readonly("order", &liek::DenseOperator::order)
      .def_property_readonly(
          "geometry",
          [](const liek::DenseOperator& p) { return PyGeometry{p.geometry()}; })
      .def("kernel",
           [](const liek::DenseOperator& p) { return p.kernel(); })
      .def("action", &liek::DenseOperator::action_matrix)
      .def("apply",
           [](const liek::DenseOperator& p, const Eigen::VectorXcd& u) {
             return p.apply(liek::GridFunction{p.geometry(), u}).values;
           })
      .def("provenance",
           [](const liek::DenseOperator& p) {
             return p.provenance().describe();
           })
      .def("__repr__", [](const liek::DenseOperator& p) {
        return "<Operator " + p.provenance().describe() + ">";
      });

  m.def(
      "make_geometry",
      [](const std::string& kind, int n, double window, double scattering_c) {
        liek::ModelParams params;
        params.n = n;
        params.window = window;
        params.scattering_c = scattering_c;
        return PyGeometry{
            liek::make_model(liek::model_kind_from_string(kind), params)};
      },
      py::arg("kind"), py::arg("n") = 128, py::arg("window") = 10.0,
      py::arg("scattering_c") = 1.0);

  m.def("assemble", &py_assemble, py::arg("geometry"), py::arg("symbol"),
        py::arg("r") = -1.0, py::arg("profile") = "smooth",
        py::arg("density_correction") = true,
        py::arg("force_quadrature") = false,
        "Quantize a registry symbol on a model grid");

  m.def("compose", &liek::compose);
  m.def("adjoint", &liek::adjoint);
  m.def("commutator", &liek::commutator);
  m.def("add", &liek::add);
  m.def("subtract", &liek::subtract);
  m.def("identity_operator",
        [](const PyGeometry& g) { return liek::identity_operator(g.ptr); });
  m.def(
      "conjugate_by_power",
      [](const liek::DenseOperator& p, std::complex<double> s, int face) {
        return liek::conjugate_by_power(p, s, face);
      },
      py::arg("op"), py::arg("s"), py::arg("face") = 0);

  m.def(
      "recover_symbol",
      [](const liek::DenseOperator& p, double x, double xi,
         std::vector<double> ladder, std::optional<double> order) {
        const liek::SymbolRecovery rec =
            liek::recover_symbol(p, x, xi, std::move(ladder), order);
        py::dict out;
        out["value"] = rec.value;
        out["error"] = rec.error;
        out["ladder"] = rec.ladder;
        out["raw"] = rec.raw;
        return out;
      },
      py::arg("op"), py::arg("x"), py::arg("xi"),
      py::arg("ladder") = std::vector<double>{},
      py::arg("order") = std::nullopt,
      "Oscillatory-testing recovery of the symbol at one phase space point");

  m.def("write_kernel_csv", &liek::write_kernel_csv);
  m.def("write_kernel_binary", &liek::write_kernel_binary);
  m.def("read_kernel_binary",
        [](const PyGeometry& g, const std::string& path) {
          return liek::read_kernel_binary(g.ptr, path);
        });

  m.def("default_config",
        []() { return liek::serialize_config(liek::RunConfig{}); });
  m.def(
      "run_suite_json",
      [](const std::string& config_text) {
        const liek::RunConfig cfg = config_from_text(config_text);
        return liek::summary_json(liek::run_suite(cfg));
      },
      py::arg("config_text"),
      "Run the verification suite from config text (block or JSON); returns "
      "the JSON summary");
}
