#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dilres/cli.hpp"
#include "dilres/hamiltonian.hpp"
#include "dilres/spectral.hpp"
#include "dilres/verify.hpp"

namespace py = pybind11;
using namespace dilres;

namespace {

// JSON values cross the boundary as their text form; the Python side parses them.
std::string dump(const nlohmann::json& j) { return j.dump(); }

RunConfig config_from(const std::string& toml_text) {
    RunConfig c = parse_config(toml_text);
    validate(c);
    return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Bindings to the dilres numerical core";

    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    m.def("config_json", [](const std::string& text) { return dump(config_from(text).to_json()); },
          py::arg("toml_text"), "Parse and validate a TOML configuration; returns its JSON echo.");

    m.def("grid_json",
          [](int n_radial, double r_max, const std::string& group, double lambda) {
              return dump(to_json(build_mode_grid(n_radial, r_max, parse_angular_group(group), lambda)));
          },
          py::arg("n_radial"), py::arg("r_max"), py::arg("group") = "inversion-only", py::arg("Lambda") = 1.0);

    m.def("model_json", [](const std::string& text) { return dump(to_json(build_model(config_from(text).model))); },
          py::arg("toml_text"));

    m.def("hamiltonian",
          [](const std::string& text) {
              const RunConfig c = config_from(text);
              const AtomModel model = build_model(c.model);
              const ModeGrid grid = build_grid(c.grid);
              const FockBasis basis = build_fock_basis(grid, c.n_ph);
              if (model.dim() * static_cast<Eigen::Index>(basis.dim()) > kDenseLimit)
                  throw ConfigError("fock: total dimension above the dense limit");
              return assemble_H(model, grid, basis, KappaPair::uniform(c.scan.kappa_end), c.scan.theta, c.scan.g)
                  .matrix;
          },
          py::arg("toml_text"), "Dense H(kappa_end, theta) for the configuration's model, grid and N_ph.");

    m.def("eigs",
          [](const CMatrix& h) {
              const SpectrumResult s = eigs(h);
              return py::make_tuple(s.eigenvalues, s.residuals, dump(to_json(s)));
          },
          py::arg("matrix"), "Eigenvalues (sorted), residuals and the JSON summary.");

    m.def("spectrum_csv", [](const CMatrix& h) { return spectrum_csv(eigs(h)); }, py::arg("matrix"));

    m.def("run_suite",
          [](const std::string& name, std::uint64_t seed) {
              const Suite s = run_suite(name, SuiteOptions{seed, std::nullopt});
              nlohmann::json checks = nlohmann::json::array();
              for (const Check& c : s.checks) checks.push_back(c.to_json());
              return dump({{"suite", s.name}, {"pass", s.pass()}, {"checks", checks}});
          },
          py::arg("name"), py::arg("seed") = 0);

    m.def("suite_names", &default_suite_names);

    m.def("run",
          [](const std::string& command, const std::string& text, const std::string& out_dir) {
              RunConfig c = parse_config(text);
              c.out_dir = out_dir;
              py::gil_scoped_release release;
              return run_command(command, c);
          },
          py::arg("command"), py::arg("toml_text"), py::arg("out_dir"),
          "Runs spectrum/scan/verify like the command-line tool; returns its exit code.");
}
