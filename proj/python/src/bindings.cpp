#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "ktop/classical.hpp"
#include "ktop/harness.hpp"
#include "ktop/quantum.hpp"
#include "ktop/rotation_io.hpp"

namespace py = pybind11;
using namespace ktop;

namespace {

PhasePoint point_from(double theta, double phi) { return PhasePoint::from_angles(theta, phi); }

py::dict record_dict(const ComparisonRecord& r) {
  py::dict d;
  d["step"] = r.step;
  d["jx_q"] = r.jx_q;
  d["jy_q"] = r.jy_q;
  d["jz_q"] = r.jz_q;
  d["jx_m"] = r.jx_m;
  d["jy_m"] = r.jy_m;
  d["jz_m"] = r.jz_m;
  d["x_c"] = r.x_c;
  d["y_c"] = r.y_c;
  d["z_c"] = r.z_c;
  d["max_abs_moment_residual"] = r.max_abs_moment_residual;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "kicked top, spin coherent states and moment propagators";
  // Later registrations are tried first, so the derived type goes last.
  auto base = py::register_exception<Error>(m, "KtopError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

  m.attr("__version__") = std::string(library_version());
  m.attr("CSV_HEADER") = kCsvHeader;

  m.def("spin_matrices", [](int two_j) {
    const SpinRep s = make_spin_rep(SpinJ(two_j));
    py::dict d;
    d["jx"] = s.jx;
    d["jy"] = s.jy;
    d["jz"] = s.jz;
    d["jplus"] = s.jplus;
    d["jminus"] = s.jminus;
    return d;
  }, py::arg("two_j"), "Spin matrices in the |j, j - r> basis.");

  m.def("unitary_exp", &unitary_exp, py::arg("h"), py::arg("t"), py::arg("tol") = 1e-12,
        "exp(-i t h) for Hermitian h.");

  m.def("floquet_operator", [](int two_j, double k, double p) { return floquet_operator({SpinJ(two_j), k, p}); },
        py::arg("two_j"), py::arg("k"), py::arg("p") = std::numbers::pi / 2);

  m.def("coherent_vector",
        [](int two_j, double theta, double phi, bool normalized) {
          return coherent_vector(SpinJ(two_j), point_from(theta, phi), normalized).components;
        },
        py::arg("two_j"), py::arg("theta"), py::arg("phi"), py::arg("normalized") = true);

  m.def("coherent_expectations",
        [](int two_j, double theta, double phi) {
          const CoherentExpectations e = coherent_expectations(SpinJ(two_j), point_from(theta, phi));
          return py::make_tuple(e.jx(), e.jy(), e.jz);
        },
        py::arg("two_j"), py::arg("theta"), py::arg("phi"), "(<Jx>, <Jy>, <Jz>) in the normalized state.");

  m.def("identity_resolution_residual",
        [](int two_j, std::optional<int> nodes) {
          return nodes ? identity_resolution_residual(SpinJ(two_j), {*nodes, *nodes})
                       : identity_resolution_residual(SpinJ(two_j));
        },
        py::arg("two_j"), py::arg("nodes") = std::nullopt);

  m.def("moments_from_delta",
        [](int two_j, double theta, double phi) { return moments_from_delta(SpinJ(two_j), point_from(theta, phi)).values; },
        py::arg("two_j"), py::arg("theta"), py::arg("phi"));
  m.def("moments_from_density",
        [](const CMatrix& rho) { return moments_from_density(SpinJ(static_cast<int>(rho.rows()) - 1), rho).values; },
        py::arg("rho"));
  m.def("spin_expectations",
        [](const CMatrix& f) {
          const SpinExpectations e = spin_expectations({SpinJ(static_cast<int>(f.rows()) - 1), f});
          return py::make_tuple(e.jx, e.jy, e.jz);
        },
        py::arg("moments"));

  m.def("rotation_matrix", [](int two_j) { return rotation_matrix(SpinJ(two_j)).entries(); }, py::arg("two_j"),
        "R as a (2j+1)^2 x (2j+1)^2 array; row n*(2j+1)+m, column r*(2j+1)+s.");
  m.def("kick_multiplier",
        [](int two_j, double k, const std::string& variant) {
          return kick_spectrum(SpinJ(two_j), k, parse_kick_variant(variant)).multiplier();
        },
        py::arg("two_j"), py::arg("k"), py::arg("variant") = "eigen");
  m.def("quantum_step",
        [](const CMatrix& f, double k, const std::string& variant) {
          const SpinJ j(static_cast<int>(f.rows()) - 1);
          return quantum_step(rotation_matrix(j), kick_spectrum(j, k, parse_kick_variant(variant)), {j, f}).values;
        },
        py::arg("moments"), py::arg("k"), py::arg("variant") = "eigen");

  m.def("classical_step",
        [](std::array<double, 3> p, double k) {
          const SpherePoint q = classical_step({p[0], p[1], p[2]}, k);
          return std::array<double, 3>{q.x, q.y, q.z};
        },
        py::arg("point"), py::arg("k"));
  m.def("classical_step_gamma",
        [](Complex gamma, double k) { return *classical_step_stereo(PhasePoint::from_gamma(gamma), k).north_gamma(); },
        py::arg("gamma"), py::arg("k"), "Stereographic step; fails if the image is the south pole.");

  m.def("heisenberg_map_residual",
        [](int two_j, double k, bool as_printed) {
          return heisenberg_map_residual({SpinJ(two_j), k},
                                         as_printed ? HeisenbergForm::AsPrinted : HeisenbergForm::RotatedRaising);
        },
        py::arg("two_j"), py::arg("k"), py::arg("as_printed") = false);

  m.def("run_grid_point",
        [](const std::string& config_json, int two_j, double k) {
          const ExperimentConfig c = parse_config(config_json);
          py::list rows;
          for (const ComparisonRecord& r : run_grid_point(c, two_j, k)) rows.append(record_dict(r));
          return rows;
        },
        py::arg("config_json"), py::arg("two_j"), py::arg("k"),
        "Rows for one grid point; config_json overrides the default configuration.");

  m.def("run_experiment",
        [](const std::string& config_json) {
          const RunOutput out = run_experiment(parse_config(config_json));
          return py::make_tuple(out.csv_files, out.sidecars);
        },
        py::arg("config_json"));

  m.def("validate",
        [](int two_j_max, double k, const std::string& kc_variant) {
          ValidationOptions o;
          o.two_j_max = two_j_max;
          o.k = k;
          o.kc_variant = parse_classical_kick_variant(kc_variant);
          const ValidationReport r = run_validation(o);
          return py::make_tuple(r.passed(), r.json());
        },
        py::arg("two_j_max") = 1, py::arg("k") = 3.0, py::arg("kc_variant") = "tensor",
        "Runs the invariant suites; returns (passed, report JSON).");

  m.def("export_rotation_matrix", [](const std::filesystem::path& path, int two_j) {
    export_rotation_matrix(path, SpinJ(two_j));
  }, py::arg("path"), py::arg("two_j"));
}
