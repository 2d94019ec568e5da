#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <optional>
#include <stdexcept>

#include "mlf/isomap.hpp"
#include "mlf/modular.hpp"
#include "mlf/suites.hpp"
#include "mlf/symgen.hpp"
#include "mlf/wick.hpp"

namespace py = pybind11;
using namespace mlf;

namespace {

// Accepts 5.5, 10 or "11/2".
HalfInt to_half(const py::object& o) {
  if (py::isinstance<py::str>(o)) {
    const std::string s = o.cast<std::string>();
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
      if (s.substr(slash + 1) != "2") throw py::value_error("expected k/2");
      return HalfInt::from_twice(std::stol(s.substr(0, slash)));
    }
    return to_half(py::float_(std::stod(s)));
  }
  const double v = o.cast<double>();
  if (std::abs(2 * v - std::round(2 * v)) > 1e-12) throw py::value_error("not a multiple of 1/2");
  return HalfInt::from_twice(std::lround(2 * v));
}

py::dict window(const WindowCheck& w) {
  py::dict d;
  d["residual"] = w.residual;
  d["window_energy"] = w.window_energy;
  d["window_states"] = w.window_states;
  return d;
}

StressRealization realization(const std::string& s) {
  if (s == "real") return StressRealization::RealFermion;
  if (s == "complex") return StressRealization::ComplexFermion;
  if (s == "sugawara") return StressRealization::EmbeddedSugawara;
  throw py::value_error("realization must be real, complex or sugawara");
}

Ordering ordering(const std::string& s) {
  if (s == "right") return Ordering::Right;
  if (s == "left") return Ordering::Left;
  throw py::value_error("ordering must be right or left");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "multilocal fermion verification core";

  py::register_exception<std::length_error>(m, "ResourceLimit", PyExc_MemoryError);

  // isomorphism
  m.def("beta_mode", [](int n, int k, const py::object& nu) { return beta_mode(n, k, to_half(nu)).value(); },
        py::arg("n"), py::arg("k"), py::arg("nu"));
  m.def("beta_mode_inverse", [](int n, const py::object& mode) {
    auto [k, nu] = beta_mode_inverse(n, to_half(mode));
    return py::make_tuple(k, nu.value());
  });
  m.def("iso_car_residual", [](int n, const py::object& c) { return iso_car_residual(n, to_half(c)); },
        py::arg("n"), py::arg("cutoff"));
  m.def("iso_correlator_residual", &iso_correlator_residual, py::arg("n"), py::arg("points"), py::arg("samples"),
        py::arg("seed"));

  // correlators
  m.def("pfaffian", [](const Eigen::MatrixXcd& a) { return pfaffian(a); });
  m.def("hafnian", &hafnian);

  // symmetry generators
  m.def("current_ccr", [](int a, int b, const py::object& c) { return window(current_ccr(a, b, to_half(c))); });
  m.def("vacuum_bracket", [](const std::string& kind, int mm, const py::object& c) {
    return vacuum_bracket(realization(kind), mm, to_half(c));
  }, py::arg("realization"), py::arg("m"), py::arg("cutoff"));
  m.def("stress_mode_residual", [](int n, const py::object& c, bool charged) {
    return window(stress_mode_identity(n, to_half(c), charged).check);
  }, py::arg("n"), py::arg("cutoff"), py::arg("charged") = false);
  m.def("gauge_mixing", [](double theta, double phase, const py::object& c) {
    const auto g = gauge_mixing(theta, CirclePoint::from_phase(phase), to_half(c));
    py::dict d;
    d["finite"] = g.finite;
    d["finite_without_phase"] = g.finite_literal;
    d["infinitesimal"] = g.infinitesimal;
    d["infinitesimal_without_phase"] = g.infinitesimal_literal;
    return d;
  }, py::arg("theta"), py::arg("phase"), py::arg("cutoff"));

  // Ramond sector
  m.def("ramond_current_one_point", &ramond_current_one_point);
  m.def("ramond_current_two_point", &ramond_current_two_point);
  m.def("ramond_twisted_residual", &ramond_twisted_residual, py::arg("samples"), py::arg("seed"));
  m.def("ramond_L0_expectation", &ramond_L0_expectation, py::arg("cutoff"));
  m.def("ramond_L0_point_split", [](double l) { return ramond_L0_point_split(l); }, py::arg("lam"));

  // modular geometry
  py::class_<IntervalFamily>(m, "IntervalFamily")
      .def_static("general", &IntervalFamily::general, py::arg("arcs"))
      .def_static("symmetric", &IntervalFamily::symmetric, py::arg("n"), py::arg("a"), py::arg("b"))
      .def_property_readonly("size", &IntervalFamily::size)
      .def_property_readonly("is_symmetric", &IntervalFamily::is_symmetric)
      .def_property_readonly("arcs", &IntervalFamily::arcs)
      .def("locate", &IntervalFamily::locate);
  m.def("uniformizer", &uniformizer);
  m.def("preimages", [](const IntervalFamily& f, double X) {
    py::list out;
    for (const auto& p : preimages(f, X)) {
      py::dict d;
      d["z"] = p.z;
      d["theta"] = p.theta;
      d["theta_prime"] = p.theta_prime;
      d["sqrt_z_prime"] = p.sqrt_z_prime;
      out.append(d);
    }
    return out;
  });
  m.def("K_of_X", &K_of_X);
  m.def("diagonalizer_matrices", [](int n) {
    const auto l = B_and_M(n);
    return py::make_tuple(l.B, l.m);
  });
  m.def("diagonalizer_check", [](int n) {
    const auto l = diagonalizer_check(n);
    py::dict d;
    d["intertwining"] = l.intertwining;
    d["spectrum"] = l.spectrum;
    d["unitarity"] = l.unitarity;
    return d;
  });

  py::class_<ModularGeometry>(m, "ModularGeometry")
      .def(py::init<IntervalFamily>(), py::arg("family"))
      .def_property_readonly("size", &ModularGeometry::size)
      .def_property_readonly("base_point", &ModularGeometry::base_point)
      .def_property_readonly("base_phase", &ModularGeometry::base_phase)
      .def("O", [](const ModularGeometry& g, double X, const std::string& ord) { return g.O_of_X(X, ordering(ord)).O; },
           py::arg("X"), py::arg("ordering") = "right")
      .def("O_closed_form", &ModularGeometry::O_closed_form)
      .def("cocycle", &ModularGeometry::cocycle, py::arg("t"), py::arg("X"))
      .def("cocycle_residual", &ModularGeometry::cocycle_residual, py::arg("t"), py::arg("s"), py::arg("X"))
      .def("chi_two_point", [](const ModularGeometry& g, double X, double Y, const std::string& ord) {
        return g.chi_two_point(X, Y, ordering(ord));
      }, py::arg("X"), py::arg("Y"), py::arg("ordering") = "right")
      .def("diagonalization_defect", [](const ModularGeometry& g, double X, double Y, const std::string& ord) {
        return g.diagonalization_defect(X, Y, ordering(ord));
      }, py::arg("X"), py::arg("Y"), py::arg("ordering") = "right")
      .def("rotated_chi_residual", &ModularGeometry::rotated_chi_residual)
      .def("pair_correlator_residual", &ModularGeometry::pair_correlator_residual)
      .def("trajectory_csv", [](const ModularGeometry& g, int samples) { return trajectory_csv(g, samples); },
           py::arg("samples") = 41);

  // suites
  m.def("run_suite_json", [](const std::string& suite, int n, const py::object& cutoff, std::optional<double> tol,
                             std::vector<double> intervals, int samples, std::uint64_t seed) {
    SuiteConfig c;
    c.suite = suite;
    c.n = n;
    if (!cutoff.is_none()) c.cutoff = to_half(cutoff);
    else if (suite == "symmetries") c.cutoff = HalfInt::from_twice(15);
    else if (suite == "ramond") c.cutoff = HalfInt::integer(10);
    c.tol = tol;
    c.intervals = std::move(intervals);
    c.samples = samples;
    c.seed = seed;
    try {
      c.validate();
    } catch (const std::invalid_argument& e) {
      throw py::value_error(e.what());
    }
    py::gil_scoped_release release;
    return report_json(run_suite(c));
  }, py::arg("suite"), py::arg("n") = 2, py::arg("cutoff") = py::none(), py::arg("tol") = py::none(),
     py::arg("intervals") = std::vector<double>{}, py::arg("samples") = 200, py::arg("seed") = 1);
}
