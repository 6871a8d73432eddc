#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "torus/equilibrium_solver.h"
#include "torus/errors.h"
#include "torus/gravity_kernels.h"
#include "torus/io.h"
#include "torus/periodic_series.h"
#include "torus/validation.h"

namespace py = pybind11;

namespace torus {
namespace {

std::vector<double> CosList(const PeriodicSeries& s) {
  return {s.cos_coeffs().begin(), s.cos_coeffs().end()};
}

std::vector<double> SinList(const PeriodicSeries& s) {
  return {s.sin_coeffs().begin(), s.sin_coeffs().end()};
}

}  // namespace
}  // namespace torus

PYBIND11_MODULE(_core, m) {
  using namespace torus;
  m.doc() = "Equilibria of thin self-gravitating toroidal strata";

  static py::object error_type = [&m] {
    py::object base = py::reinterpret_borrow<py::object>(PyExc_RuntimeError);
    py::object t = py::reinterpret_steal<py::object>(
        PyErr_NewException("torus_equilibria.TorusError", base.ptr(), nullptr));
    m.attr("TorusError") = t;
    return t;
  }();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const TorusError& e) {
      py::object exc = error_type(e.what());
      exc.attr("code") = ErrorCodeName(e.code());
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  py::class_<PeriodicSeries>(m, "PeriodicSeries")
      .def(py::init<int>(), py::arg("truncation"))
      .def(py::init<double, std::vector<double>, std::vector<double>>(), py::arg("half_a0"),
           py::arg("cos"), py::arg("sin"))
      .def_property_readonly("truncation", &PeriodicSeries::truncation)
      .def_property_readonly("half_a0", &PeriodicSeries::half_a0)
      .def_property_readonly("cos", &CosList)
      .def_property_readonly("sin", &SinList)
      .def("__call__", &PeriodicSeries::operator(), py::arg("theta"))
      .def("sample", &PeriodicSeries::Sample, py::arg("points"))
      .def("__repr__", [](const PeriodicSeries& s) {
        return "<PeriodicSeries N=" + std::to_string(s.truncation()) + ">";
      });

  m.def("theta_grid", &ThetaGrid, py::arg("points"));
  m.def(
      "analyze",
      [](const std::vector<double>& samples, int truncation) {
        return Analyze(samples, truncation);
      },
      py::arg("samples"), py::arg("truncation"));
  m.def("differentiate", &Differentiate, py::arg("series"), py::arg("order"));
  m.def("sobolev_norm", &SobolevNorm, py::arg("series"), py::arg("order"));
  m.def(
      "bracket_mean", [](const PeriodicSeries& s) { return BracketMean(s); },
      py::arg("series"));

  py::class_<TorusConfig>(m, "TorusConfig")
      .def(py::init([](double epsilon, double r0, double omega0, double mu_g) {
             TorusConfig c;
             c.epsilon = epsilon;
             c.r0 = r0;
             c.omega0 = omega0;
             c.mu_g = mu_g;
             return c;
           }),
           py::arg("epsilon") = 0.02, py::arg("r0") = 1.0, py::arg("omega0") = 1.0,
           py::arg("mu_g") = 1.0)
      .def_readwrite("epsilon", &TorusConfig::epsilon)
      .def_readwrite("r0", &TorusConfig::r0)
      .def_readwrite("omega0", &TorusConfig::omega0)
      .def_readwrite("mu_g", &TorusConfig::mu_g);

  py::class_<ShapeState>(m, "ShapeState")
      .def_readonly("rho", &ShapeState::rho)
      .def_readonly("w", &ShapeState::w)
      .def("x_norm", &ShapeState::XNorm)
      .def_static("leading", &ShapeState::Leading, py::arg("modes"))
      .def_static("random", &RandomAdmissibleState, py::arg("modes"), py::arg("amplitude"),
                  py::arg("seed"));

  m.def(
      "apply_l",
      [](const ShapeState& x) {
        const LinearImage img = ApplyL(x);
        return py::make_tuple(img.p, img.v);
      },
      py::arg("state"));
  m.def("invert_l", &InvertL, py::arg("p"), py::arg("v"));

  py::class_<SolverDiagnostics>(m, "SolverDiagnostics")
      .def_readonly("iterations", &SolverDiagnostics::iterations)
      .def_readonly("converged", &SolverDiagnostics::converged)
      .def_readonly("final_step", &SolverDiagnostics::final_step)
      .def_readonly("ball_radius", &SolverDiagnostics::ball_radius)
      .def_readonly("max_iterate_norm", &SolverDiagnostics::max_iterate_norm)
      .def_readonly("inside_ball", &SolverDiagnostics::inside_ball)
      .def_readonly("contraction_ratio", &SolverDiagnostics::contraction_ratio)
      .def_readonly("steps", &SolverDiagnostics::steps)
      .def_readonly("residual_max", &SolverDiagnostics::residual_max);

  py::class_<EquilibriumSolution>(m, "EquilibriumSolution")
      .def_readonly("config", &EquilibriumSolution::config)
      .def_readonly("state", &EquilibriumSolution::state)
      .def_readonly("s", &EquilibriumSolution::s)
      .def_readonly("omega_rate", &EquilibriumSolution::omega_rate)
      .def_readonly("j_sq", &EquilibriumSolution::j_sq)
      .def_readonly("c_flux", &EquilibriumSolution::c_flux)
      .def_readonly("c_eps", &EquilibriumSolution::c_eps)
      .def_readonly("f_mean", &EquilibriumSolution::f_mean)
      .def_readonly("diagnostics", &EquilibriumSolution::diagnostics)
      .def("to_json", &SolutionToJson)
      .def_static("from_json", &SolutionFromJson, py::arg("text"));

  m.def(
      "solve",
      [](const TorusConfig& cfg, int modes, double tol, int max_iter, bool enforce_ball,
         int alpha_nodes, int eta_nodes) {
        SolverConfig solver;
        solver.modes = modes;
        solver.tol = tol;
        solver.max_iter = max_iter;
        solver.enforce_ball = enforce_ball;
        solver.quad.alpha_nodes = alpha_nodes;
        solver.quad.eta_nodes = eta_nodes;
        py::gil_scoped_release release;
        return FixedPointSolve(cfg, solver);
      },
      py::arg("config"), py::arg("modes") = 32, py::arg("tol") = 1e-10,
      py::arg("max_iter") = 100, py::arg("enforce_ball") = false,
      py::arg("alpha_nodes") = 10, py::arg("eta_nodes") = 10);

  m.def(
      "validate",
      [](const EquilibriumSolution& sol) {
        ValidationReport report;
        {
          py::gil_scoped_release release;
          report = ValidateSolution(sol);
        }
        py::dict out;
        for (const ValidationCheck& c : report.checks) {
          out[py::str(c.name)] = py::make_tuple(c.value, c.tolerance, c.pass);
        }
        return out;
      },
      py::arg("solution"));

  m.def(
      "k3_scalar",
      [](double eps) { return K3Scalar(QuadratureScheme::Build(eps, QuadratureParams{})); },
      py::arg("epsilon"));
  m.def("canonical_integrals", [](int max_n) {
    py::list out;
    for (const CanonicalIntegral& c : CanonicalIntegrals(max_n)) {
      out.append(py::make_tuple(c.name, c.parameter, c.value, c.exact));
    }
    return out;
  }, py::arg("max_n") = 16);
}
