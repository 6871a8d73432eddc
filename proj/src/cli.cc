#include "torus/cli.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "fmt/format.h"
#include "torus/equilibrium_solver.h"
#include "torus/gravity_kernels.h"
#include "torus/io.h"
#include "torus/validation.h"

namespace torus {

namespace {

constexpr int kSweepCsvVersion = 1;
constexpr int kKernelCsvVersion = 1;
constexpr int kImageMaxMode = 6;
constexpr double kRandomStateAmplitude = 0.5;

struct RunConfig {
  TorusConfig torus;
  SolverConfig solver;
  double eps_from = 0.0;
  double eps_to = 0.0;
  double eps_factor = 0.5;
  std::vector<double> eps_list;
  std::string out_dir = ".";
  std::string format = "json";
  std::string solution_path;
  std::uint64_t seed = 1;
  bool verbose = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void EnsureDir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw TorusError(ErrorCode::kIo, "cannot create " + dir + ": " + ec.message());
}

std::string Join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

std::vector<double> SweepValues(const RunConfig& rc) {
  if (!rc.eps_list.empty()) return rc.eps_list;
  if (!(rc.eps_from > 0.0) || !(rc.eps_to > 0.0)) {
    throw UsageError("sweep needs --eps or --eps-from/--eps-to");
  }
  if (!(rc.eps_factor > 0.0) || rc.eps_factor == 1.0) {
    throw UsageError("--eps-factor must be positive and != 1");
  }
  const bool down = rc.eps_factor < 1.0;
  if (down != (rc.eps_to <= rc.eps_from)) throw UsageError("empty epsilon range");
  std::vector<double> values;
  const double slack = 1e-9;
  for (double e = rc.eps_from;; e *= rc.eps_factor) {
    if (down ? e < rc.eps_to * (1.0 - slack) : e > rc.eps_to * (1.0 + slack)) break;
    values.push_back(e);
    if (values.size() > 1000) throw UsageError("epsilon range too long");
  }
  if (values.empty()) throw UsageError("empty epsilon range");
  return values;
}

EquilibriumSolution Solve(const RunConfig& rc, double eps, std::ostream& out) {
  TorusConfig cfg = rc.torus;
  cfg.epsilon = eps;
  IterationObserver observer;
  if (rc.verbose) {
    observer = [&out](int k, const ShapeState& x, double step) {
      out << fmt::format("  iter {:3d}  step {:.3e}  norm {:.6f}\n", k, step,
                         x.XNorm());
    };
  }
  return FixedPointSolve(cfg, rc.solver, observer);
}

void WriteSolution(const EquilibriumSolution& sol, const std::string& dir) {
  EnsureDir(dir);
  WriteFileAtomic(Join(dir, "solution.json"), SolutionToJson(sol));
  WriteFileAtomic(Join(dir, "profiles.csv"), ProfilesCsv(sol));
}

void PrintSummary(const EquilibriumSolution& sol, std::ostream& out) {
  const SolverDiagnostics& d = sol.diagnostics;
  out << fmt::format(
      "eps {:g}: converged in {} iterations, step {:.3e}, contraction {:.4f}, "
      "max norm {:.4f} (ball {:.4f}{})\n",
      sol.config.epsilon, d.iterations, d.final_step, d.contraction_ratio,
      d.max_iterate_norm, d.ball_radius, d.inside_ball ? "" : ", left the ball");
  out << fmt::format("  c(eps) {:.12g}  <F> {:.12g}  J^2 {:.12g}  C {:.12g}\n",
                     sol.c_eps, sol.f_mean, sol.j_sq, sol.c_flux);
}

int RunSolve(const RunConfig& rc, std::ostream& out) {
  const EquilibriumSolution sol = Solve(rc, rc.torus.epsilon, out);
  WriteSolution(sol, rc.out_dir);
  PrintSummary(sol, out);
  return kExitOk;
}

int RunSweep(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const std::vector<double> values = SweepValues(rc);
  EnsureDir(rc.out_dir);
  std::string csv = fmt::format("# torus-sweep v{}\n", kSweepCsvVersion);
  csv +=
      "epsilon,rho_norm,w_dev_norm,s_dev_over_eps,omega_ratio,iterations,"
      "contraction_ratio,status\n";
  int worst = kExitOk;
  std::vector<EquilibriumSolution> solved;
  for (double eps : values) {
    const std::string dir = Join(rc.out_dir, fmt::format("eps_{:g}", eps));
    try {
      EquilibriumSolution sol = Solve(rc, eps, out);
      WriteSolution(sol, dir);
      PrintSummary(sol, out);
      const AsymptoticMetrics m = ComputeAsymptoticMetrics(sol);
      csv += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{},{:.17g},ok\n",
                         eps, m.rho_norm, m.w_dev_norm, m.s_dev_over_eps,
                         m.omega_ratio, sol.diagnostics.iterations,
                         sol.diagnostics.contraction_ratio);
      solved.push_back(std::move(sol));
    } catch (const TorusError& e) {
      err << fmt::format("eps {:g}: {}\n", eps, e.what());
      csv += fmt::format("{:.17g},,,,,,,{}\n", eps, ErrorCodeName(e.code()));
      const int code = ExitCodeFor(e.code());
      if (code == kExitIo || code == kExitUsage) throw;
      worst = std::max(worst, code);
    }
  }
  WriteFileAtomic(Join(rc.out_dir, "sweep.csv"), csv);
  if (solved.size() >= 3) {
    for (const ValidationCheck& c : CheckAsymptotics(solved)) {
      out << fmt::format("  {:<34} {:>14.6e} {:>12.3e}  {}\n", c.name, c.value,
                         c.tolerance, c.pass ? "PASS" : "FAIL");
    }
  }
  return worst;
}

std::string ReportCsv(const ValidationReport& report) {
  std::string csv = "# torus-report v1\nname,value,tolerance,pass\n";
  for (const ValidationCheck& c : report.checks) {
    csv += fmt::format("{},{:.17g},{:.17g},{}\n", c.name, c.value, c.tolerance,
                       c.pass ? 1 : 0);
  }
  return csv;
}

int RunValidate(const RunConfig& rc, std::ostream& out) {
  EquilibriumSolution sol;
  if (!rc.solution_path.empty()) {
    sol = SolutionFromJson(ReadFile(rc.solution_path));
  } else {
    sol = Solve(rc, rc.torus.epsilon, out);
  }
  ValidationReport report = ValidateSolution(sol);
  // Kinematic identities must also hold away from equilibrium.
  const ShapeState random =
      RandomAdmissibleState(sol.state.truncation(), kRandomStateAmplitude, rc.seed);
  for (ValidationCheck c : CheckKinematicIdentities(random, sol.config)) {
    c.name = "random_state_" + c.name;
    report.AddFlag(c.name, c.value, c.tolerance, c.pass);
  }
  report.metadata["seed"] = static_cast<double>(rc.seed);

  EnsureDir(rc.out_dir);
  if (rc.format == "csv") {
    WriteFileAtomic(Join(rc.out_dir, "report.csv"), ReportCsv(report));
  } else {
    WriteFileAtomic(Join(rc.out_dir, "report.json"), ReportToJson(report));
  }
  out << fmt::format("{:<34} {:>14} {:>12}  {}\n", "check", "value", "tolerance",
                     "result");
  for (const ValidationCheck& c : report.checks) {
    out << fmt::format("{:<34} {:>14.6e} {:>12.3e}  {}\n", c.name, c.value,
                       c.tolerance, c.pass ? "PASS" : "FAIL");
  }
  return report.AllPass() ? kExitOk : kExitFailure;
}

double MaxAbsDiff(const PeriodicSeries& a, const PeriodicSeries& b) {
  double d = std::abs(a.half_a0() - b.half_a0());
  for (int n = 1; n <= a.truncation(); ++n) {
    d = std::max(d, std::abs(a.cos_coeff(n) - b.cos_coeff(n)));
    d = std::max(d, std::abs(a.sin_coeff(n) - b.sin_coeff(n)));
  }
  return d;
}

double MaxAbs(const PeriodicSeries& a) {
  double d = std::abs(a.half_a0());
  for (int n = 1; n <= a.truncation(); ++n) {
    d = std::max({d, std::abs(a.cos_coeff(n)), std::abs(a.sin_coeff(n))});
  }
  return d;
}

int RunKernels(const RunConfig& rc, std::ostream& out) {
  std::vector<double> values = rc.eps_list;
  if (values.empty()) values = {0.1, 0.01, 0.001};
  for (double e : values) {
    if (!(e > 0.0) || e > kMaxOperatorEpsilon) {
      throw UsageError(fmt::format("kernels needs 0 < eps <= {}", kMaxOperatorEpsilon));
    }
  }
  EnsureDir(rc.out_dir);

  std::string k3 = fmt::format("# torus-k3 v{}\n", kKernelCsvVersion);
  k3 += "epsilon,K3,error_estimate,K3_over_log\n";
  for (double e : values) {
    const QuadratureScheme scheme = QuadratureScheme::Build(e, rc.solver.quad);
    double est = 0.0;
    const double v = K3Scalar(scheme, 0.0, &est);
    k3 += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", e, v, est,
                      v / (1.0 + std::log(1.0 / e)));
    out << fmt::format("K3({:g}) = {:.12g}\n", e, v);
  }
  WriteFileAtomic(Join(rc.out_dir, "K3.csv"), k3);

  std::string canon = fmt::format("# torus-canonical v{}\n", kKernelCsvVersion);
  canon += "name,parameter,value,exact,abs_error\n";
  double worst = 0.0;
  for (const CanonicalIntegral& c : CanonicalIntegrals()) {
    const double d = std::abs(c.value - c.exact);
    worst = std::max(worst, d);
    canon += fmt::format("{},{:.17g},{:.17g},{:.17g},{:.3e}\n", c.name,
                         c.parameter, c.value, c.exact, d);
  }
  WriteFileAtomic(Join(rc.out_dir, "canonical.csv"), canon);
  out << fmt::format("canonical integrals: max abs error {:.3e}\n", worst);

  // Each operator applied to the modes its Fourier image is stated for.
  struct Probe {
    KernelOperator kind;
    bool constant;
  };
  const Probe probes[] = {
      {KernelOperator::kK1r, false},    {KernelOperator::kK1, false},
      {KernelOperator::kK1Tilde, false}, {KernelOperator::kK1Hat, false},
      {KernelOperator::kK2, true},       {KernelOperator::kK2Tilde, true},
      {KernelOperator::kK2Hat, true},
  };
  std::string cmp = fmt::format("# torus-images v{}\n", kKernelCsvVersion);
  cmp += "epsilon,operator,n,basis,rel_error\n";
  for (double e : values) {
    const QuadratureScheme scheme = QuadratureScheme::Build(e, rc.solver.quad);
    for (const Probe& p : probes) {
      const int top = p.constant ? 0 : kImageMaxMode;
      for (int n = p.constant ? 0 : 1; n <= top; ++n) {
        for (int basis = 0; basis < (p.constant ? 1 : 2); ++basis) {
          const int modes = std::max(kImageMaxMode, 2);
          PeriodicSeries phi =
              p.constant ? PeriodicSeries::Constant(1.0, modes)
                         : PeriodicSeries::Mode(n, basis == 0 ? 1.0 : 0.0,
                                                basis == 0 ? 0.0 : 1.0, modes);
          if (p.kind == KernelOperator::kK1r && n == 1) continue;
          const PeriodicSeries image = FourierImage(p.kind, phi);
          const PeriodicSeries quad = ApplyOperator(p.kind, phi, scheme);
          const double rel = MaxAbsDiff(quad, image) / std::max(MaxAbs(image), 1e-300);
          cmp += fmt::format("{:.17g},{},{},{},{:.17g}\n", e,
                             KernelOperatorName(p.kind), n,
                             p.constant ? "1" : (basis == 0 ? "cos" : "sin"), rel);
        }
      }
    }
  }
  WriteFileAtomic(Join(rc.out_dir, "image_comparison.csv"), cmp);
  return kExitOk;
}

}  // namespace

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidConfig:
    case ErrorCode::kPrecondition:
    case ErrorCode::kUnderResolved:
      return kExitUsage;
    case ErrorCode::kIo:
      return kExitIo;
    case ErrorCode::kInvalidRegime:
      return kExitInvalidRegime;
    case ErrorCode::kDegenerateShape:
    case ErrorCode::kInvalidThickness:
    case ErrorCode::kSingularPoint:
    case ErrorCode::kQuadratureAccuracy:
    case ErrorCode::kOutsideBall:
    case ErrorCode::kNoConvergence:
      return kExitFailure;
  }
  return kExitFailure;
}

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  RunConfig rc;
  CLI::App app{"Equilibria of a thin self-gravitating toroidal stratum"};
  app.set_config("--config", "", "flat key = value file (same keys as flags)");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--epsilon", rc.torus.epsilon, "aspect ratio r0 / R")
      ->capture_default_str();
  app.add_option("--eps-from", rc.eps_from, "first sweep value");
  app.add_option("--eps-to", rc.eps_to, "last sweep value");
  app.add_option("--eps-factor", rc.eps_factor, "geometric sweep factor")
      ->capture_default_str();
  app.add_option("--eps", rc.eps_list, "explicit epsilon list")->delimiter(',');
  app.add_option("--modes", rc.solver.modes, "Fourier modes N")->capture_default_str();
  app.add_option("--tol", rc.solver.tol, "X-norm step tolerance")->capture_default_str();
  app.add_option("--max-iter", rc.solver.max_iter)->capture_default_str();
  app.add_option("--ball-radius", rc.solver.ball_radius, "ball M (0: 2 ||(0, wbar)||_X)")
      ->capture_default_str();
  app.add_flag("--enforce-ball", rc.solver.enforce_ball,
               "fail when an iterate leaves the ball");
  app.add_option("--r0", rc.torus.r0)->capture_default_str();
  app.add_option("--omega0", rc.torus.omega0)->capture_default_str();
  app.add_option("--mu-g", rc.torus.mu_g)->capture_default_str();
  app.add_option("--theta-nodes", rc.solver.theta_nodes, "collocation points (0: 4N)")
      ->capture_default_str();
  app.add_option("--alpha-nodes", rc.solver.quad.alpha_nodes, "Gauss order per alpha panel")
      ->capture_default_str();
  app.add_option("--eta-nodes", rc.solver.quad.eta_nodes, "Gauss order per eta panel")
      ->capture_default_str();
  app.add_option("--refine-depth", rc.solver.quad.refine_depth, "corner grading levels")
      ->capture_default_str();
  app.add_option("--out", rc.out_dir, "output directory")->capture_default_str();
  app.add_option("--format", rc.format, "report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--seed", rc.seed, "seed for randomized checks")->capture_default_str();
  app.add_flag("-v,--verbose", rc.verbose, "print every iteration");

  CLI::App* solve = app.add_subcommand("solve", "solve one epsilon");
  CLI::App* sweep = app.add_subcommand("sweep", "solve a range of epsilon");
  CLI::App* validate = app.add_subcommand("validate", "check a solution");
  CLI::App* kernels = app.add_subcommand("kernels", "kernel and integral tables");
  validate->add_option("--solution", rc.solution_path, "solution.json to check");

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.push_back("torus_solver");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const std::string& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (solve->parsed()) return RunSolve(rc, out);
    if (sweep->parsed()) return RunSweep(rc, out, err);
    if (validate->parsed()) return RunValidate(rc, out);
    if (kernels->parsed()) return RunKernels(rc, out);
  } catch (const UsageError& e) {
    err << "usage: " << e.what() << "\n";
    return kExitUsage;
  } catch (const TorusError& e) {
    err << "error: " << e.what() << "\n";
    return ExitCodeFor(e.code());
  }
  return kExitUsage;
}

}  // namespace torus
