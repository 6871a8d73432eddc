#include "torus/equilibrium_solver.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "torus/errors.h"

namespace torus {

namespace {

constexpr double kPi = std::numbers::pi;

void RequireZero(double value, double scale, const char* what) {
  if (std::abs(value) > 1e-12 * (1.0 + scale)) {
    throw TorusError(ErrorCode::kPrecondition,
                     std::string("invert_L input has nonzero ") + what);
  }
}

double MaxAbsCoeff(const PeriodicSeries& s) {
  double m = std::abs(s.half_a0());
  for (double c : s.cos_coeffs()) m = std::max(m, std::abs(c));
  for (double c : s.sin_coeffs()) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace

void SolverConfig::Validate() const {
  std::ostringstream why;
  if (modes < 4) why << "modes must be >= 4; ";
  if (!(tol > 0.0)) why << "tol must be positive; ";
  if (max_iter < 1) why << "max_iter must be >= 1; ";
  if (ball_radius < 0.0) why << "ball_radius must be positive; ";
  if (theta_nodes != 0 && theta_nodes < 2 * modes + 1) {
    why << "theta_nodes must be >= 2 * modes + 1; ";
  }
  if (!why.str().empty()) throw TorusError(ErrorCode::kInvalidConfig, why.str());
  quad.Validate();
}

double SolverConfig::EffectiveBallRadius() const {
  if (ball_radius > 0.0) return ball_radius;
  return 2.0 * ShapeState::Leading(modes).XNorm();
}

int SolverConfig::EffectiveThetaNodes() const {
  return theta_nodes > 0 ? theta_nodes : 4 * modes;
}

LinearImage ApplyL(const ShapeState& state) {
  const int modes = state.truncation();
  LinearImage out{PeriodicSeries(modes), PeriodicSeries(modes)};
  const PeriodicSeries w = state.w.Resized(modes);
  if (modes >= 1) {
    out.p.set_cos_coeff(1, -2.0 * w.cos_coeff(1));
    out.p.set_sin_coeff(1, -2.0 * w.sin_coeff(1));
  }
  for (int n = 2; n <= modes; ++n) {
    const double a = -static_cast<double>(n) * n + n - 2.0;
    const double r1 = state.rho.cos_coeff(n), r2 = state.rho.sin_coeff(n);
    const double w1 = w.cos_coeff(n), w2 = w.sin_coeff(n);
    out.p.set_cos_coeff(n, a * r1 - 2.0 * w1);
    out.p.set_sin_coeff(n, a * r2 - 2.0 * w2);
    out.v.set_cos_coeff(n, 2.0 * n * r2 + (n + 1.0) * w2);
    out.v.set_sin_coeff(n, -2.0 * n * r1 - (n + 1.0) * w1);
  }
  return out;
}

ShapeState InvertL(const PeriodicSeries& p, const PeriodicSeries& v) {
  const int modes = std::max(p.truncation(), v.truncation());
  const PeriodicSeries pp = p.Resized(modes);
  const PeriodicSeries vv = v.Resized(modes);
  const double scale = std::max(MaxAbsCoeff(pp), MaxAbsCoeff(vv));
  RequireZero(pp.half_a0(), scale, "p mean");
  RequireZero(vv.half_a0(), scale, "v mean");
  if (modes >= 1) {
    RequireZero(vv.cos_coeff(1), scale, "v first harmonic");
    RequireZero(vv.sin_coeff(1), scale, "v first harmonic");
  }
  ShapeState x = ShapeState::Zero(modes);
  if (modes >= 1) {
    x.w.set_cos_coeff(1, -0.5 * pp.cos_coeff(1));
    x.w.set_sin_coeff(1, -0.5 * pp.sin_coeff(1));
  }
  for (int n = 2; n <= modes; ++n) {
    const double a = -static_cast<double>(n) * n + n - 2.0;
    const double b = n + 1.0;
    const double det = static_cast<double>(n) * n * n - 3.0 * n + 2.0;
    // cos block: a r1 - 2 w1 = p1, -2n r1 - b w1 = v2
    const double p1 = pp.cos_coeff(n), v2 = vv.sin_coeff(n);
    x.rho.set_cos_coeff(n, (-b * p1 + 2.0 * v2) / det);
    x.w.set_cos_coeff(n, (2.0 * n * p1 + a * v2) / det);
    // sin block: a r2 - 2 w2 = p2, 2n r2 + b w2 = v1
    const double p2 = pp.sin_coeff(n), v1 = vv.cos_coeff(n);
    x.rho.set_sin_coeff(n, -(b * p2 + 2.0 * v1) / det);
    x.w.set_sin_coeff(n, (2.0 * n * p2 - a * v1) / det);
  }
  return x;
}

ReducedForcing ComputeReducedForcing(const ShapeState& state, double epsilon,
                                     const NewtonianForceResult& forces) {
  const size_t m = forces.theta.size();
  ReducedForcing out;
  out.theta = forces.theta;
  std::vector<double> h(m);
  for (size_t j = 0; j < m; ++j) {
    const double t = forces.theta[j];
    const double r = 1.0 + epsilon * state.rho(t);
    const double om = 1.0 + epsilon * state.w(t);
    const double g = 1.0 + epsilon * r * std::cos(t);
    h[j] = 1.0 / (om * g * g * g);
  }
  out.h_mean = BracketMean(h);
  out.radial.resize(m);
  out.polar.resize(m);
  for (size_t j = 0; j < m; ++j) {
    const double t = forces.theta[j];
    const double share = h[j] / out.h_mean * forces.f_mean;
    out.radial[j] = epsilon * (forces.fr_samples[j] - std::cos(t) * share);
    out.polar[j] = epsilon * (forces.ftheta_samples[j] + std::sin(t) * share);
  }
  return out;
}

OmegaSqAndJResult OmegaSqAndJ(const ShapeState& state, const TorusConfig& cfg,
                              const NewtonianForceResult& forces,
                              double c_eps) {
  if (!(forces.f_mean < 0.0)) {
    std::ostringstream msg;
    msg << "<f/omega> = " << forces.f_mean << " is not attractive";
    throw TorusError(ErrorCode::kInvalidRegime, msg.str());
  }
  if (!(c_eps > 0.0)) {
    throw TorusError(ErrorCode::kInvalidRegime, "c(eps) must be positive");
  }
  const double eps = cfg.epsilon;
  const ReducedForcing rf = ComputeReducedForcing(state, eps, forces);
  const double big_r = cfg.major_radius();
  OmegaSqAndJResult out;
  const double scale = -c_eps * forces.f_mean / rf.h_mean;  // > 0
  out.j_sq = cfg.omega0 * cfg.omega0 * cfg.r0 * eps * scale * big_r * big_r *
             big_r;
  const int modes = state.truncation();
  const int points = std::max(static_cast<int>(forces.theta.size()), 6 * modes + 1);
  const std::vector<double> grid = ThetaGrid(points);
  std::vector<double> osq(points);
  for (int j = 0; j < points; ++j) {
    const double r = 1.0 + eps * state.rho(grid[j]);
    const double g = 1.0 + eps * r * std::cos(grid[j]);
    osq[j] = cfg.omega0 * cfg.omega0 * eps * eps * scale / (g * g * g * g);
  }
  out.omega_sq = Analyze(osq, modes);
  return out;
}

ResidualResult ComputeCAndResidual(const ShapeState& state,
                                   const TorusConfig& cfg,
                                   const NewtonianForceResult& forces) {
  const double eps = cfg.epsilon;
  const int modes = state.truncation();
  const ReducedForcing rf = ComputeReducedForcing(state, eps, forces);
  const int points = static_cast<int>(forces.theta.size());
  const ProfileSamples prof = SampleProfiles(state, eps, points);
  std::vector<double> ar, at;
  AccelerationOverOmegaSamples(prof, ar, at);

  ResidualResult out;
  out.h_mean = rf.h_mean;
  out.c_eps = BracketMean(ar) / BracketMean(rf.radial);
  out.er.resize(points);
  out.etheta.resize(points);
  for (int j = 0; j < points; ++j) {
    out.er[j] = ar[j] - out.c_eps * rf.radial[j];
    out.etheta[j] = at[j] - out.c_eps * rf.polar[j] +
                    prof.dr[j] / prof.r[j] * out.er[j];
  }
  std::vector<double> er_eps(points), et_eps(points);
  for (int j = 0; j < points; ++j) {
    er_eps[j] = out.er[j] / eps;
    et_eps[j] = out.etheta[j] / eps;
  }
  const LinearImage lin = ApplyL(state);
  const PeriodicSeries half_cos = PeriodicSeries::Mode(1, 0.5, 0.0, modes);
  out.nr_tilde = ProjectAdmissible(
      lin.p - half_cos - Analyze(er_eps, modes), AdmissibleKind::kRate);
  out.ntheta_tilde = ProjectAdmissible(lin.v - Analyze(et_eps, modes),
                                       AdmissibleKind::kShape);
  return out;
}

ReconstructedProfiles ReconstructProfiles(const ShapeState& state,
                                          const TorusConfig& cfg,
                                          double c_eps, double j_sq) {
  const double eps = cfg.epsilon;
  const double big_r = cfg.major_radius();
  ReconstructedProfiles out;
  out.c_flux = 2.0 * std::pow(cfg.omega0, 3) * cfg.r0 * cfg.r0 * big_r * c_eps /
               cfg.mu_g;
  const int modes = state.truncation();
  const int points = 6 * modes + 1;
  const std::vector<double> grid = ThetaGrid(points);
  std::vector<double> s(points), om(points);
  const double j = std::sqrt(std::max(j_sq, 0.0));
  for (int k = 0; k < points; ++k) {
    const double r = cfg.r0 * (1.0 + eps * state.rho(grid[k]));
    const double omega = cfg.omega0 * (1.0 + eps * state.w(grid[k]));
    const double arm = big_r + r * std::cos(grid[k]);
    s[k] = out.c_flux / (arm * r * omega);
    if (!(s[k] > 0.0)) {
      throw TorusError(ErrorCode::kInvalidThickness,
                       "reconstructed thickness is not positive");
    }
    om[k] = j / (arm * arm);
  }
  out.s = Analyze(s, modes);
  out.omega_rate = Analyze(om, modes);
  return out;
}

PeriodicSeries LeadingThickness(const TorusConfig& cfg, int modes) {
  const double s0 = cfg.omega0 * cfg.omega0 * cfg.r0 / (2.0 * kPi * cfg.mu_g);
  PeriodicSeries s = PeriodicSeries::Constant(s0, modes);
  s.set_cos_coeff(1, -0.75 * cfg.epsilon * s0);
  return s;
}

EquilibriumSolution FixedPointSolve(const TorusConfig& cfg,
                                    const SolverConfig& solver,
                                    const IterationObserver& observer) {
  cfg.Validate();
  solver.Validate();
  if (!(cfg.epsilon < 1.0)) {
    throw TorusError(ErrorCode::kInvalidConfig, "solver needs epsilon < 1");
  }
  const int modes = solver.modes;
  const double eps = cfg.epsilon;
  const double ball = solver.EffectiveBallRadius();
  const int theta_nodes = solver.EffectiveThetaNodes();
  const QuadratureScheme scheme = QuadratureScheme::Build(eps, solver.quad);
  const PeriodicSeries half_cos = PeriodicSeries::Mode(1, 0.5, 0.0, modes);

  EquilibriumSolution sol;
  sol.config = cfg;
  sol.solver = solver;
  SolverDiagnostics& diag = sol.diagnostics;
  diag.ball_radius = ball;
  diag.theta_nodes = theta_nodes;

  ShapeState x = ShapeState::Leading(modes);
  diag.norms.push_back(x.XNorm());
  diag.max_iterate_norm = diag.norms.back();

  auto evaluate = [&](const ShapeState& state, NewtonianForceResult& forces) {
    try {
      CheckShape(state, eps);
    } catch (const TorusError& e) {
      throw TorusError(e.code(), std::string("contraction failed: iterate left "
                                             "the admissible shapes (") +
                                     e.what() + ")");
    }
    forces = NewtonianForces(state, scheme, theta_nodes);
    if (!(forces.f_mean < 0.0)) {
      std::ostringstream msg;
      msg << "<f/omega> = " << forces.f_mean << " is not attractive";
      throw TorusError(ErrorCode::kInvalidRegime, msg.str());
    }
    return ComputeCAndResidual(state, cfg, forces);
  };

  NewtonianForceResult forces;
  ResidualResult res = evaluate(x, forces);
  for (int k = 1; k <= solver.max_iter; ++k) {
    diag.c_history.push_back(res.c_eps);
    const ShapeState next = InvertL(half_cos + res.nr_tilde, res.ntheta_tilde);
    const double step = (next - x).XNorm();
    const double norm = next.XNorm();
    if (!std::isfinite(step) || !std::isfinite(norm)) {
      throw TorusError(ErrorCode::kNoConvergence,
                       "iteration produced non-finite values");
    }
    diag.steps.push_back(step);
    diag.norms.push_back(norm);
    diag.max_iterate_norm = std::max(diag.max_iterate_norm, norm);
    diag.iterations = k;
    diag.final_step = step;
    if (observer) observer(k, next, step);
    if (norm > ball) diag.inside_ball = false;
    if (norm > ball && solver.enforce_ball) {
      std::ostringstream msg;
      msg << "contraction failed: iterate " << k << " has X-norm " << norm
          << " outside the ball M = " << ball;
      throw TorusError(ErrorCode::kOutsideBall, msg.str());
    }
    x = next;
    res = evaluate(x, forces);
    if (step < solver.tol) {
      diag.converged = true;
      break;
    }
  }
  if (!diag.converged) {
    std::ostringstream msg;
    msg << "contraction failed: no convergence in " << solver.max_iter
        << " iterations (last step " << diag.final_step << ")";
    throw TorusError(ErrorCode::kNoConvergence, msg.str());
  }

  // Largest step ratio once the first transient is over.
  for (size_t i = 1; i < diag.steps.size(); ++i) {
    if (diag.steps[i - 1] <= 0.0) continue;
    const double ratio = diag.steps[i] / diag.steps[i - 1];
    if (i >= 2 || diag.steps.size() == 2) {
      diag.contraction_ratio = std::max(diag.contraction_ratio, ratio);
    }
  }
  for (size_t j = 0; j < res.er.size(); ++j) {
    diag.residual_max = std::max(
        {diag.residual_max, std::abs(res.er[j]) / eps,
         std::abs(res.etheta[j]) / eps});
  }
  if (solver.estimate_error) {
    const NewtonianForceResult fine =
        NewtonianForces(x, scheme.Refined(), theta_nodes);
    double diff = 0.0;
    for (size_t j = 0; j < fine.theta.size(); ++j) {
      diff = std::max({diff, std::abs(fine.fr_samples[j] - forces.fr_samples[j]),
                       std::abs(fine.ftheta_samples[j] -
                                forces.ftheta_samples[j])});
    }
    diag.quadrature_error = eps * diff;
  }

  sol.state = x;
  sol.c_eps = res.c_eps;
  sol.f_mean = forces.f_mean;
  sol.h_mean = res.h_mean;
  const OmegaSqAndJResult oj = OmegaSqAndJ(x, cfg, forces, res.c_eps);
  sol.j_sq = oj.j_sq;
  const ReconstructedProfiles prof = ReconstructProfiles(x, cfg, res.c_eps, oj.j_sq);
  sol.s = prof.s;
  sol.omega_rate = prof.omega_rate;
  sol.c_flux = prof.c_flux;
  return sol;
}

}  // namespace torus
