#include "torus/validation.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "torus/errors.h"
#include "torus/parallel.h"
#include "torus/quadrature.h"

namespace torus {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSpectralTol = 1e-11;
constexpr double kFirstIntegralTol = 1e-12;
constexpr double kForceBalanceFloor = 1e-6;

// Node layout in (a, eta). Paired points share a weight and are summed
// before weighting.
struct PointPair {
  int ia_plus;
  int ia_minus;  // -1 when unpaired
  double eta;    // eta of the plus point; the minus point has -eta
  double weight;
};

struct Layout {
  std::vector<double> a;  // distinct a values
  std::vector<PointPair> pairs;
};

int AddA(Layout& lay, double a) {
  lay.a.push_back(a);
  return static_cast<int>(lay.a.size()) - 1;
}

void AddPanels(double lo, double hi, int panels, const GaussRule& rule,
               std::vector<double>& x, std::vector<double>& w) {
  const double width = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * width;
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
      x.push_back(mid + 0.5 * width * rule.nodes[i]);
      w.push_back(0.5 * width * rule.weights[i]);
    }
  }
}

Layout BuildLayout(double eps, const ValidationParams& p) {
  Layout lay;
  const GaussRule& gr = GaussLegendre(p.radial_nodes);
  const GaussRule& ga = GaussLegendre(p.angular_nodes);
  const GaussRule& go = GaussLegendre(p.outer_nodes);

  // Polar part: phi in [0, pi), the antipode covers [pi, 2 pi).
  std::vector<double> phis, phw;
  AddPanels(0.0, 0.25 * kPi, p.angular_panels, ga, phis, phw);
  AddPanels(0.25 * kPi, 0.75 * kPi, 2 * p.angular_panels, ga, phis, phw);
  AddPanels(0.75 * kPi, kPi, p.angular_panels, ga, phis, phw);
  for (size_t k = 0; k < phis.size(); ++k) {
    const double c = std::cos(phis[k]);
    const double s = std::sin(phis[k]);
    const double rmax = 1.0 / std::max(std::abs(c), std::abs(s));
    for (size_t i = 0; i < gr.nodes.size(); ++i) {
      const double rr = 0.5 * rmax * (1.0 + gr.nodes[i]);
      const double wr = 0.5 * rmax * gr.weights[i];
      const int ip = AddA(lay, rr * c);
      const int im = AddA(lay, -rr * c);
      lay.pairs.push_back({ip, im, rr * s, phw[k] * wr * rr});
    }
  }

  // |a| in (1, pi), |eta| < 1.
  std::vector<double> ax, aw;
  AddPanels(1.0, kPi, p.outer_a_panels, go, ax, aw);
  std::vector<double> ex, ew;
  AddPanels(-1.0, 1.0, 2, go, ex, ew);
  for (size_t i = 0; i < ax.size(); ++i) {
    for (int sign : {1, -1}) {
      const int ia = AddA(lay, sign * ax[i]);
      for (size_t j = 0; j < ex.size(); ++j) {
        lay.pairs.push_back({ia, -1, ex[j], aw[i] * ew[j]});
      }
    }
  }

  // |eta| in (1, pi / eps), all a; panels double in width.
  std::vector<double> fx, fw;
  AddPanels(-kPi, kPi, 2 * p.outer_a_panels, go, fx, fw);
  std::vector<double> gx, gw;
  const double eta_max = kPi / eps;
  for (double lo = 1.0; lo < eta_max;) {
    double hi = std::min(2.0 * lo, eta_max);
    if (eta_max - hi < 0.5 * (hi - lo)) hi = eta_max;
    AddPanels(lo, hi, 1, go, gx, gw);
    lo = hi;
  }
  std::vector<int> ia(fx.size());
  for (size_t i = 0; i < fx.size(); ++i) ia[i] = AddA(lay, fx[i]);
  for (size_t i = 0; i < fx.size(); ++i) {
    for (size_t j = 0; j < gx.size(); ++j) {
      // the integrand is even in eta; the pair shares one a value
      lay.pairs.push_back({ia[i], ia[i], gx[j], fw[i] * gw[j]});
    }
  }
  return lay;
}

// Values of a series at theta + a for many a, via angle recurrences.
void ShiftedValues(const PeriodicSeries& s, double theta,
                   const std::vector<double>& a, std::vector<double>& out) {
  out.resize(a.size());
  const int modes = s.truncation();
  for (size_t k = 0; k < a.size(); ++k) {
    const double x = theta + a[k];
    const double c1 = std::cos(x), s1 = std::sin(x);
    double cn = 1.0, sn = 0.0;
    double v = s.half_a0();
    for (int n = 1; n <= modes; ++n) {
      const double cn1 = cn * c1 - sn * s1;
      sn = sn * c1 + cn * s1;
      cn = cn1;
      v += s.cos_coeff(n) * cn + s.sin_coeff(n) * sn;
    }
    out[k] = v;
  }
}

struct Contribution {
  double nr, nt;
};

// 2 N / (D^3 omega_a) at (theta + a, eps * eta), in R units.
inline Contribution Integrand(double eps, double theta, double a, double eta,
                              double rho_a, double w_a, double rho_t) {
  const double alpha = theta + a;
  const double beta = eps * eta;
  const double ra = 1.0 + eps * rho_a;
  const double arm_a = 1.0 + eps * ra * std::cos(alpha);
  const double hb = std::sin(0.5 * beta);
  const double sum_half = 0.5 * (alpha + theta);
  const double ha = std::sin(0.5 * a);
  // X(alpha, beta) - X(theta, 0), component-wise without cancellation.
  const double dcos = -2.0 * std::sin(sum_half) * ha;  // cos alpha - cos theta
  const double dsin = 2.0 * std::cos(sum_half) * ha;   // sin alpha - sin theta
  const double dr = eps * (rho_a - rho_t);
  const double dx = -2.0 * hb * hb * arm_a +
                    eps * (ra * dcos + dr * std::cos(theta));
  const double dy = arm_a * std::sin(beta);
  const double dz = eps * (ra * dsin + dr * std::sin(theta));
  const double d2 = dx * dx + dy * dy + dz * dz;
  const double inv = 2.0 / (d2 * std::sqrt(d2) * (1.0 + eps * w_a));
  const double ct = std::cos(theta), st = std::sin(theta);
  return {(dx * ct + dz * st) * inv, (-dx * st + dz * ct) * inv};
}

void ForcesOnGrid(const ShapeState& state, double eps, const Layout& lay,
                  const std::vector<double>& grid, std::vector<double>& fr,
                  std::vector<double>& ft) {
  const int m = static_cast<int>(grid.size());
  fr.assign(m, 0.0);
  ft.assign(m, 0.0);
  ParallelFor(m, [&](int t) {
    const double theta = grid[t];
    std::vector<double> rho, w;
    ShiftedValues(state.rho, theta, lay.a, rho);
    ShiftedValues(state.w, theta, lay.a, w);
    const double rho_t = state.rho(theta);
    double sr = 0.0, st = 0.0;
    for (const PointPair& p : lay.pairs) {
      const Contribution c1 = Integrand(eps, theta, lay.a[p.ia_plus], p.eta,
                                        rho[p.ia_plus], w[p.ia_plus], rho_t);
      double nr = c1.nr, nt = c1.nt;
      if (p.ia_minus >= 0) {
        const Contribution c2 = Integrand(eps, theta, lay.a[p.ia_minus], -p.eta,
                                          rho[p.ia_minus], w[p.ia_minus], rho_t);
        nr += c2.nr;
        nt += c2.nt;
      }
      sr += p.weight * nr;
      st += p.weight * nt;
    }
    // beta = eps eta, d beta = eps d eta; N ~ eps^2, D^3 ~ eps^3.
    const double om = 1.0 + eps * state.w(theta);
    fr[t] = sr * eps / om;
    ft[t] = st * eps / om;
  });
}

double BracketOf(const std::vector<double>& f) { return BracketMean(f); }

int DefaultPoints(const ShapeState& state, const ValidationParams& params) {
  if (params.theta_points > 0) return params.theta_points;
  return std::max(8 * state.truncation() + 1, 65);
}

struct Forcing {
  std::vector<double> radial, polar;  // Phi
};

Forcing MakeForcing(const ShapeState& state, double eps,
                    const IndependentForces& f) {
  const size_t m = f.theta.size();
  std::vector<double> h(m);
  for (size_t j = 0; j < m; ++j) {
    const double t = f.theta[j];
    const double r = 1.0 + eps * state.rho(t);
    const double g = 1.0 + eps * r * std::cos(t);
    h[j] = 1.0 / ((1.0 + eps * state.w(t)) * g * g * g);
  }
  const double hm = BracketMean(h);
  Forcing out;
  out.radial.resize(m);
  out.polar.resize(m);
  for (size_t j = 0; j < m; ++j) {
    const double t = f.theta[j];
    const double share = h[j] / hm * f.f_mean;
    out.radial[j] = eps * (f.fr[j] - std::cos(t) * share);
    out.polar[j] = eps * (f.ftheta[j] + std::sin(t) * share);
  }
  return out;
}

// Tolerance for brackets of c Phi, tied to the quadrature estimate.
double ForceTolerance(double c, double estimate) {
  return 2.0 * kPi * std::abs(c) * 10.0 * std::max(estimate, 0.0) + 1e-10;
}

ForceBalance BalanceFrom(const ShapeState& state, const TorusConfig& cfg,
                         double c_eps, const IndependentForces& f) {
  const double eps = cfg.epsilon;
  const Forcing phi = MakeForcing(state, eps, f);
  const ProfileSamples prof =
      SampleProfiles(state, eps, static_cast<int>(f.theta.size()));
  std::vector<double> ar, at;
  AccelerationOverOmegaSamples(prof, ar, at);
  ForceBalance out;
  out.c_used = c_eps > 0.0 ? c_eps : BracketMean(ar) / BracketMean(phi.radial);
  for (size_t j = 0; j < ar.size(); ++j) {
    out.residual_over_eps = std::max(
        {out.residual_over_eps, std::abs(ar[j] - out.c_used * phi.radial[j]),
         std::abs(at[j] - out.c_used * phi.polar[j])});
  }
  out.residual_over_eps /= eps;
  out.error_estimate = f.error_estimate;
  return out;
}

}  // namespace

void ValidationReport::Add(const std::string& name, double value,
                           double tolerance) {
  AddFlag(name, value, tolerance, std::abs(value) <= tolerance);
}

void ValidationReport::AddFlag(const std::string& name, double value,
                               double tolerance, bool pass) {
  checks.push_back({name, value, tolerance, pass});
}

const ValidationCheck* ValidationReport::Find(const std::string& name) const {
  for (const ValidationCheck& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

bool ValidationReport::AllPass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const ValidationCheck& c) { return c.pass; });
}

IndependentForces EvaluateIndependentForces(const ShapeState& state,
                                            double epsilon,
                                            const ValidationParams& params,
                                            bool estimate_error) {
  IndependentForces out;
  out.theta = ThetaGrid(DefaultPoints(state, params));
  ForcesOnGrid(state, epsilon, BuildLayout(epsilon, params), out.theta, out.fr,
               out.ftheta);
  if (estimate_error) {
    ValidationParams fine = params;
    fine.radial_nodes += 8;
    fine.angular_nodes += 8;
    fine.outer_nodes += 8;
    std::vector<double> fr, ft;
    ForcesOnGrid(state, epsilon, BuildLayout(epsilon, fine), out.theta, fr, ft);
    double diff = 0.0;
    for (size_t j = 0; j < fr.size(); ++j) {
      diff = std::max({diff, std::abs(fr[j] - out.fr[j]),
                       std::abs(ft[j] - out.ftheta[j])});
    }
    out.error_estimate = epsilon * diff;
    out.fr = fr;
    out.ftheta = ft;
  }
  std::vector<double> f(out.theta.size());
  for (size_t j = 0; j < f.size(); ++j) {
    f[j] = out.fr[j] * std::cos(out.theta[j]) -
           out.ftheta[j] * std::sin(out.theta[j]);
  }
  out.f_mean = BracketMean(f);
  return out;
}

ForceBalance CheckForceBalance(const ShapeState& state, const TorusConfig& cfg,
                               double c_eps, const ValidationParams& params) {
  const IndependentForces f =
      EvaluateIndependentForces(state, cfg.epsilon, params, true);
  return BalanceFrom(state, cfg, c_eps, f);
}

std::vector<ValidationCheck> CheckKinematicIdentities(const ShapeState& state,
                                                      const TorusConfig& cfg) {
  const int points = 8 * std::max(4, state.truncation()) + 1;
  const ProfileSamples prof = SampleProfiles(state, cfg.epsilon, points);
  std::vector<double> ar, at;
  AccelerationOverOmegaSamples(prof, ar, at);
  std::vector<double> b1(points), b2(points), pw(points);
  for (int j = 0; j < points; ++j) {
    const double c = std::cos(prof.theta[j]), s = std::sin(prof.theta[j]);
    b1[j] = ar[j] * c - at[j] * s;
    b2[j] = ar[j] * s + at[j] * c;
    // r' a^r + r a^theta with a = omega A
    pw[j] = prof.omega[j] * (prof.dr[j] * ar[j] + prof.r[j] * at[j]);
  }
  std::vector<ValidationCheck> out;
  ValidationReport tmp;
  tmp.Add("kinematic_bracket_cos", BracketOf(b1), kSpectralTol);
  tmp.Add("kinematic_bracket_sin", BracketOf(b2), kSpectralTol);
  tmp.Add("kinematic_power", BracketOf(pw), kSpectralTol);
  return tmp.checks;
}

std::vector<ValidationCheck> CheckMomentIdentities(
    const EquilibriumSolution& sol, const IndependentForces& forces) {
  const double eps = sol.config.epsilon;
  std::vector<ValidationCheck> out;
  for (const ValidationCheck& c : CheckKinematicIdentities(sol.state, sol.config)) {
    if (c.name != "kinematic_power") out.push_back(c);
  }
  const Forcing phi = MakeForcing(sol.state, eps, forces);
  const size_t m = forces.theta.size();
  std::vector<double> b1(m), b2(m);
  for (size_t j = 0; j < m; ++j) {
    const double c = std::cos(forces.theta[j]), s = std::sin(forces.theta[j]);
    b1[j] = sol.c_eps * (phi.radial[j] * c - phi.polar[j] * s);
    b2[j] = sol.c_eps * (phi.radial[j] * s + phi.polar[j] * c);
  }
  const double tol = ForceTolerance(sol.c_eps, forces.error_estimate);
  ValidationReport tmp;
  tmp.Add("force_bracket_cos", BracketOf(b1), tol);
  tmp.Add("force_bracket_sin", BracketOf(b2), tol);
  out.insert(out.end(), tmp.checks.begin(), tmp.checks.end());
  return out;
}

std::vector<ValidationCheck> CheckPowerAndKinematic(
    const EquilibriumSolution& sol, const IndependentForces& forces) {
  const double eps = sol.config.epsilon;
  const Forcing phi = MakeForcing(sol.state, eps, forces);
  const ProfileSamples prof =
      SampleProfiles(sol.state, eps, static_cast<int>(forces.theta.size()));
  std::vector<double> pw(forces.theta.size());
  for (size_t j = 0; j < pw.size(); ++j) {
    pw[j] = prof.omega[j] * sol.c_eps *
            (prof.dr[j] * phi.radial[j] + prof.r[j] * phi.polar[j]);
  }
  std::vector<ValidationCheck> out;
  ValidationReport tmp;
  tmp.Add("power_balance", BracketOf(pw),
          ForceTolerance(sol.c_eps, forces.error_estimate));
  out = tmp.checks;
  for (const ValidationCheck& c : CheckKinematicIdentities(sol.state, sol.config)) {
    if (c.name == "kinematic_power") out.push_back(c);
  }
  return out;
}

ValidationCheck CheckFirstIntegral(const EquilibriumSolution& sol) {
  const TorusConfig& cfg = sol.config;
  const int points = 8 * std::max(4, sol.state.truncation()) + 1;
  const std::vector<double> grid = ThetaGrid(points);
  double lo = 0.0, hi = 0.0;
  for (int j = 0; j < points; ++j) {
    const double r = cfg.r0 * (1.0 + cfg.epsilon * sol.state.rho(grid[j]));
    const double arm = cfg.major_radius() + r * std::cos(grid[j]);
    const double value = arm * arm * sol.omega_rate(grid[j]);
    if (j == 0) lo = hi = value;
    lo = std::min(lo, value);
    hi = std::max(hi, value);
  }
  const double rel = (hi - lo) / std::max(std::abs(hi), 1e-300);
  return ValidationCheck{"first_integral", rel, kFirstIntegralTol,
                         rel <= kFirstIntegralTol};
}

AsymptoticMetrics ComputeAsymptoticMetrics(const EquilibriumSolution& sol) {
  const TorusConfig& cfg = sol.config;
  const int modes = sol.state.truncation();
  AsymptoticMetrics m;
  m.rho_norm = SobolevNorm(sol.state.rho, 2);
  m.w_dev_norm = SobolevNorm(sol.state.w - LeadingRateProfile(modes), 1);
  const double s0 = cfg.omega0 * cfg.omega0 * cfg.r0 / (2.0 * kPi * cfg.mu_g);
  PeriodicSeries ds = sol.s - LeadingThickness(cfg, modes);
  ds *= 1.0 / s0;
  m.s_dev_over_eps = SobolevNorm(ds, 1) / cfg.epsilon;
  m.omega_ratio = sol.omega_rate.half_a0() /
                  (cfg.omega0 * cfg.epsilon * std::sqrt(std::log(1.0 / cfg.epsilon)));
  return m;
}

std::vector<ValidationCheck> CheckAsymptotics(
    std::vector<EquilibriumSolution> sweep) {
  if (sweep.size() < 3) {
    throw TorusError(ErrorCode::kPrecondition,
                     "asymptotic checks need at least three solutions");
  }
  std::sort(sweep.begin(), sweep.end(),
            [](const EquilibriumSolution& a, const EquilibriumSolution& b) {
              return a.config.epsilon > b.config.epsilon;
            });
  std::vector<AsymptoticMetrics> m;
  for (const EquilibriumSolution& s : sweep) m.push_back(ComputeAsymptoticMetrics(s));
  // value = worst successive ratio (must stay below 1 for a strict decrease)
  auto worst_ratio = [&](auto field) {
    double worst = 0.0;
    for (size_t i = 1; i < m.size(); ++i) {
      worst = std::max(worst, field(m[i]) / field(m[i - 1]));
    }
    return worst;
  };
  std::vector<ValidationCheck> out;
  const double r_rho = worst_ratio([](const AsymptoticMetrics& a) { return a.rho_norm; });
  const double r_w = worst_ratio([](const AsymptoticMetrics& a) { return a.w_dev_norm; });
  const double r_s = worst_ratio([](const AsymptoticMetrics& a) { return a.s_dev_over_eps; });
  out.push_back({"rho_norm_decreasing", r_rho, 1.0, r_rho < 1.0});
  out.push_back({"w_deviation_decreasing", r_w, 1.0, r_w < 1.0});
  out.push_back({"s_deviation_over_eps_decreasing", r_s, 1.0, r_s < 1.0});
  double lo = m[0].omega_ratio, hi = m[0].omega_ratio;
  for (const AsymptoticMetrics& a : m) {
    lo = std::min(lo, a.omega_ratio);
    hi = std::max(hi, a.omega_ratio);
  }
  const double spread = lo > 0.0 ? hi / lo : INFINITY;
  out.push_back({"omega_ratio_bounded", spread, 3.0, spread <= 3.0});
  return out;
}

ValidationReport ValidateSolution(const EquilibriumSolution& sol,
                                  const ValidationParams& params) {
  ValidationReport report;
  const IndependentForces forces =
      EvaluateIndependentForces(sol.state, sol.config.epsilon, params, true);
  for (const ValidationCheck& c : CheckMomentIdentities(sol, forces)) {
    report.checks.push_back(c);
  }
  for (const ValidationCheck& c : CheckPowerAndKinematic(sol, forces)) {
    report.checks.push_back(c);
  }
  const ForceBalance fb = BalanceFrom(sol.state, sol.config, sol.c_eps, forces);
  const double fb_tol =
      kForceBalanceFloor + 100.0 * std::max(forces.error_estimate, 0.0) /
                               sol.config.epsilon;
  report.Add("force_balance", fb.residual_over_eps, fb_tol);
  report.checks.push_back(CheckFirstIntegral(sol));
  report.metadata["epsilon"] = sol.config.epsilon;
  report.metadata["modes"] = sol.state.truncation();
  report.metadata["theta_points"] = static_cast<double>(forces.theta.size());
  report.metadata["quadrature_error_estimate"] = forces.error_estimate;
  report.metadata["c_eps"] = sol.c_eps;
  return report;
}

}  // namespace torus
