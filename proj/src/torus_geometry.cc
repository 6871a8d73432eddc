#include "torus/torus_geometry.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "torus/errors.h"

namespace torus {

namespace {

constexpr double kMinRadiusFraction = 0.5;

struct Basis {
  Vec3 eps1, eps2, eps_r, eps_theta;
};

Basis MakeBasis(double theta, double phi) {
  Basis b;
  b.eps1 = Vec3(std::cos(phi), std::sin(phi), 0.0);
  b.eps2 = Vec3(-std::sin(phi), std::cos(phi), 0.0);
  const Vec3 e3(0.0, 0.0, 1.0);
  b.eps_r = std::cos(theta) * b.eps1 + std::sin(theta) * e3;
  b.eps_theta = -std::sin(theta) * b.eps1 + std::cos(theta) * e3;
  return b;
}

}  // namespace

void TorusConfig::Validate() const {
  std::ostringstream why;
  if (!(r0 > 0.0)) why << "r0 must be positive; ";
  if (!(omega0 > 0.0)) why << "omega0 must be positive; ";
  if (!(mu_g > 0.0)) why << "mu_g must be positive; ";
  if (!(epsilon > 0.0 && epsilon <= 1.0)) why << "epsilon must be in (0, 1]; ";
  if (!why.str().empty()) throw TorusError(ErrorCode::kInvalidConfig, why.str());
}

double ShapeState::XNorm() const {
  return SobolevNorm(rho, 2) + SobolevNorm(w, 1);
}

ShapeState ShapeState::Zero(int modes) {
  return ShapeState{PeriodicSeries(modes), PeriodicSeries(modes)};
}

ShapeState ShapeState::Leading(int modes) {
  return ShapeState{PeriodicSeries(modes), LeadingRateProfile(modes)};
}

PeriodicSeries LeadingRateProfile(int modes) {
  return PeriodicSeries::Mode(1, -0.25, 0.0, modes);
}

ShapeState operator-(const ShapeState& a, const ShapeState& b) {
  return ShapeState{a.rho - b.rho, a.w - b.w};
}

ShapeState RandomAdmissibleState(int modes, double amplitude,
                                 std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  ShapeState st = ShapeState::Zero(modes);
  for (int n = 1; n <= modes; ++n) {
    const double scale = amplitude / (double(n) * n);
    const double rc = unit(gen), rs = unit(gen), wc = unit(gen), ws = unit(gen);
    if (n >= 2) {
      st.rho.set_cos_coeff(n, scale * rc);
      st.rho.set_sin_coeff(n, scale * rs);
    }
    st.w.set_cos_coeff(n, scale * wc);
    st.w.set_sin_coeff(n, scale * ws);
  }
  return st;
}

void CheckAdmissible(const ShapeState& state, double tol) {
  double bad = std::abs(state.rho.half_a0()) + std::abs(state.w.half_a0());
  if (state.rho.truncation() >= 1) {
    bad += std::abs(state.rho.cos_coeff(1)) + std::abs(state.rho.sin_coeff(1));
  }
  if (bad > tol) {
    throw TorusError(ErrorCode::kPrecondition,
                     "state carries excluded modes (rho mean/first harmonics "
                     "or w mean)");
  }
}

void CheckShape(const ShapeState& state, double epsilon) {
  const int points = 8 * std::max(1, state.truncation()) + 1;
  const std::vector<double> rho = state.rho.Sample(points);
  const double min_rho = *std::min_element(rho.begin(), rho.end());
  if (1.0 + epsilon * min_rho < kMinRadiusFraction) {
    std::ostringstream msg;
    msg << "min r / r0 = " << 1.0 + epsilon * min_rho << " below "
        << kMinRadiusFraction;
    throw TorusError(ErrorCode::kDegenerateShape, msg.str());
  }
}

Vec3 SurfacePoint(const TorusConfig& cfg, const ShapeState& state,
                  double theta, double phi) {
  const Basis b = MakeBasis(theta, phi);
  const double r = cfg.r0 * (1.0 + cfg.epsilon * state.rho(theta));
  return cfg.major_radius() * b.eps1 + r * b.eps_r;
}

SurfaceFrame LocalFrame(const ShapeState& state, const TorusConfig& cfg,
                        double theta, double phi) {
  const double rho = state.rho(theta);
  const double r = 1.0 + cfg.epsilon * rho;
  if (r < kMinRadiusFraction) {
    throw TorusError(ErrorCode::kDegenerateShape,
                     "cross-section radius collapsed");
  }
  const double dr = cfg.epsilon * Differentiate(state.rho, 1)(theta);
  const Basis b = MakeBasis(theta, phi);
  SurfaceFrame f;
  f.eps1 = b.eps1;
  f.eps2 = b.eps2;
  f.eps_r = b.eps_r;
  f.eps_theta = b.eps_theta;
  const double norm = std::hypot(dr, r);
  f.tangent_t = (dr * b.eps_r + r * b.eps_theta) / norm;
  f.normal = (r * b.eps_r - dr * b.eps_theta) / norm;
  return f;
}

KinematicFields ComputeKinematicFields(const ShapeState& state,
                                       const TorusConfig& cfg,
                                       const PeriodicSeries& omega_rate,
                                       double theta, double phi) {
  const double eps = cfg.epsilon;
  const double big_r = cfg.major_radius();
  const double r = cfg.r0 * (1.0 + eps * state.rho(theta));
  const double dr = cfg.r0 * eps * Differentiate(state.rho, 1)(theta);
  const double d2r = cfg.r0 * eps * Differentiate(state.rho, 2)(theta);
  const double om = cfg.omega0 * (1.0 + eps * state.w(theta));
  const double dom = cfg.omega0 * eps * Differentiate(state.w, 1)(theta);
  const double cap = omega_rate(theta);
  const double dcap = Differentiate(omega_rate, 1)(theta);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double arm = big_r + r * c;  // distance from the symmetry axis
  const double darm = dr * c - r * s;

  const Basis b = MakeBasis(theta, phi);
  KinematicFields k;
  k.velocity = om * (dr * b.eps_r + r * b.eps_theta) + cap * arm * b.eps2;
  const double a_r = (d2r - r) * om * om + dr * dom * om - arm * c * cap * cap;
  const double a_2 = (darm * cap + arm * dcap) * om + darm * om * cap;
  const double a_t = 2.0 * dr * om * om + r * dom * om + arm * s * cap * cap;
  k.acceleration = a_r * b.eps_r + a_2 * b.eps2 + a_t * b.eps_theta;
  return k;
}

ProfileSamples SampleProfiles(const ShapeState& state, double epsilon,
                              int points) {
  ProfileSamples p;
  p.theta = ThetaGrid(points);
  const PeriodicSeries d_rho = Differentiate(state.rho, 1);
  const PeriodicSeries d2_rho = Differentiate(state.rho, 2);
  const PeriodicSeries d_w = Differentiate(state.w, 1);
  const size_t m = p.theta.size();
  p.r.resize(m);
  p.dr.resize(m);
  p.d2r.resize(m);
  p.omega.resize(m);
  p.domega.resize(m);
  for (size_t j = 0; j < m; ++j) {
    const double t = p.theta[j];
    p.r[j] = 1.0 + epsilon * state.rho(t);
    p.dr[j] = epsilon * d_rho(t);
    p.d2r[j] = epsilon * d2_rho(t);
    p.omega[j] = 1.0 + epsilon * state.w(t);
    p.domega[j] = epsilon * d_w(t);
  }
  return p;
}

void AccelerationOverOmegaSamples(const ProfileSamples& p,
                                  std::vector<double>& radial,
                                  std::vector<double>& polar) {
  const size_t m = p.theta.size();
  radial.resize(m);
  polar.resize(m);
  for (size_t j = 0; j < m; ++j) {
    radial[j] = (p.d2r[j] - p.r[j]) * p.omega[j] + p.dr[j] * p.domega[j];
    polar[j] = 2.0 * p.dr[j] * p.omega[j] + p.r[j] * p.domega[j];
  }
}

AccelerationOverOmega ComputeAccelerationOverOmega(const ShapeState& state,
                                                   const TorusConfig& cfg,
                                                   int points) {
  const int n = state.truncation();
  if (points <= 0) points = 6 * n + 1;
  const ProfileSamples p = SampleProfiles(state, cfg.epsilon, points);
  std::vector<double> radial, polar;
  AccelerationOverOmegaSamples(p, radial, polar);
  return AccelerationOverOmega{Analyze(radial, n), Analyze(polar, n)};
}

FluxQuantities ComputeFluxQuantities(const ShapeState& state,
                                     const TorusConfig& cfg,
                                     const PeriodicSeries& s) {
  const int n = std::max(state.truncation(), s.truncation());
  const int points = 4 * n + 1;
  const ProfileSamples p = SampleProfiles(state, cfg.epsilon, points);
  const std::vector<double> s_samples = s.Sample(points);
  const double big_r = cfg.major_radius();
  std::vector<double> delta(points), area(points);
  for (int j = 0; j < points; ++j) {
    if (!(s_samples[j] > 0.0)) {
      throw TorusError(ErrorCode::kInvalidThickness,
                       "thickness must be positive");
    }
    const double r = cfg.r0 * p.r[j];
    const double dr = cfg.r0 * p.dr[j];
    delta[j] = s_samples[j] * r / std::hypot(dr, r);
    area[j] = 2.0 * std::numbers::pi * (big_r + r * std::cos(p.theta[j])) *
              delta[j];
  }
  return FluxQuantities{Analyze(delta, n), Analyze(area, n)};
}

}  // namespace torus
