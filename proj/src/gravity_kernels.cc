#include "torus/gravity_kernels.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "boost/math/quadrature/exp_sinh.hpp"
#include "boost/math/quadrature/gauss_kronrod.hpp"
#include "torus/errors.h"
#include "torus/parallel.h"

namespace torus {

namespace {

constexpr double kPi = std::numbers::pi;

// cos(n a) - 1 and sin(n a) for every alpha node and n = 1..N, so that
// phi(theta + a) - phi(theta) = sum_n A_n (cos na - 1) + B_n sin na with
// A_n = c_n cos n theta + s_n sin n theta, B_n = s_n cos n theta - c_n sin n theta.
class ShiftTable {
 public:
  ShiftTable(const std::vector<double>& a_nodes, int modes)
      : modes_(modes),
        cm_(a_nodes.size() * modes),
        sn_(a_nodes.size() * modes) {
    for (size_t i = 0; i < a_nodes.size(); ++i) {
      for (int n = 1; n <= modes; ++n) {
        const double h = std::sin(0.5 * n * a_nodes[i]);
        cm_[i * modes + n - 1] = -2.0 * h * h;
        sn_[i * modes + n - 1] = std::sin(n * a_nodes[i]);
      }
    }
  }

  // Differences at theta + a_i (plus) and theta - a_i (minus).
  void Delta(size_t i, const std::vector<double>& a, const std::vector<double>& b,
             double& plus, double& minus) const {
    double even = 0.0, odd = 0.0;
    const double* cm = &cm_[i * modes_];
    const double* sn = &sn_[i * modes_];
    for (int k = 0; k < modes_; ++k) {
      even += a[k] * cm[k];
      odd += b[k] * sn[k];
    }
    plus = even + odd;
    minus = even - odd;
  }

 private:
  int modes_;
  std::vector<double> cm_, sn_;
};

void RotatedCoefficients(const PeriodicSeries& s, double theta,
                         std::vector<double>& a, std::vector<double>& b,
                         int modes) {
  a.assign(modes, 0.0);
  b.assign(modes, 0.0);
  for (int n = 1; n <= std::min(modes, s.truncation()); ++n) {
    const double c = std::cos(n * theta);
    const double sn = std::sin(n * theta);
    a[n - 1] = s.cos_coeff(n) * c + s.sin_coeff(n) * sn;
    b[n - 1] = s.sin_coeff(n) * c - s.cos_coeff(n) * sn;
  }
}

std::vector<double> ZetaNodes(const QuadratureScheme& scheme) {
  const double eps = scheme.epsilon();
  std::vector<double> zeta(scheme.eta_nodes().size());
  for (size_t j = 0; j < zeta.size(); ++j) {
    zeta[j] = Chord(eps * scheme.eta_nodes()[j]) / (eps * eps);
  }
  return zeta;
}

std::vector<double> ChordNodes(const QuadratureScheme& scheme) {
  std::vector<double> z(scheme.alpha_nodes().size());
  for (size_t i = 0; i < z.size(); ++i) z[i] = Chord(scheme.alpha_nodes()[i]);
  return z;
}

void CheckOperatorEpsilon(double eps) {
  if (!(eps > 0.0 && eps <= kMaxOperatorEpsilon)) {
    throw TorusError(ErrorCode::kPrecondition,
                     "kernel operators need epsilon in (0, 0.25]");
  }
}

double MaxAbsDiff(const std::vector<double>& x, const std::vector<double>& y) {
  double m = 0.0;
  for (size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

void ThrowInaccurate(double estimate, double tolerance) {
  std::ostringstream msg;
  msg << "quadrature error estimate " << estimate << " exceeds tolerance "
      << tolerance;
  throw TorusError(ErrorCode::kQuadratureAccuracy, msg.str());
}

// Operator image samples on ThetaGrid(points).
std::vector<double> OperatorSamples(KernelOperator kind,
                                    const PeriodicSeries& phi,
                                    const QuadratureScheme& scheme,
                                    int points) {
  const int modes = phi.truncation();
  const std::vector<double>& an = scheme.alpha_nodes();
  const std::vector<double>& aw = scheme.alpha_weights();
  const std::vector<double>& ew = scheme.eta_weights();
  const std::vector<double> zeta = ZetaNodes(scheme);
  const std::vector<double> zc = ChordNodes(scheme);
  const ShiftTable table(an, modes);
  const std::vector<double> grid = ThetaGrid(points);
  std::vector<double> out(points, 0.0);

  ParallelFor(points, [&](int t) {
    const double theta = grid[t];
    const double phi_theta = phi(theta);
    std::vector<double> ca, cb;
    RotatedCoefficients(phi, theta, ca, cb, modes);
    const size_t na = an.size();
    // Per alpha node: value factor for +a and -a.
    std::vector<double> fp(na), fm(na);
    for (size_t i = 0; i < na; ++i) {
      double dp = 0.0, dm = 0.0;
      if (modes > 0) table.Delta(i, ca, cb, dp, dm);
      const double s = std::sin(an[i]);
      switch (kind) {
        case KernelOperator::kK1r:
          fp[i] = 2.0 * dp;
          fm[i] = 2.0 * dm;
          break;
        case KernelOperator::kK1:
        case KernelOperator::kK1Tilde:
        case KernelOperator::kK1Hat:
          fp[i] = 2.0 * s * (phi_theta + dp);
          fm[i] = -2.0 * s * (phi_theta + dm);
          break;
        case KernelOperator::kK2:
        case KernelOperator::kK2Tilde:
        case KernelOperator::kK2Hat:
          fp[i] = -zc[i] * (phi_theta + dp);
          fm[i] = -zc[i] * (phi_theta + dm);
          break;
        case KernelOperator::kK3:
          fp[i] = phi_theta + dp;
          fm[i] = phi_theta + dm;
          break;
      }
    }
    double total = 0.0;
    for (const QuadratureBlock& b : scheme.blocks()) {
      double block = 0.0;
      for (int i = b.alpha_begin; i < b.alpha_end; ++i) {
        const double f = fp[i] + fm[i];
        const double z = zc[i];
        double row = 0.0;
        for (int j = b.eta_begin; j < b.eta_end; ++j) {
          const double q = zeta[j] + z;
          double k = ew[j] / (q * std::sqrt(q));
          switch (kind) {
            case KernelOperator::kK3:
              k *= zeta[j];
              break;
            case KernelOperator::kK1Tilde:
            case KernelOperator::kK2Tilde:
              k *= -1.5 * zeta[j] / q;
              break;
            case KernelOperator::kK1Hat:
            case KernelOperator::kK2Hat:
              k *= -1.5 * z / q;
              break;
            default:
              break;
          }
          row += k;
        }
        block += aw[i] * f * row;
      }
      total += block;
    }
    out[t] = 2.0 * total;  // beta < 0 half
  });
  return out;
}

double K3Quadrant(const QuadratureScheme& scheme) {
  const std::vector<double>& aw = scheme.alpha_weights();
  const std::vector<double>& ew = scheme.eta_weights();
  const std::vector<double> zeta = ZetaNodes(scheme);
  const std::vector<double> zc = ChordNodes(scheme);
  double total = 0.0;
  for (const QuadratureBlock& b : scheme.blocks()) {
    double block = 0.0;
    for (int i = b.alpha_begin; i < b.alpha_end; ++i) {
      double row = 0.0;
      for (int j = b.eta_begin; j < b.eta_end; ++j) {
        const double q = zeta[j] + zc[i];
        row += ew[j] * zeta[j] / (q * std::sqrt(q));
      }
      block += aw[i] * row;
    }
    total += block;
  }
  return total;
}

// Shared state for the force integrals of one shape.
class ForceIntegrator {
 public:
  ForceIntegrator(const ShapeState& state, const QuadratureScheme& scheme)
      : state_(state),
        scheme_(scheme),
        modes_(std::max(state.rho.truncation(), state.w.truncation())),
        zeta_(ZetaNodes(scheme)),
        zc_(ChordNodes(scheme)),
        table_(scheme.alpha_nodes(), modes_) {}

  // Returns F^r and F^theta at theta.
  void At(double theta, double& fr, double& ft) const {
    const double eps = scheme_.epsilon();
    const std::vector<double>& an = scheme_.alpha_nodes();
    const std::vector<double>& aw = scheme_.alpha_weights();
    const std::vector<double>& ew = scheme_.eta_weights();
    const size_t na = an.size();

    const double rho_t = state_.rho(theta);
    const double w_t = state_.w(theta);
    const double r_t = 1.0 + eps * rho_t;
    const double p_t = 1.0 + eps * r_t * std::cos(theta);
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    std::vector<double> ra, rb, wa, wb;
    RotatedCoefficients(state_.rho, theta, ra, rb, modes_);
    RotatedCoefficients(state_.w, theta, wa, wb, modes_);

    // Coefficients of the integrands, linear in zeta:
    //   Q = zeta q1 + q0, g_r = (zeta r1 + r0) / (Q^{3/2} omega_a), etc.
    std::vector<Side> plus(na), minus(na);
    for (size_t i = 0; i < na; ++i) {
      double drp = 0.0, drm = 0.0, dwp = 0.0, dwm = 0.0;
      if (modes_ > 0) {
        table_.Delta(i, ra, rb, drp, drm);
        table_.Delta(i, wa, wb, dwp, dwm);
      }
      const double a = an[i];
      const double sa = std::sin(a);
      plus[i] = MakeSide(eps, theta + a, sa, zc_[i], rho_t + drp, drp,
                         w_t + dwp, r_t, p_t, ct, st);
      minus[i] = MakeSide(eps, theta - a, -sa, zc_[i], rho_t + drm, drm,
                          w_t + dwm, r_t, p_t, ct, st);
    }

    double total_r = 0.0, total_t = 0.0;
    for (const QuadratureBlock& b : scheme_.blocks()) {
      double block_r = 0.0, block_t = 0.0;
      for (int i = b.alpha_begin; i < b.alpha_end; ++i) {
        const Side& p = plus[i];
        const Side& m = minus[i];
        double row_r = 0.0, row_t = 0.0;
        for (int j = b.eta_begin; j < b.eta_end; ++j) {
          const double z = zeta_[j];
          const double qp = z * p.q1 + p.q0;
          const double qm = z * m.q1 + m.q0;
          const double ip = p.inv_omega / (qp * std::sqrt(qp));
          const double im = m.inv_omega / (qm * std::sqrt(qm));
          row_r += ew[j] * ((z * p.r1 + p.r0) * ip + (z * m.r1 + m.r0) * im);
          row_t += ew[j] * ((z * p.t1 + p.t0) * ip + (z * m.t1 + m.t0) * im);
        }
        block_r += aw[i] * row_r;
        block_t += aw[i] * row_t;
      }
      total_r += block_r;
      total_t += block_t;
    }
    const double omega_t = 1.0 + eps * w_t;
    fr = 2.0 * total_r / omega_t;
    ft = 2.0 * total_t / omega_t;
  }

 private:
  struct Side {
    double q1, q0, r1, r0, t1, t0, inv_omega;
  };

  static Side MakeSide(double eps, double alpha, double sin_a, double z,
                       double rho_a, double drho, double w_a, double r_t,
                       double p_t, double ct, double st) {
    const double r_a = 1.0 + eps * rho_a;
    const double p_a = 1.0 + eps * r_a * std::cos(alpha);
    Side s;
    s.q1 = p_a * p_t;
    s.q0 = z * r_a * r_t + eps * eps * drho * drho;
    s.r1 = -ct * p_a;
    s.r0 = -z * r_a / eps + 2.0 * drho;
    s.t1 = st * p_a;
    s.t0 = 2.0 * sin_a * r_a / eps;
    s.inv_omega = 1.0 / (1.0 + eps * w_a);
    return s;
  }

  const ShapeState& state_;
  const QuadratureScheme& scheme_;
  int modes_;
  std::vector<double> zeta_, zc_;
  ShiftTable table_;
};

void ForceSamples(const ShapeState& state, const QuadratureScheme& scheme,
                  const std::vector<double>& grid, std::vector<double>& fr,
                  std::vector<double>& ft) {
  const ForceIntegrator integrator(state, scheme);
  const int points = static_cast<int>(grid.size());
  fr.assign(points, 0.0);
  ft.assign(points, 0.0);
  ParallelFor(points, [&](int t) { integrator.At(grid[t], fr[t], ft[t]); });
}

}  // namespace

double Chord(double t) {
  const double h = std::sin(0.5 * t);
  return 4.0 * h * h;
}

Numerators ComputeNumerators(const ShapeState& state, double epsilon,
                             double alpha, double beta, double theta) {
  const double eps = epsilon;
  const double rho_a = state.rho(alpha);
  const double rho_t = state.rho(theta);
  const double zb = Chord(beta);
  const double za = Chord(alpha - theta);
  const double ca = std::cos(alpha);
  const double ct = std::cos(theta);
  const double st = std::sin(theta);
  Numerators n;
  n.nr = 0.5 * (-zb * ct + eps * (-zb * ca * ct - za) +
                eps * eps * (-zb * rho_a * ca * ct - za * rho_a +
                             2.0 * (rho_a - rho_t)));
  n.ntheta = 0.5 * (zb * st + eps * (zb * ca * st + 2.0 * std::sin(alpha - theta)) +
                    eps * eps * (zb * rho_a * ca * st +
                                 2.0 * rho_a * std::sin(alpha - theta)));
  return n;
}

DenominatorSplit ComputeDenominatorSplit(const ShapeState& state,
                                         double epsilon, double alpha,
                                         double beta, double theta) {
  const double eps = epsilon;
  const double zb = Chord(beta);
  const double za = Chord(alpha - theta);
  DenominatorSplit out;
  out.d0_sq = zb + eps * eps * za;
  if (!(out.d0_sq > 0.0)) {
    throw TorusError(ErrorCode::kSingularPoint,
                     "coincident points in the distance kernel");
  }
  const double ra = state.rho(alpha);
  const double rt = state.rho(theta);
  const double ca = std::cos(alpha);
  const double ct = std::cos(theta);
  const double e2 = eps * eps;
  const double dr = ra - rt;
  const double first =
      eps * (ca + ct) + e2 * (ca * ct + ra * ca + rt * ct) +
      e2 * eps * (ra + rt) * ca * ct + e2 * e2 * ra * rt * ca * ct;
  // (rho_a - rho_t)^2 / z(alpha - theta) is carried as dr^2 without division.
  const double second = e2 * (eps * (ra + rt) + e2 * ra * rt) * za + e2 * e2 * dr * dr;
  out.d = (zb * first + second) / out.d0_sq;
  return out;
}

double SigmaField(const ShapeState& state, double epsilon, double alpha,
                  double beta, double theta) {
  const double zb = Chord(beta);
  const double za = Chord(alpha - theta);
  const double d0 = zb + epsilon * epsilon * za;
  if (!(d0 > 0.0)) {
    throw TorusError(ErrorCode::kSingularPoint, "sigma at coincident points");
  }
  const double ra = state.rho(alpha);
  const double rt = state.rho(theta);
  return ra - state.w(alpha) -
         1.5 * (zb * (std::cos(alpha) + std::cos(theta)) +
                epsilon * epsilon * za * (ra + rt)) / d0;
}

KernelSample EvaluateKernels(const ShapeState& state, double epsilon,
                             double alpha, double beta, double theta) {
  const double e2 = epsilon * epsilon;
  const double za = Chord(alpha - theta);
  const double zb = Chord(beta);
  const double d0 = zb + e2 * za;
  if (!(d0 > 0.0)) {
    throw TorusError(ErrorCode::kSingularPoint, "kernel at coincident points");
  }
  const double inv = 1.0 / (d0 * std::sqrt(d0));
  KernelSample k;
  k.k1r = 2.0 * e2 * (state.rho(alpha) - state.rho(theta)) * inv;
  k.k2 = -e2 * za * inv;
  k.k3 = zb * inv;
  k.k1 = 2.0 * e2 * std::sin(alpha - theta) * inv;
  return k;
}

const char* KernelOperatorName(KernelOperator kind) {
  switch (kind) {
    case KernelOperator::kK1r: return "K1r";
    case KernelOperator::kK1: return "K1";
    case KernelOperator::kK2: return "K2";
    case KernelOperator::kK3: return "K3";
    case KernelOperator::kK1Tilde: return "K1~";
    case KernelOperator::kK1Hat: return "K1^";
    case KernelOperator::kK2Tilde: return "K2~";
    case KernelOperator::kK2Hat: return "K2^";
  }
  return "?";
}

PeriodicSeries ApplyOperator(KernelOperator kind, const PeriodicSeries& phi,
                             const QuadratureScheme& scheme, double tolerance,
                             double* error_estimate) {
  CheckOperatorEpsilon(scheme.epsilon());
  const int modes = phi.truncation();
  const int points = 2 * modes + 1;
  const std::vector<double> coarse = OperatorSamples(kind, phi, scheme, points);
  if (tolerance > 0.0 || error_estimate != nullptr) {
    const std::vector<double> fine =
        OperatorSamples(kind, phi, scheme.Refined(), points);
    const double est = MaxAbsDiff(coarse, fine);
    if (error_estimate != nullptr) *error_estimate = est;
    if (tolerance > 0.0 && est > tolerance) ThrowInaccurate(est, tolerance);
  }
  return Analyze(coarse, modes);
}

PeriodicSeries FourierImage(KernelOperator kind, const PeriodicSeries& phi) {
  const int modes = phi.truncation();
  PeriodicSeries out(modes);
  auto rotate = [&](double factor) {
    for (int n = 1; n <= modes; ++n) {
      out.set_cos_coeff(n, factor * phi.sin_coeff(n));
      out.set_sin_coeff(n, -factor * phi.cos_coeff(n));
    }
  };
  switch (kind) {
    case KernelOperator::kK1r:
      for (int n = 1; n <= modes; ++n) {
        out.set_cos_coeff(n, -4.0 * kPi * n * phi.cos_coeff(n));
        out.set_sin_coeff(n, -4.0 * kPi * n * phi.sin_coeff(n));
      }
      break;
    case KernelOperator::kK1:
      rotate(4.0 * kPi);
      break;
    case KernelOperator::kK1Tilde:
      rotate(-2.0 * kPi);
      break;
    case KernelOperator::kK1Hat:
      rotate(-4.0 * kPi);
      break;
    case KernelOperator::kK2:  // -2 pi phi_0
      out.set_half_a0(-4.0 * kPi * phi.half_a0());
      break;
    case KernelOperator::kK2Tilde:  // pi phi_0
      out.set_half_a0(2.0 * kPi * phi.half_a0());
      break;
    case KernelOperator::kK2Hat:  // 2 pi phi_0
      out.set_half_a0(4.0 * kPi * phi.half_a0());
      break;
    case KernelOperator::kK3:
      throw TorusError(ErrorCode::kPrecondition,
                       "K3 has no epsilon-independent image");
  }
  return out;
}

double K3Scalar(const QuadratureScheme& scheme, double tolerance,
                double* error_estimate) {
  CheckOperatorEpsilon(scheme.epsilon());
  const double value = 4.0 * K3Quadrant(scheme);
  if (tolerance > 0.0 || error_estimate != nullptr) {
    const double est = std::abs(4.0 * K3Quadrant(scheme.Refined()) - value);
    if (error_estimate != nullptr) *error_estimate = est;
    if (tolerance > 0.0 && est > tolerance) ThrowInaccurate(est, tolerance);
  }
  return value;
}

std::vector<CanonicalIntegral> CanonicalIntegrals(int max_n) {
  using boost::math::quadrature::exp_sinh;
  using boost::math::quadrature::gauss_kronrod;
  constexpr double kTol = 1e-14;
  std::vector<CanonicalIntegral> table;
  exp_sinh<double> half_line;
  const double inf = std::numeric_limits<double>::infinity();
  for (double a : {0.1, 1.0, 10.0}) {
    auto first = [a](double x) { return a / std::pow(x * x + a, 1.5); };
    auto second = [a](double x) { return x * x * a / std::pow(x * x + a, 2.5); };
    auto third = [a](double x) { return a * a / std::pow(x * x + a, 2.5); };
    table.push_back({"a/(x^2+a)^(3/2)", a,
                     half_line.integrate(first, 0.0, inf, kTol), 1.0});
    table.push_back({"x^2 a/(x^2+a)^(5/2)", a,
                     half_line.integrate(second, 0.0, inf, kTol), 1.0 / 3.0});
    table.push_back({"a^2/(x^2+a)^(5/2)", a,
                     half_line.integrate(third, 0.0, inf, kTol), 2.0 / 3.0});
  }
  for (int n = 1; n <= max_n; ++n) {
    // (1 - cos n a) / (1 - cos a) = sin^2(n a / 2) / sin^2(a / 2)
    auto fejer = [n](double x) {
      if (x == 0.0) return static_cast<double>(n) * n;
      const double r = std::sin(0.5 * n * x) / std::sin(0.5 * x);
      return r * r;
    };
    // sin a sin n a / (2 (1 - cos a)) = cos(a / 2) sin(n a) / (2 sin(a / 2))
    auto conj = [n](double x) {
      if (x == 0.0) return static_cast<double>(n);
      return std::cos(0.5 * x) * std::sin(n * x) / (2.0 * std::sin(0.5 * x));
    };
    table.push_back({"(1-cos na)/(1-cos a) on (0,pi)", static_cast<double>(n),
                     gauss_kronrod<double, 61>::integrate(fejer, 0.0, kPi, 15, kTol),
                     n * kPi});
    table.push_back({"sin a sin na/(2(1-cos a)) on (-pi,pi)",
                     static_cast<double>(n),
                     gauss_kronrod<double, 61>::integrate(conj, -kPi, kPi, 15, kTol),
                     kPi});
  }
  return table;
}

NewtonianForceResult NewtonianForces(const ShapeState& state,
                                     const QuadratureScheme& scheme,
                                     int theta_points, double tolerance) {
  const int modes = state.truncation();
  if (theta_points <= 0) theta_points = std::max(4 * modes, 2 * modes + 1);
  NewtonianForceResult out;
  out.theta = ThetaGrid(theta_points);
  ForceSamples(state, scheme, out.theta, out.fr_samples, out.ftheta_samples);
  if (tolerance > 0.0) {
    std::vector<double> fr, ft;
    ForceSamples(state, scheme.Refined(), out.theta, fr, ft);
    // Measured on eps F, the scale of the reduced forcing.
    const double eps = scheme.epsilon();
    out.error_estimate = eps * std::max(MaxAbsDiff(fr, out.fr_samples),
                                        MaxAbsDiff(ft, out.ftheta_samples));
    if (out.error_estimate > tolerance) ThrowInaccurate(out.error_estimate, tolerance);
  }
  std::vector<double> f(theta_points);
  for (int j = 0; j < theta_points; ++j) {
    f[j] = out.fr_samples[j] * std::cos(out.theta[j]) -
           out.ftheta_samples[j] * std::sin(out.theta[j]);
  }
  out.f_mean = BracketMean(f);
  out.fr = Analyze(out.fr_samples, modes);
  out.ftheta = Analyze(out.ftheta_samples, modes);
  return out;
}

void NewtonianForcesAt(const ShapeState& state, const QuadratureScheme& scheme,
                       double theta, double& fr, double& ftheta) {
  const ForceIntegrator integrator(state, scheme);
  integrator.At(theta, fr, ftheta);
}

}  // namespace torus
