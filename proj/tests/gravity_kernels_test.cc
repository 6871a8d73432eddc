#include "torus/gravity_kernels.h"

#include <cmath>

#include <gtest/gtest.h>

#include "oracles.h"
#include "torus/errors.h"

namespace torus {
namespace {

constexpr double kPi = oracle::kPi;

TorusConfig UnitConfig(double eps) {
  TorusConfig c;
  c.epsilon = eps;
  return c;
}

// Difference vector (X(alpha, phi + beta) - X(theta, phi)) / R.
Vec3 Separation(const ShapeState& s, double eps, double alpha, double beta,
                double theta, double phi = 0.0) {
  const TorusConfig c = UnitConfig(eps);
  return (SurfacePoint(c, s, alpha, phi + beta) - SurfacePoint(c, s, theta, phi)) /
         c.major_radius();
}

// F^r and F^theta at theta from full 3D geometry at azimuth phi, in polar
// coordinates around the singular point with antipodal pairing. Units as
// NewtonianForces: 2 int int N / (omega(alpha) omega(theta) D^3).
void PolarForces(const ShapeState& s, double eps, double theta, double phi,
                 double& fr, double& ft) {
  const TorusConfig c = UnitConfig(eps);
  const SurfaceFrame frame = LocalFrame(s, c, theta, phi);
  const double om_t = 1.0 + eps * s.w(theta);
  auto g = [&](double a, double eta, double& gr, double& gt) {
    const double alpha = theta + a;
    const Vec3 d = Separation(s, eps, alpha, eps * eta, theta, phi);
    const double inv = 1.0 / ((1.0 + eps * s.w(alpha)) * om_t * std::pow(d.norm(), 3));
    gr = d.dot(frame.eps_r) * inv;
    gt = d.dot(frame.eps_theta) * inv;
  };
  const double a_max = kPi, e_max = kPi / eps;
  const double corner = std::atan2(e_max, a_max);
  const double breaks[] = {0.0, corner, kPi - corner, kPi};
  std::vector<double> xg, wg;
  oracle::GaussLegendre(16, xg, wg);
  long double acc_r = 0.0L, acc_t = 0.0L;
  for (int sector = 0; sector < 3; ++sector) {
    const int panels = 8;
    const double h = (breaks[sector + 1] - breaks[sector]) / panels;
    for (int p = 0; p < panels; ++p) {
      for (int i = 0; i < 16; ++i) {
        const double ang = breaks[sector] + (p + 0.5 + 0.5 * xg[i]) * h;
        const double ca = std::cos(ang), sa = std::sin(ang);
        const double r_max = std::min(std::abs(ca) > 1e-300 ? a_max / std::abs(ca) : 1e300,
                                      sa > 1e-300 ? e_max / sa : 1e300);
        double lo = 1e-7 * r_max;
        while (lo < r_max) {
          const double hi = std::min(4.0 * lo, r_max);
          for (int k = 0; k < 16; ++k) {
            const double rr = lo + (hi - lo) * 0.5 * (1.0 + xg[k]);
            double pr, pt, mr, mt;
            g(rr * ca, rr * sa, pr, pt);
            g(-rr * ca, -rr * sa, mr, mt);
            const double wt = wg[i] * 0.5 * h * wg[k] * 0.5 * (hi - lo) * rr;
            acc_r += wt * (pr + mr);
            acc_t += wt * (pt + mt);
          }
          lo = hi;
        }
      }
    }
  }
  fr = static_cast<double>(2.0L * eps * acc_r);
  ft = static_cast<double>(2.0L * eps * acc_t);
}

double MaxCoeffDiff(const PeriodicSeries& a, const PeriodicSeries& b) {
  double d = std::abs(a.half_a0() - b.half_a0());
  for (int n = 1; n <= a.truncation(); ++n) {
    d = std::max({d, std::abs(a.cos_coeff(n) - b.cos_coeff(n)),
                  std::abs(a.sin_coeff(n) - b.sin_coeff(n))});
  }
  return d;
}

TEST(Chord, ExamplesAndBounds) {
  EXPECT_EQ(Chord(0.0), 0.0);
  EXPECT_NEAR(Chord(kPi), 4.0, 1e-15);
  EXPECT_NEAR(Chord(kPi / 2), 2.0, 1e-15);
  for (int i = 1; i <= 1000; ++i) {
    const double s = kPi * i / 1000;
    EXPECT_LT(Chord(s) / (s * s), 1.0);
    EXPECT_GE(Chord(s) / (s * s), 4.0 / (kPi * kPi) - 1e-15);
  }
  EXPECT_NEAR(Chord(1e-9), 1e-18, 1e-32);
}

TEST(Numerators, FlatLimit) {
  const ShapeState zero = ShapeState::Zero(4);
  for (double b : {0.3, 1.7}) {
    const Numerators n = ComputeNumerators(zero, 0.0, 0.4, b, 1.1);
    EXPECT_NEAR(n.nr, -0.5 * Chord(b) * std::cos(1.1), 1e-15);
    EXPECT_NEAR(n.ntheta, 0.5 * Chord(b) * std::sin(1.1), 1e-15);
  }
}

TEST(Numerators, VanishAtCoincidentPoints) {
  const ShapeState s = RandomAdmissibleState(6, 1.0, 1);
  const Numerators n = ComputeNumerators(s, 0.1, 0.8, 0.0, 0.8);
  EXPECT_EQ(n.nr, 0.0);
  EXPECT_EQ(n.ntheta, 0.0);
}

TEST(Numerators, MatchVectorGeometry) {
  const double eps = 0.05;
  const ShapeState s = RandomAdmissibleState(6, 2.0, 21);
  const TorusConfig c = UnitConfig(eps);
  for (double theta : {-2.0, 0.4}) {
    const SurfaceFrame f = LocalFrame(s, c, theta, 0.0);
    for (double alpha : {-3.0, 0.1, 1.2}) {
      for (double beta : {-2.5, 0.01, 0.9}) {
        const Vec3 d = Separation(s, eps, alpha, beta, theta);
        const Numerators n = ComputeNumerators(s, eps, alpha, beta, theta);
        EXPECT_NEAR(n.nr, d.dot(f.eps_r), 1e-15);
        EXPECT_NEAR(n.ntheta, d.dot(f.eps_theta), 1e-15);
      }
    }
  }
}

TEST(DenominatorSplit, FlatLimitAndGeometry) {
  const DenominatorSplit flat =
      ComputeDenominatorSplit(ShapeState::Zero(4), 0.0, 0.3, 0.7, 1.0);
  EXPECT_EQ(flat.d, 0.0);
  EXPECT_NEAR(flat.d_sq(), Chord(0.7), 1e-16);

  const DenominatorSplit opp =
      ComputeDenominatorSplit(ShapeState::Zero(4), 0.1, 0.0, kPi, 0.0);
  EXPECT_NEAR(opp.d_sq(), Separation(ShapeState::Zero(4), 0.1, 0.0, kPi, 0.0).squaredNorm(),
              1e-14);

  const ShapeState s = RandomAdmissibleState(6, 2.0, 4);
  for (double eps : {0.1, 0.01}) {
    for (double alpha : {-1.0, 0.5, 3.0}) {
      for (double beta : {-0.3, 1e-3, 2.0}) {
        const DenominatorSplit sp = ComputeDenominatorSplit(s, eps, alpha, beta, 0.7);
        const double raw = Separation(s, eps, alpha, beta, 0.7).squaredNorm();
        EXPECT_NEAR(sp.d_sq() / raw, 1.0, 1e-12);
        EXPECT_NEAR(sp.d0_sq, Chord(beta) + eps * eps * Chord(alpha - 0.7), 1e-16);
      }
    }
  }
}

TEST(DenominatorSplit, SingularPointIsRejected) {
  try {
    ComputeDenominatorSplit(ShapeState::Zero(4), 0.1, 0.5, 0.0, 0.5);
    FAIL();
  } catch (const TorusError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSingularPoint);
  }
}

TEST(DenominatorSplit, PositiveInsideTheBall) {
  // States with X-norm up to the default ball radius keep 1 + d > 0.
  const double ball = 2.0 * ShapeState::Leading(8).XNorm();
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ShapeState s = RandomAdmissibleState(8, 1.0, seed);
    const double scale = ball / s.XNorm();
    s.rho *= scale;
    s.w *= scale;
    for (double eps : {0.1, 0.01}) {
      for (int i = 0; i < 24; ++i) {
        for (int j = 1; j < 24; ++j) {
          const double alpha = -kPi + 2 * kPi * i / 24;
          const double beta = -kPi + 2 * kPi * j / 24;
          EXPECT_GT(1.0 + ComputeDenominatorSplit(s, eps, alpha, beta, 0.3).d, 0.0);
        }
      }
    }
  }
}

TEST(SigmaField, Examples) {
  const ShapeState zero = ShapeState::Zero(4);
  const double eps = 0.1, a = 0.4, b = 0.9, t = -0.6;
  const double d0 = Chord(b) + eps * eps * Chord(a - t);
  EXPECT_NEAR(SigmaField(zero, eps, a, b, t),
              -1.5 * Chord(b) * (std::cos(a) + std::cos(t)) / d0, 1e-15);
  EXPECT_EQ(SigmaField(zero, eps, 0.4, 0.0, -0.6), 0.0);
}

TEST(SigmaField, K2ImageApproachesLeadingOrder) {
  // int int K2 sigma -> 4 pi (rho(theta) + cos(theta) / 2) as eps -> 0.
  ShapeState s = ShapeState::Zero(4);
  s.rho.set_cos_coeff(2, 0.3);
  s.w.set_sin_coeff(1, 0.2);
  const double theta = 0.5;
  const double target = 4 * kPi * (s.rho(theta) + 0.5 * std::cos(theta));
  double prev = 1e300;
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    const QuadratureScheme q = QuadratureScheme::Build(eps, QuadratureParams{});
    long double acc = 0.0L;
    for (const QuadratureBlock& b : q.blocks()) {
      for (int i = b.alpha_begin; i < b.alpha_end; ++i) {
        for (int j = b.eta_begin; j < b.eta_end; ++j) {
          const double a = q.alpha_nodes()[i], beta = eps * q.eta_nodes()[j];
          const double w = q.alpha_weights()[i] * q.eta_weights()[j] * eps;
          for (double sa : {-1.0, 1.0}) {
            for (double sb : {-1.0, 1.0}) {
              const double alpha = theta + sa * a;
              acc += w * EvaluateKernels(s, eps, alpha, sb * beta, theta).k2 *
                     SigmaField(s, eps, alpha, sb * beta, theta);
            }
          }
        }
      }
    }
    const double err = std::abs(static_cast<double>(acc) - target);
    EXPECT_LT(err, prev) << eps;
    prev = err;
  }
  EXPECT_LT(prev, 0.01 * std::abs(target));
}

TEST(EvaluateKernels, OriginalVariableForms) {
  const ShapeState s = RandomAdmissibleState(5, 1.0, 9);
  const double eps = 0.05, a = 0.3, b = 0.2, t = -1.0;
  const double d0 = Chord(b) + eps * eps * Chord(a - t);
  const double d3 = d0 * std::sqrt(d0);
  const KernelSample k = EvaluateKernels(s, eps, a, b, t);
  EXPECT_NEAR(k.k3, Chord(b) / d3, 1e-12);
  EXPECT_NEAR(k.k2, -eps * eps * Chord(a - t) / d3, 1e-12);
  EXPECT_NEAR(k.k1, 2 * eps * eps * std::sin(a - t) / d3, 1e-12);
  EXPECT_NEAR(k.k1r, 2 * eps * eps * (s.rho(a) - s.rho(t)) / d3, 1e-12);
}

TEST(ApplyOperator, K1rAnnihilatesConstants) {
  const QuadratureScheme q = QuadratureScheme::Build(0.01, QuadratureParams{});
  const auto out = ApplyOperator(KernelOperator::kK1r, PeriodicSeries::Constant(3.0, 4), q);
  EXPECT_EQ(SobolevNorm(out, 0), 0.0);
}

TEST(ApplyOperator, K2OfOneNearMinusFourPi) {
  const QuadratureScheme q = QuadratureScheme::Build(1e-3, QuadratureParams{});
  const auto out = ApplyOperator(KernelOperator::kK2, PeriodicSeries::Constant(1.0, 4), q);
  EXPECT_NEAR(out.half_a0() / (-4 * kPi), 1.0, 0.01);
}

TEST(ApplyOperator, K1rOfCos2NearMinusEightPi) {
  const QuadratureScheme q = QuadratureScheme::Build(1e-3, QuadratureParams{});
  const auto out =
      ApplyOperator(KernelOperator::kK1r, PeriodicSeries::Mode(2, 1.0, 0.0, 4), q);
  EXPECT_NEAR(out.cos_coeff(2) / (-8 * kPi), 1.0, 0.02);
  EXPECT_NEAR(out.sin_coeff(2), 0.0, 1e-10);
}

TEST(ApplyOperator, MatchesFourierImagesWithShrinkingBand) {
  const KernelOperator kinds[] = {KernelOperator::kK1r, KernelOperator::kK1,
                                  KernelOperator::kK1Tilde, KernelOperator::kK1Hat};
  for (KernelOperator kind : kinds) {
    double band[2] = {0.0, 0.0};
    int slot = 0;
    for (double eps : {1e-2, 1e-3}) {
      const QuadratureScheme q = QuadratureScheme::Build(eps, QuadratureParams{});
      for (int n = 1; n <= 6; ++n) {
        if (kind == KernelOperator::kK1r && n == 1) continue;
        for (int basis = 0; basis < 2; ++basis) {
          const auto phi = PeriodicSeries::Mode(n, basis == 0, basis == 1, 6);
          const auto image = FourierImage(kind, phi);
          const auto quad = ApplyOperator(kind, phi, q);
          band[slot] = std::max(band[slot], MaxCoeffDiff(quad, image) /
                                                SobolevNorm(image, 0));
        }
      }
      ++slot;
    }
    EXPECT_LT(band[0], 0.05) << KernelOperatorName(kind);
    EXPECT_LT(band[1], band[0]) << KernelOperatorName(kind);
  }
}

TEST(ApplyOperator, ErrorPaths) {
  const QuadratureScheme big = QuadratureScheme::Build(0.3, QuadratureParams{});
  try {
    ApplyOperator(KernelOperator::kK2, PeriodicSeries::Constant(1.0, 2), big);
    FAIL();
  } catch (const TorusError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPrecondition);
  }
  QuadratureParams coarse;
  coarse.alpha_nodes = coarse.eta_nodes = 2;
  coarse.refine_depth = 2;
  const QuadratureScheme q = QuadratureScheme::Build(0.01, coarse);
  double est = -1.0;
  try {
    ApplyOperator(KernelOperator::kK1, PeriodicSeries::Mode(2, 0.0, 1.0, 2), q, 1e-12,
                  &est);
    FAIL();
  } catch (const TorusError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kQuadratureAccuracy);
  }
}

TEST(ApplyOperator, ErrorEstimateIsReported) {
  const QuadratureScheme q = QuadratureScheme::Build(0.01, QuadratureParams{});
  double est = -1.0;
  ApplyOperator(KernelOperator::kK1, PeriodicSeries::Mode(3, 0.0, 1.0, 3), q, 1e-6, &est);
  EXPECT_GE(est, 0.0);
  EXPECT_LT(est, 1e-6);
}

TEST(FourierImage, Examples) {
  const auto k1 = FourierImage(KernelOperator::kK1, PeriodicSeries::Mode(1, 0.0, 1.0, 3));
  EXPECT_NEAR(k1.cos_coeff(1), 4 * kPi, 1e-15);
  EXPECT_EQ(k1.sin_coeff(1), 0.0);
  const auto k2t =
      FourierImage(KernelOperator::kK2Tilde, PeriodicSeries::Constant(1.0, 3));
  EXPECT_NEAR(k2t.half_a0(), 2 * kPi, 1e-15);
  EXPECT_EQ(SobolevNorm(FourierImage(KernelOperator::kK1r, PeriodicSeries(3)), 0), 0.0);
  const auto k1r = FourierImage(KernelOperator::kK1r, PeriodicSeries::Mode(3, 1.0, 2.0, 3));
  EXPECT_NEAR(k1r.cos_coeff(3), -12 * kPi, 1e-14);
  EXPECT_NEAR(k1r.sin_coeff(3), -24 * kPi, 1e-14);
  EXPECT_THROW(FourierImage(KernelOperator::kK3, PeriodicSeries(3)), TorusError);
}

TEST(K3Scalar, MatchesNestedQuadratureOracle) {
  for (double eps : {0.1, 0.01}) {
    const QuadratureScheme q = QuadratureScheme::Build(eps, QuadratureParams{});
    // 4 int_0^pi int_0^pi z(beta) / (z(beta) + eps^2 z(a))^(3/2) da dbeta with
    // dyadic panels in both variables; the inner peak has width beta / eps.
    auto inner = [&](double beta) {
      const double zb = Chord(beta);
      auto f = [&](double a) {
        const double d = zb + eps * eps * Chord(a);
        return zb / (d * std::sqrt(d));
      };
      double lo = 0.0, hi = std::min(kPi, beta / eps);
      double acc = oracle::GaussPanels(f, lo, hi, 2, 20);
      while (hi < kPi) {
        lo = hi;
        hi = std::min(2.0 * hi, kPi);
        acc += oracle::GaussPanels(f, lo, hi, 1, 20);
      }
      return acc;
    };
    double outer = 0.0;
    double lo = 1e-14;
    while (lo < kPi) {
      const double hi = std::min(2.0 * lo, kPi);
      outer += oracle::GaussPanels(inner, lo, hi, 1, 20);
      lo = hi;
    }
    EXPECT_NEAR(K3Scalar(q) / (4.0 * outer), 1.0, 1e-11) << eps;
  }
}

TEST(K3Scalar, PositiveAndGrowing) {
  double prev = 0.0;
  for (double eps : {0.25, 0.1, 0.01, 1e-3}) {
    const double v = K3Scalar(QuadratureScheme::Build(eps, QuadratureParams{}));
    EXPECT_GT(v, prev);
    prev = v;
  }
  EXPECT_THROW(K3Scalar(QuadratureScheme::Build(0.5, QuadratureParams{})), TorusError);
}

TEST(CanonicalIntegrals, MatchExactValuesAndOracle) {
  const auto table = CanonicalIntegrals(16);
  EXPECT_EQ(table.size(), 9u + 32u);
  for (const CanonicalIntegral& c : table) {
    EXPECT_NEAR(c.value, c.exact, 1e-10) << c.name << " " << c.parameter;
  }
  // Independent check of the half-line family: xi = sqrt(a) tan t.
  for (double a : {0.1, 1.0, 7.0}) {
    auto mapped = [a](double (*f)(double, double)) {
      return oracle::AdaptiveSimpson(
          [=](double t) {
            const double xi = std::sqrt(a) * std::tan(t);
            const double jac = std::sqrt(a) / (std::cos(t) * std::cos(t));
            return f(xi, a) * jac;
          },
          0.0, kPi / 2 - 1e-9, 1e-13);
    };
    EXPECT_NEAR(mapped([](double x, double a) { return a / std::pow(x * x + a, 1.5); }),
                1.0, 1e-8);
    EXPECT_NEAR(mapped([](double x, double a) {
                  return x * x * a / std::pow(x * x + a, 2.5);
                }),
                1.0 / 3.0, 1e-8);
    EXPECT_NEAR(mapped([](double x, double a) { return a * a / std::pow(x * x + a, 2.5); }),
                2.0 / 3.0, 1e-8);
  }
  for (int n : {1, 5, 16}) {
    const double fejer = oracle::GaussPanels(
        [n](double a) {
          const double q = std::sin(0.5 * n * a) / std::sin(0.5 * a);
          return q * q;
        },
        0.0, kPi, 32, 20);
    EXPECT_NEAR(fejer, n * kPi, 1e-8);
  }
}

TEST(NewtonianForces, AgreeWithFullGeometryAtAnyAzimuth) {
  const double eps = 0.1;
  ShapeState s = RandomAdmissibleState(6, 0.5, 31);
  const QuadratureScheme q = QuadratureScheme::Build(eps, QuadratureParams{});
  for (double theta : {-2.2, 0.7}) {
    double fr, ft;
    NewtonianForcesAt(s, q, theta, fr, ft);
    for (double phi : {0.0, 0.9}) {
      double orr, ot;
      PolarForces(s, eps, theta, phi, orr, ot);
      EXPECT_NEAR(fr, orr, 1e-6 * std::abs(fr)) << theta << " " << phi;
      EXPECT_NEAR(ft, ot, 1e-6 * std::abs(fr)) << theta << " " << phi;
    }
  }
}

TEST(NewtonianForces, GridValuesMatchPointEvaluations) {
  const ShapeState s = ShapeState::Leading(8);
  const QuadratureScheme q = QuadratureScheme::Build(0.02, QuadratureParams{});
  const NewtonianForceResult f = NewtonianForces(s, q);
  ASSERT_EQ(f.theta.size(), 32u);
  for (size_t j : {0u, 7u, 19u}) {
    double fr, ft;
    NewtonianForcesAt(s, q, f.theta[j], fr, ft);
    EXPECT_EQ(fr, f.fr_samples[j]);
    EXPECT_EQ(ft, f.ftheta_samples[j]);
  }
  std::vector<double> proj(f.theta.size());
  for (size_t j = 0; j < proj.size(); ++j) {
    proj[j] = f.fr_samples[j] * std::cos(f.theta[j]) -
              f.ftheta_samples[j] * std::sin(f.theta[j]);
  }
  EXPECT_NEAR(f.f_mean, BracketMean(proj), 1e-12 * std::abs(f.f_mean));
}

TEST(NewtonianForces, LeadingOrderOfTheCircularTorus) {
  // F^r ~ -4 pi / eps; after removing the h-weighted share of <F> the first
  // harmonics approach 2 pi cos and 2 pi sin; <F> ~ -2 pi K3.
  double prev_c = 1e300, prev_m = 1e300;
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    const QuadratureScheme q = QuadratureScheme::Build(eps, QuadratureParams{});
    const NewtonianForceResult f = NewtonianForces(ShapeState::Zero(8), q);
    EXPECT_NEAR(f.fr.half_a0() * eps / (-4 * kPi), 1.0, 2 * eps);
    std::vector<double> h(f.theta.size());
    for (size_t j = 0; j < h.size(); ++j) h[j] = std::pow(1 + eps * std::cos(f.theta[j]), -3);
    const double hm = BracketMean(h);
    std::vector<double> ar(h.size()), at(h.size());
    for (size_t j = 0; j < h.size(); ++j) {
      ar[j] = f.fr_samples[j] - std::cos(f.theta[j]) * h[j] / hm * f.f_mean;
      at[j] = f.ftheta_samples[j] + std::sin(f.theta[j]) * h[j] / hm * f.f_mean;
    }
    const PeriodicSeries sr = Analyze(ar, 8), st = Analyze(at, 8);
    const double dev = std::max(std::abs(sr.cos_coeff(1) - 2 * kPi),
                                std::abs(st.sin_coeff(1) - 2 * kPi));
    EXPECT_LT(dev, prev_c);
    prev_c = dev;
    const double k3 = K3Scalar(q);
    const double mdev = std::abs(f.f_mean / (-2 * kPi * k3) - 1.0);
    EXPECT_LT(mdev, prev_m);
    prev_m = mdev;
  }
  EXPECT_LT(prev_c, 0.05);
  EXPECT_LT(prev_m, 1e-3);
}

TEST(NewtonianForces, DeterministicAcrossRuns) {
  const ShapeState s = RandomAdmissibleState(8, 0.5, 77);
  const QuadratureScheme q = QuadratureScheme::Build(0.02, QuadratureParams{});
  const NewtonianForceResult a = NewtonianForces(s, q);
  const NewtonianForceResult b = NewtonianForces(s, q);
  EXPECT_EQ(a.fr_samples, b.fr_samples);
  EXPECT_EQ(a.ftheta_samples, b.ftheta_samples);
  EXPECT_EQ(a.f_mean, b.f_mean);
}

}  // namespace
}  // namespace torus
