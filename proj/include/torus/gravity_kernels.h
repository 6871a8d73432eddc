#ifndef TORUS_GRAVITY_KERNELS_H_
#define TORUS_GRAVITY_KERNELS_H_

#include <string>
#include <vector>

#include "torus/periodic_series.h"
#include "torus/quadrature.h"
#include "torus/torus_geometry.h"

namespace torus {

// z(t) = 2 (1 - cos t), evaluated as 4 sin^2(t / 2).
double Chord(double t);

// Components of (X(alpha, beta) - X(theta, 0)) / R on eps_r and eps_theta
// at (theta, 0).
struct Numerators {
  double nr = 0.0;
  double ntheta = 0.0;
};

Numerators ComputeNumerators(const ShapeState& state, double epsilon,
                             double alpha, double beta, double theta);

// |X(alpha, beta) - X(theta, 0)|^2 / R^2 = d0_sq * (1 + d) with
// d0_sq = z(beta) + eps^2 z(alpha - theta).
struct DenominatorSplit {
  double d0_sq = 0.0;
  double d = 0.0;
  double d_sq() const { return d0_sq * (1.0 + d); }
};

// Throws kSingularPoint at the coincident point.
DenominatorSplit ComputeDenominatorSplit(const ShapeState& state,
                                         double epsilon, double alpha,
                                         double beta, double theta);

// rho(a) - w(a) - 3/2 (z(beta) (cos a + cos theta) + eps^2 z(a - theta)
// (rho(a) + rho(theta))) / d0_sq, with a = alpha.
double SigmaField(const ShapeState& state, double epsilon, double alpha,
                  double beta, double theta);

// Kernel values in the original (alpha, beta) variables.
struct KernelSample {
  double k1r = 0.0;  // 2 eps^2 (rho(alpha) - rho(theta)) / d0^3
  double k2 = 0.0;   // -eps^2 z(alpha - theta) / d0^3
  double k3 = 0.0;   // z(beta) / d0^3
  double k1 = 0.0;   // 2 eps^2 sin(alpha - theta) / d0^3
};

KernelSample EvaluateKernels(const ShapeState& state, double epsilon,
                             double alpha, double beta, double theta);

// Largest aspect ratio accepted by the operators and K3Scalar.
inline constexpr double kMaxOperatorEpsilon = 0.25;

enum class KernelOperator { kK1r, kK1, kK2, kK3, kK1Tilde, kK1Hat, kK2Tilde, kK2Hat };

const char* KernelOperatorName(KernelOperator kind);

// theta -> int int K(alpha, beta, theta) phi(alpha) dalpha dbeta over
// (-pi, pi)^2, computed with the scheme (beta = eps eta). For kK1r the
// argument is rho and the kernel carries rho(alpha) - rho(theta) itself.
// The image is sampled on 2N + 1 points and analyzed back to N modes.
// tolerance > 0 also evaluates on scheme.Refined() and throws
// kQuadratureAccuracy when the two differ by more than tolerance.
PeriodicSeries ApplyOperator(KernelOperator kind, const PeriodicSeries& phi,
                             const QuadratureScheme& scheme,
                             double tolerance = 0.0,
                             double* error_estimate = nullptr);

// Leading-order image of the operator on phi (no quadrature).
PeriodicSeries FourierImage(KernelOperator kind, const PeriodicSeries& phi);

// int int z(beta) / d0^3 over (-pi, pi)^2.
double K3Scalar(const QuadratureScheme& scheme, double tolerance = 0.0,
                double* error_estimate = nullptr);

struct CanonicalIntegral {
  std::string name;
  double parameter = 0.0;  // a or n
  double value = 0.0;
  double exact = 0.0;
};

// The three a-parameterized integrals over (0, inf) for a in {0.1, 1, 10}
// and the two trigonometric families for n = 1..max_n.
std::vector<CanonicalIntegral> CanonicalIntegrals(int max_n = 16);

// Newtonian self-attraction divided by omega(theta), in units of
// omega0 r0 eps c:
//   F^r = f^r / (omega0 r0 eps c omega / omega0), likewise F^theta,
// and <F> = <F^r cos - F^theta sin>.
struct NewtonianForceResult {
  PeriodicSeries fr;
  PeriodicSeries ftheta;
  double f_mean = 0.0;
  std::vector<double> theta;
  std::vector<double> fr_samples;
  std::vector<double> ftheta_samples;
  double error_estimate = -1.0;  // negative when not estimated
};

// theta_points = 0 selects 4N. tolerance as in ApplyOperator.
NewtonianForceResult NewtonianForces(const ShapeState& state,
                                     const QuadratureScheme& scheme,
                                     int theta_points = 0,
                                     double tolerance = 0.0);

// Forces at a single theta (no collocation).
void NewtonianForcesAt(const ShapeState& state, const QuadratureScheme& scheme,
                       double theta, double& fr, double& ftheta);

}  // namespace torus

#endif  // TORUS_GRAVITY_KERNELS_H_
