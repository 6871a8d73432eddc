#ifndef TORUS_TORUS_GEOMETRY_H_
#define TORUS_TORUS_GEOMETRY_H_

#include <cstdint>
#include <vector>

#include "Eigen/Core"
#include "torus/periodic_series.h"

namespace torus {

using Vec3 = Eigen::Vector3d;

// Physical parameters of the stratum. Lengths are in units of r0 when the
// library reports nondimensional profiles, times in units of 1/omega0.
struct TorusConfig {
  double r0 = 1.0;      // mean cross-section radius
  double omega0 = 1.0;  // mean rolling rate
  double mu_g = 1.0;    // surface density times gravitational constant
  double epsilon = 0.02;  // aspect ratio r0 / R

  double major_radius() const { return r0 / epsilon; }

  // Throws kInvalidConfig unless all parameters are positive and
  // epsilon <= 1.
  void Validate() const;
};

// The unknown pair: r = r0 (1 + eps rho), omega = omega0 (1 + eps w).
struct ShapeState {
  PeriodicSeries rho;
  PeriodicSeries w;

  int truncation() const { return rho.truncation(); }

  // ||rho||_{W^{2,2}} + ||w||_{W^{1,2}}.
  double XNorm() const;

  // Zero state with the given truncation.
  static ShapeState Zero(int modes);
  // (0, wbar) with wbar = -cos(theta) / 4, the starting point of the
  // contraction iteration.
  static ShapeState Leading(int modes);
};

// -cos(theta) / 4.
PeriodicSeries LeadingRateProfile(int modes);

ShapeState operator-(const ShapeState& a, const ShapeState& b);

// Admissible state with coefficients uniform in +-amplitude / n^2.
ShapeState RandomAdmissibleState(int modes, double amplitude,
                                 std::uint64_t seed);

// Throws kPrecondition if rho carries a mean or first harmonics or w a mean
// (beyond tol).
void CheckAdmissible(const ShapeState& state, double tol = 1e-12);

// Throws kDegenerateShape when min r < r0 / 2 on a fine grid.
void CheckShape(const ShapeState& state, double epsilon);

struct SurfaceFrame {
  Vec3 eps1;
  Vec3 eps2;
  Vec3 eps_r;
  Vec3 eps_theta;
  Vec3 normal;     // exterior unit normal
  Vec3 tangent_t;  // unit tangent to the phi = const line
};

// X(theta, phi) = R eps1(phi) + r(theta) eps_r(theta, phi).
Vec3 SurfacePoint(const TorusConfig& cfg, const ShapeState& state,
                  double theta, double phi);

SurfaceFrame LocalFrame(const ShapeState& state, const TorusConfig& cfg,
                        double theta, double phi);

struct KinematicFields {
  Vec3 velocity;
  Vec3 acceleration;
};

// Velocity and acceleration of the stationary motion with theta' = omega,
// phi' = Omega (Omega in 1/time). Evaluated at (theta, phi).
KinematicFields ComputeKinematicFields(const ShapeState& state,
                                       const TorusConfig& cfg,
                                       const PeriodicSeries& omega_rate,
                                       double theta, double phi = 0.0);

// Nondimensional profiles of r / r0 and omega / omega0 and their derivatives
// on the equispaced grid ThetaGrid(points).
struct ProfileSamples {
  std::vector<double> theta;
  std::vector<double> r, dr, d2r;
  std::vector<double> omega, domega;
};

ProfileSamples SampleProfiles(const ShapeState& state, double epsilon,
                              int points);

// a^r / omega = (r'' - r) omega + r' omega' and a^theta / omega =
// 2 r' omega + r omega', in units of omega0 r0.
struct AccelerationOverOmega {
  PeriodicSeries radial;
  PeriodicSeries polar;
};

// points = 0 selects 6N + 1 samples, enough to resolve the cubic products
// without aliasing.
AccelerationOverOmega ComputeAccelerationOverOmega(const ShapeState& state,
                                                   const TorusConfig& cfg,
                                                   int points = 0);

// Pointwise a^r / omega and a^theta / omega on given profile samples.
void AccelerationOverOmegaSamples(const ProfileSamples& p,
                                  std::vector<double>& radial,
                                  std::vector<double>& polar);

struct FluxQuantities {
  PeriodicSeries delta;         // normal thickness (length)
  PeriodicSeries section_area;  // |S_theta| (length^2)
};

// s is the thickness profile in length units. Throws kInvalidThickness if s
// is not positive on the grid.
FluxQuantities ComputeFluxQuantities(const ShapeState& state,
                                     const TorusConfig& cfg,
                                     const PeriodicSeries& s);

}  // namespace torus

#endif  // TORUS_TORUS_GEOMETRY_H_
