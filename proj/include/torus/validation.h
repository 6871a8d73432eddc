#ifndef TORUS_VALIDATION_H_
#define TORUS_VALIDATION_H_

#include <map>
#include <string>
#include <vector>

#include "torus/equilibrium_solver.h"
#include "torus/torus_geometry.h"

namespace torus {

struct ValidationCheck {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  std::map<std::string, double> metadata;

  void Add(const std::string& name, double value, double tolerance);
  // Records a check whose pass flag is decided by the caller.
  void AddFlag(const std::string& name, double value, double tolerance,
               bool pass);
  const ValidationCheck* Find(const std::string& name) const;
  bool AllPass() const;
};

// Layout of the independent force quadrature. Around the singular point
// the square |a|, |eta| <= 1 is integrated in polar coordinates with
// antipodal pairing; the rest of (-pi, pi) x (-pi/eps, pi/eps) uses
// composite Gauss panels (geometric in eta).
struct ValidationParams {
  int theta_points = 0;     // 0 selects max(8N + 1, 65)
  int radial_nodes = 24;
  int angular_nodes = 16;
  int angular_panels = 3;   // per angular sector
  int outer_nodes = 16;
  int outer_a_panels = 8;   // over (1, pi)
};

// F^r, F^theta (units omega0 r0 eps c, divided by omega) from the raw
// Cartesian separation X(alpha, beta) - X(theta, 0).
struct IndependentForces {
  std::vector<double> theta;
  std::vector<double> fr;
  std::vector<double> ftheta;
  double f_mean = 0.0;
  double error_estimate = -1.0;  // on eps F
};

IndependentForces EvaluateIndependentForces(const ShapeState& state,
                                            double epsilon,
                                            const ValidationParams& params,
                                            bool estimate_error);

struct ForceBalance {
  double residual_over_eps = 0.0;  // max |E| / eps over the grid
  double c_used = 0.0;
  double error_estimate = -1.0;
};

// E^r = a^r/omega - c Phi^r, E^theta = a^theta/omega - c Phi^theta. A
// non-positive c_eps selects the mean radial balance.
ForceBalance CheckForceBalance(const ShapeState& state, const TorusConfig& cfg,
                               double c_eps, const ValidationParams& params);

// Kinematic brackets <A^r cos - A^theta sin>, <A^r sin + A^theta cos> and
// <r' a^r + r a^theta> on an (8N + 1)-point grid; valid for any state.
std::vector<ValidationCheck> CheckKinematicIdentities(const ShapeState& state,
                                                      const TorusConfig& cfg);

std::vector<ValidationCheck> CheckMomentIdentities(
    const EquilibriumSolution& sol, const IndependentForces& forces);

std::vector<ValidationCheck> CheckPowerAndKinematic(
    const EquilibriumSolution& sol, const IndependentForces& forces);

// (R + r cos)^2 Omega constant.
ValidationCheck CheckFirstIntegral(const EquilibriumSolution& sol);

// Needs at least three solutions; throws kPrecondition otherwise.
std::vector<ValidationCheck> CheckAsymptotics(
    std::vector<EquilibriumSolution> sweep);

// Sweep statistics of one solution.
struct AsymptoticMetrics {
  double rho_norm = 0.0;        // ||rho||_{W^{2,2}}
  double w_dev_norm = 0.0;      // ||w - wbar||_{W^{1,2}}
  double s_dev_over_eps = 0.0;  // ||(s - s_bar) / s0||_{W^{1,2}} / eps
  double omega_ratio = 0.0;     // mean Omega / (omega0 eps sqrt(log 1/eps))
};

AsymptoticMetrics ComputeAsymptoticMetrics(const EquilibriumSolution& sol);

// Runs every per-solution check.
ValidationReport ValidateSolution(const EquilibriumSolution& sol,
                                  const ValidationParams& params = {});

}  // namespace torus

#endif  // TORUS_VALIDATION_H_
