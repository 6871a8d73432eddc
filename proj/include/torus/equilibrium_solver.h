#ifndef TORUS_EQUILIBRIUM_SOLVER_H_
#define TORUS_EQUILIBRIUM_SOLVER_H_

#include <functional>
#include <vector>

#include "torus/gravity_kernels.h"
#include "torus/periodic_series.h"
#include "torus/quadrature.h"
#include "torus/torus_geometry.h"

namespace torus {

struct SolverConfig {
  int modes = 32;
  double tol = 1e-10;     // X-norm step tolerance
  int max_iter = 100;
  double ball_radius = 0.0;  // 0 selects 2 ||(0, wbar)||_X
  bool enforce_ball = false;  // leaving the ball raises kOutsideBall
  int theta_nodes = 0;       // 0 selects 4 * modes
  QuadratureParams quad;
  bool estimate_error = true;  // refined-scheme pass at the solution

  // Throws kInvalidConfig.
  void Validate() const;
  double EffectiveBallRadius() const;
  int EffectiveThetaNodes() const;
};

struct SolverDiagnostics {
  int iterations = 0;
  bool converged = false;
  double final_step = 0.0;
  double ball_radius = 0.0;
  double max_iterate_norm = 0.0;
  bool inside_ball = true;         // every iterate within ball_radius
  double contraction_ratio = 0.0;  // max step ratio over the iteration tail
  std::vector<double> steps;       // ||x_{k+1} - x_k||_X
  std::vector<double> norms;       // ||x_k||_X, including the start
  std::vector<double> c_history;   // c(eps) at each iterate
  double residual_max = 0.0;       // max |E| / eps at the solution
  double quadrature_error = -1.0;  // refined-pair estimate on eps F
  int theta_nodes = 0;
};

struct EquilibriumSolution {
  TorusConfig config;
  SolverConfig solver;
  ShapeState state;
  PeriodicSeries s;          // thickness, length
  PeriodicSeries omega_rate; // Omega, 1 / time
  double j_sq = 0.0;         // (R + r cos)^4 Omega^2, length^4 / time^2
  double c_flux = 0.0;       // C(R), length^3 / time
  double c_eps = 0.0;
  double f_mean = 0.0;       // <F> in units omega0 r0 eps c
  double h_mean = 0.0;       // <1 / ((1 + eps w) g^3)>
  SolverDiagnostics diagnostics;
};

// L(rho, w) = (p, v).
struct LinearImage {
  PeriodicSeries p;
  PeriodicSeries v;
};

LinearImage ApplyL(const ShapeState& state);

// Exact inverse on admissible (p, v): zero means and v without first
// harmonics. Throws kPrecondition otherwise.
ShapeState InvertL(const PeriodicSeries& p, const PeriodicSeries& v);

// Reduced forcing Phi = eps (F - (cos, -sin) (h / <h>) <F>) on the force
// grid, so that the right-hand side of the reduced system is c Phi (units
// omega0 r0).
struct ReducedForcing {
  std::vector<double> theta;
  std::vector<double> radial;
  std::vector<double> polar;
  double h_mean = 0.0;
};

ReducedForcing ComputeReducedForcing(const ShapeState& state, double epsilon,
                                     const NewtonianForceResult& forces);

struct OmegaSqAndJResult {
  double j_sq = 0.0;
  PeriodicSeries omega_sq;  // 1 / time^2
};

// Throws kInvalidRegime when <F> >= 0 (no real Omega).
OmegaSqAndJResult OmegaSqAndJ(const ShapeState& state, const TorusConfig& cfg,
                              const NewtonianForceResult& forces,
                              double c_eps);

struct ResidualResult {
  double c_eps = 0.0;
  PeriodicSeries nr_tilde;      // mean removed
  PeriodicSeries ntheta_tilde;  // mean and first harmonics removed
  std::vector<double> er;       // E^r = A^r - c Phi^r on the force grid
  std::vector<double> etheta;   // A^theta - c Phi^theta + (r'/r) E^r
  double h_mean = 0.0;
};

ResidualResult ComputeCAndResidual(const ShapeState& state,
                                   const TorusConfig& cfg,
                                   const NewtonianForceResult& forces);

struct ReconstructedProfiles {
  PeriodicSeries s;
  PeriodicSeries omega_rate;
  double c_flux = 0.0;
};

ReconstructedProfiles ReconstructProfiles(const ShapeState& state,
                                          const TorusConfig& cfg,
                                          double c_eps, double j_sq);

// s_bar = omega0^2 r0 / (2 pi mu G) (1 - 3/4 eps cos theta).
PeriodicSeries LeadingThickness(const TorusConfig& cfg, int modes);

// Called after every iteration with (iteration, state, step).
using IterationObserver =
    std::function<void(int, const ShapeState&, double)>;

// Ball membership is recorded in the diagnostics and only enforced with
// enforce_ball. Throws kOutsideBall, kNoConvergence, kInvalidRegime,
// kDegenerateShape.
EquilibriumSolution FixedPointSolve(const TorusConfig& cfg,
                                    const SolverConfig& solver,
                                    const IterationObserver& observer = {});

}  // namespace torus

#endif  // TORUS_EQUILIBRIUM_SOLVER_H_
