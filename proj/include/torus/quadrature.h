#ifndef TORUS_QUADRATURE_H_
#define TORUS_QUADRATURE_H_

#include <vector>

namespace torus {

struct GaussRule {
  std::vector<double> nodes;    // on (-1, 1), ascending
  std::vector<double> weights;  // positive, sum to 2
};

// Gauss-Legendre rule of the given order (Newton on the Legendre
// recurrence). Results are cached per order.
const GaussRule& GaussLegendre(int order);

struct QuadratureParams {
  int alpha_nodes = 10;   // Gauss order per alpha panel
  int eta_nodes = 10;     // Gauss order per eta panel
  int refine_depth = 40;  // dyadic levels toward the singular corner
  int alpha_panels = 16;  // uniform panels of width pi / alpha_panels

  // Throws kInvalidConfig on out-of-range values.
  void Validate() const;
};

// Tensor-product block of the integration domain.
struct QuadratureBlock {
  int alpha_begin, alpha_end;  // index range into alpha_nodes
  int eta_begin, eta_end;      // index range into eta_nodes
};

// Layout for the half-plane integrals over a = alpha - theta in (0, pi) and
// eta in (0, pi / eps), beta = eps * eta. The full (-pi, pi)^2 integral of a
// kernel even in beta is recovered by pairing a with -a and doubling.
//
// Around the singular corner (0, 0) the square [0, s0]^2, s0 = pi /
// alpha_panels, is split into dyadic L-shaped layers of three cells each.
// The strips a > s0 and eta > s0 use uniform panels in a and ratio-2
// geometric panels in eta. No node lies on a = 0 or eta = 0.
class QuadratureScheme {
 public:
  static QuadratureScheme Build(double epsilon, const QuadratureParams& params);

  // Same layout with both Gauss orders raised by 4 and one more refinement
  // level; used as the fine member of the error-estimate pair.
  QuadratureScheme Refined() const;

  double epsilon() const { return epsilon_; }
  const QuadratureParams& params() const { return params_; }
  int refinement_depth() const { return params_.refine_depth; }

  const std::vector<double>& alpha_nodes() const { return alpha_nodes_; }
  const std::vector<double>& alpha_weights() const { return alpha_weights_; }
  const std::vector<double>& eta_nodes() const { return eta_nodes_; }
  const std::vector<double>& eta_weights() const { return eta_weights_; }
  const std::vector<QuadratureBlock>& blocks() const { return blocks_; }

  // sum over blocks of (alpha weight sum) * (eta weight sum); equals
  // pi * pi / eps up to rounding.
  double Area() const;
  // Total number of (a, eta) nodes.
  long NodeCount() const;

 private:
  double epsilon_ = 0.0;
  QuadratureParams params_;
  std::vector<double> alpha_nodes_, alpha_weights_;
  std::vector<double> eta_nodes_, eta_weights_;
  std::vector<QuadratureBlock> blocks_;
};

}  // namespace torus

#endif  // TORUS_QUADRATURE_H_
