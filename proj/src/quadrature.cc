#include "torus/quadrature.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "torus/errors.h"

namespace torus {

namespace {

constexpr double kPi = std::numbers::pi;

GaussRule ComputeGaussLegendre(int order) {
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= order; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p2) / k;
      }
      dp = order * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  return rule;
}

// Appends the mapped Gauss rule on [lo, hi]; returns the first index.
int AppendPanel(double lo, double hi, const GaussRule& rule,
                std::vector<double>& nodes, std::vector<double>& weights) {
  const int first = static_cast<int>(nodes.size());
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    nodes.push_back(mid + half * rule.nodes[i]);
    weights.push_back(half * rule.weights[i]);
  }
  return first;
}

}  // namespace

const GaussRule& GaussLegendre(int order) {
  if (order < 1 || order > 200) {
    throw TorusError(ErrorCode::kPrecondition, "Gauss order must be 1..200");
  }
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) {
    it = cache.emplace(order, ComputeGaussLegendre(order)).first;
  }
  return it->second;
}

void QuadratureParams::Validate() const {
  std::ostringstream why;
  if (alpha_nodes < 2 || alpha_nodes > 64) why << "alpha_nodes must be 2..64; ";
  if (eta_nodes < 2 || eta_nodes > 64) why << "eta_nodes must be 2..64; ";
  if (refine_depth < 1 || refine_depth > 60) {
    why << "refine_depth must be 1..60; ";
  }
  if (alpha_panels < 2 || alpha_panels > 256) {
    why << "alpha_panels must be 2..256; ";
  }
  if (!why.str().empty()) throw TorusError(ErrorCode::kInvalidConfig, why.str());
}

QuadratureScheme QuadratureScheme::Build(double epsilon,
                                         const QuadratureParams& params) {
  params.Validate();
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw TorusError(ErrorCode::kInvalidConfig, "epsilon must be in (0, 1]");
  }
  QuadratureScheme q;
  q.epsilon_ = epsilon;
  q.params_ = params;
  const GaussRule& ga = GaussLegendre(params.alpha_nodes);
  const GaussRule& ge = GaussLegendre(params.eta_nodes);
  const int qa = params.alpha_nodes;
  const int qe = params.eta_nodes;
  const double s0 = kPi / params.alpha_panels;
  const double eta_max = kPi / epsilon;

  auto a_panel = [&](double lo, double hi) {
    return AppendPanel(lo, hi, ga, q.alpha_nodes_, q.alpha_weights_);
  };
  auto e_panel = [&](double lo, double hi) {
    return AppendPanel(lo, hi, ge, q.eta_nodes_, q.eta_weights_);
  };
  auto add = [&](int a0, int na, int e0, int ne) {
    q.blocks_.push_back(QuadratureBlock{a0, a0 + na, e0, e0 + ne});
  };

  // Corner box. eta_max >= pi > s0, so the box always fits.
  double h = s0;
  for (int k = 0; k < params.refine_depth; ++k) {
    const double h2 = 0.5 * h;
    const int a_hi = a_panel(h2, h);
    const int a_lo = a_panel(0.0, h2);
    const int e_hi = e_panel(h2, h);
    const int e_lo = e_panel(0.0, h2);
    add(a_hi, qa, e_lo, qe);
    add(a_lo, qa, e_hi, qe);
    add(a_hi, qa, e_hi, qe);
    h = h2;
  }
  // Innermost cell; its contribution is O(h) and kept only for coverage.
  add(a_panel(0.0, h), qa, e_panel(0.0, h), qe);

  // Panels outside the corner.
  const int a_outer_first = static_cast<int>(q.alpha_nodes_.size());
  for (int j = 1; j < params.alpha_panels; ++j) {
    a_panel(j * s0, (j + 1) * s0);
  }
  const int a_outer_end = static_cast<int>(q.alpha_nodes_.size());
  const int a_inner = a_panel(0.0, s0);
  const int e_inner = e_panel(0.0, s0);
  const int e_outer_first = static_cast<int>(q.eta_nodes_.size());
  double lo = s0;
  while (lo < eta_max) {
    double hi = 2.0 * lo;
    // fold a short remainder into the last panel
    if (hi >= eta_max || eta_max - hi < 0.5 * (hi - lo)) hi = eta_max;
    e_panel(lo, hi);
    lo = hi;
  }
  const int e_outer_end = static_cast<int>(q.eta_nodes_.size());

  add(a_outer_first, a_outer_end - a_outer_first, e_inner, qe);  // strip a > s0
  add(a_inner, qa, e_outer_first, e_outer_end - e_outer_first);  // strip eta > s0
  add(a_outer_first, a_outer_end - a_outer_first, e_outer_first,
      e_outer_end - e_outer_first);  // bulk
  return q;
}

QuadratureScheme QuadratureScheme::Refined() const {
  QuadratureParams p = params_;
  p.alpha_nodes += 4;
  p.eta_nodes += 4;
  p.refine_depth = std::min(60, p.refine_depth + 2);
  return Build(epsilon_, p);
}

double QuadratureScheme::Area() const {
  double area = 0.0;
  for (const QuadratureBlock& b : blocks_) {
    double wa = 0.0, we = 0.0;
    for (int i = b.alpha_begin; i < b.alpha_end; ++i) wa += alpha_weights_[i];
    for (int j = b.eta_begin; j < b.eta_end; ++j) we += eta_weights_[j];
    area += wa * we;
  }
  return area;
}

long QuadratureScheme::NodeCount() const {
  long count = 0;
  for (const QuadratureBlock& b : blocks_) {
    count += static_cast<long>(b.alpha_end - b.alpha_begin) *
             (b.eta_end - b.eta_begin);
  }
  return count;
}

}  // namespace torus
