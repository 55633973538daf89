#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "bergman/domain.hpp"
#include "bergman/weight.hpp"

namespace bergman {

/// Largest total degree a rule may be asked for.
inline constexpr int kMaxQuadratureDegree = 200;

struct QuadratureRule {
  std::vector<Complex> nodes;
  std::vector<double> weights;  // all positive
  /// Total real-polynomial degree integrated exactly on the idealised region.
  int exact_degree = 0;

  std::size_t size() const { return nodes.size(); }
  double total_weight() const;
};

/// Gauss-Legendre nodes and weights on [0, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussLegendre& gauss_legendre(int n);

/// Polygons: centroid fan, each triangle carrying a collapsed (Duffy)
/// Gauss-Legendre product rule. Disk/ellipse: Gauss-Legendre in radius times
/// trapezoid in angle, mapped affinely.
/// Throws Error(DegreeTooLarge) above kMaxQuadratureDegree.
QuadratureRule rule_for(const ConvexDomain& domain, int target_degree);

/// As above, plus ear-clipped simple polygons. When `w` is max_affine the
/// polygonal pieces are first split along the weight's kink lines so every
/// cell sees a single affine piece.
QuadratureRule rule_for(const Region& region, int target_degree, const Weight& w);

/// Rule for one triangle with exactness >= degree.
QuadratureRule triangle_rule(const Triangle& t, int degree);

/// sum_i w_i f(node_i), accumulated in node order with Neumaier compensation
/// so a fixed rule gives bit-identical results. Throws
/// Error(NonFiniteIntegrand) if f is not finite at a node.
Complex integrate(const QuadratureRule& rule, const std::function<Complex(Complex)>& f);

/// Probe integrals for a candidate rule.
using ProbeSet = std::function<std::vector<double>(const QuadratureRule&)>;

struct StableRule {
  QuadratureRule rule;
  int degree = 0;
  /// Max relative change of the probe integrals between the last two rules.
  double stability = 0.0;
  /// Probe integrals on the returned rule.
  std::vector<double> probe_values;
};

struct RefineOptions {
  int step = 4;
  int max_degree = kMaxQuadratureDegree;
};

/// Raises the degree from `start_degree` in `options.step` increments until
/// every probe integral changes by <= rel_tol; returns the last rule. Throws
/// QuadratureNotConverged at the cap.
StableRule refine_until_stable(const Region& region, int start_degree, const Weight& w,
                               const ProbeSet& probes, double rel_tol,
                               const RefineOptions& options = {});

/// Convenience form with pointwise probe integrands and no splitting.
StableRule refine_until_stable(const Region& region, int start_degree,
                               std::span<const std::function<double(Complex)>> probes,
                               double rel_tol, const RefineOptions& options = {});

/// node_x,node_y,weight with a header row.
void write_rule_csv(std::ostream& os, const QuadratureRule& rule);

}  // namespace bergman
