#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "bergman/domain.hpp"
#include "bergman/random.hpp"
#include "bergman/report.hpp"
#include "bergman/weight.hpp"

namespace bergman {

using RealFunction = std::function<double(Complex)>;

/// Relative verdict tolerance: max(floor, 3 * source_error) * (1 + scale),
/// where scale is max |f| over the probes. source_error is the quadrature
/// stability of whatever produced f (zero for closed forms).
struct Tolerance {
  double floor = 1e-7;
  double source_error = 0.0;

  double absolute(double scale) const;
};

struct SlackScan {
  double min_slack;
  int argmin;  // index of the stencil centre
};

/// min over i of v[i-1] + v[i+1] - 2 v[i]. Requires at least 3 values.
SlackScan second_difference_scan(std::span<const double> values);

struct ConvexProbeOptions {
  int segments = 200;
  int samples = 33;
  /// Every sample keeps at least this distance from the boundary.
  double margin = 0.0;
  Tolerance tol;
  std::uint64_t seed = 0;
  /// Audit mode: all midpoint triples (i, (i+k)/2, k) instead of neighbours.
  bool pairwise_midpoint = false;
};

/// Random segment whose samples all keep `margin` from the boundary.
Segment random_segment(const Region& region, int samples, double margin, Rng& rng);
Complex random_interior_point(const Region& region, double margin, Rng& rng);

/// Second-difference scan of f along seeded random segments. Segments on
/// which f throws bergman::Error are skipped; more than half skipped raises
/// Error(InsufficientProbes).
ConvexityReport check_convex(const RealFunction& f, const Region& region,
                             const ConvexProbeOptions& options);

/// Same scan on caller-supplied segments.
ConvexityReport check_convex_on_segments(const RealFunction& f, std::span<const Segment> segments,
                                         const Tolerance& tol, bool pairwise_midpoint = false);

/// The real-linear map s -> s + lambda^2 conj(s), |lambda| < 1.
class SliceMap {
 public:
  explicit SliceMap(Complex lambda);

  Complex lambda() const { return lambda_; }
  Complex forward(Complex s) const { return s + lambda2_ * std::conj(s); }
  Complex inverse(Complex t) const { return (t - lambda2_ * std::conj(t)) / determinant(); }
  /// Determinant of the map as a linear map of R^2: 1 - |lambda|^4.
  double determinant() const { return 1.0 - std::norm(lambda2_); }

 private:
  Complex lambda_;
  Complex lambda2_;
};

/// (1 + |lambda|^4) phi_ttbar + 2 Re(lambda^2 phi_tt): the s-Laplacian / 4 of
/// phi(t_lambda(s)).
double hessian_form_lemma(const ComplexHessian& h, Complex lambda);

/// phi_ttbar |eta|^2 + Re(phi_tt eta^2), i.e. half the real second derivative
/// of phi in direction eta.
double real_hessian_form(const ComplexHessian& h, Complex eta);

/// Five-point Laplacian (f_E + f_W + f_N + f_S - 4 f_C) / h^2 on the grid of
/// spacing h anchored at the region's bounding box, at every node whose
/// stencil keeps `margin` from the boundary. Verdict: violation iff the
/// minimum is below -tol. Throws Error(EmptyGrid) when no stencil fits.
SubharmonicityReport check_subharmonic(const RealFunction& f, const Region& region,
                                       double spacing, double tol, double margin = 0.0);

/// Radii {0.3, 0.6, 0.9, 0.99} x 16 equispaced angles, plus lambda = 0.
std::vector<Complex> default_lambda_grid();

struct SliceCertifyOptions {
  std::vector<Complex> lambda_grid = default_lambda_grid();
  double spacing = 0.05;
  double margin = 0.0;
  Tolerance tol;
  /// False for inputs that are not C^2; violations are then reported as
  /// evidence only.
  bool smooth_input = true;
};

/// Pulls f back through every slice map of the grid and checks
/// subharmonicity of s -> f(t_lambda(s)) on an s-grid covering the inverse
/// image of the domain interior. Report fields: probed_segments = slices
/// probed, min_slack = smallest slice Laplacian, tol in Laplacian units.
ConvexityReport certify_convex_via_slices(const RealFunction& f, const ConvexDomain& domain,
                                          const SliceCertifyOptions& options);

/// Regular grid of samples; values outside the sampled region are NaN.
struct Grid2D {
  double x0 = 0.0;
  double y0 = 0.0;
  double spacing = 1.0;
  int nx = 0;
  int ny = 0;
  std::vector<double> values;  // row-major, index j * nx + i

  double& at(int i, int j) { return values[static_cast<std::size_t>(j) * nx + i]; }
  double at(int i, int j) const { return values[static_cast<std::size_t>(j) * nx + i]; }
  Complex point(int i, int j) const { return {x0 + i * spacing, y0 + j * spacing}; }
};

Grid2D sample_grid(const RealFunction& f, const BoundingBox& box, double spacing);

/// Discrete convolution with the normalised bump (1 - (r/radius)^2)^3. The
/// output loses floor(radius / spacing) nodes on each side.
Grid2D mollify(const Grid2D& grid, double radius);

}  // namespace bergman
