#pragma once

#include <span>
#include <vector>

#include "bergman/domain.hpp"
#include "bergman/kernel.hpp"

namespace bergman {

/// f(z) = sum_k a_k z^k on the unit disk, truncated to the stored terms.
class TaylorMap {
 public:
  /// Throws Error(InvalidArgument) when empty.
  explicit TaylorMap(std::vector<Complex> coefficients);

  /// a_k = 1 for 1 <= k <= terms: z / (1 - z).
  static TaylorMap half_plane(int terms = 400);
  /// a_k = k for 1 <= k <= terms: z / (1 - z)^2.
  static TaylorMap koebe(int terms = 400);

  const std::vector<Complex>& coefficients() const { return coeffs_; }
  int truncation() const { return static_cast<int>(coeffs_.size()) - 1; }

  Complex value(Complex z) const;
  Complex derivative(Complex z) const;
  Complex second_derivative(Complex z) const;

 private:
  std::vector<Complex> coeffs_;
};

/// 2 / (1 - |z|^2). Throws Error(DomainError) for |z| >= 1.
double disk_density(Complex z);

/// lambda_D(zeta) / |f'(zeta)|: the density of f(D) at f(zeta).
double pushforward_density(const TaylorMap& f, Complex zeta);

/// max over probes of |4 pi K_N(z) - lambda(z)^2| / lambda(z)^2 on the unit
/// disk with zero weight.
double verify_metric_identity(std::span<const Complex> probes, int degree,
                              const KernelBuildOptions& options = {});

struct UnivalenceScan {
  double min_value = 0.0;  // min Re(z f''(z) / f'(z))
  Complex witness;
  /// One row per grid point, r-major.
  struct Sample {
    double r;
    double theta;
    double value;
  };
  std::vector<Sample> samples;

  bool satisfied(double tol = 0.0) const { return min_value >= -1.0 - tol; }
};

/// Scans Re(z f''/f') over r in r_grid and theta_count equispaced angles.
/// Throws Error(DerivativeVanishes) when |f'| < 1e-12 at a grid point.
UnivalenceScan univalence_criterion_scan(const TaylorMap& f, std::span<const double> r_grid,
                                         int theta_count);

/// f(r e^{i theta_k}), k = 0..count-1, counterclockwise.
std::vector<Complex> image_curve(const TaylorMap& f, double r, int count);

/// True iff every consecutive turn of the closed curve has cross product
/// >= -tol * (edge length product).
bool image_curve_convex(std::span<const Complex> curve, double tol = 1e-12);

}  // namespace bergman
