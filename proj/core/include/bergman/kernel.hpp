#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "bergman/domain.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/weight.hpp"

namespace bergman {

struct KernelBuildOptions {
  /// Stability target for the Gram probe integrals.
  double rel_tol = 1e-10;
  /// Minimum distance of evaluation points from the boundary. Defaults to
  /// 0.05 * diameter.
  std::optional<double> boundary_offset;
  /// First quadrature degree tried. Defaults to 2N + 2, which makes every
  /// unweighted Gram entry exact.
  std::optional<int> start_degree;
  int degree_step = 4;
  int max_degree = kMaxQuadratureDegree;
};

inline constexpr double kDefaultBoundaryFraction = 0.05;

/// Rank-(N+1) approximation of the weighted Bergman kernel: the reproducing
/// kernel of polynomials of degree <= N under the quadrature-discretised
/// inner product <f, g> = sum_i w_i e^{-phi(x_i)} f(x_i) conj(g(x_i)).
///
/// The basis ((z - center) / scale)^j is orthonormalised by Arnoldi on the
/// weighted Vandermonde (each new column is the previous orthonormal vector
/// multiplied by the node coordinate, then re-orthogonalised twice). The
/// resulting Hessenberg recurrence evaluates the orthonormal polynomials at
/// any point without ever forming the monomial coefficients.
///
/// Immutable after build and safe to evaluate concurrently.
class KernelApprox {
 public:
  /// Throws Error(BasisDependent) if the Arnoldi step collapses and
  /// propagates QuadratureNotConverged from the rule refinement.
  static KernelApprox build(Region region, Weight weight, int degree,
                            const KernelBuildOptions& options = {});

  int degree() const { return degree_; }
  const Region& region() const { return *region_; }
  const Weight& weight() const { return weight_; }
  Complex center() const { return center_; }
  double scale() const { return scale_; }
  double boundary_offset() const { return boundary_offset_; }
  const QuadratureRule& rule() const { return stable_.rule; }
  int quadrature_degree() const { return stable_.degree; }
  double gram_stability() const { return stable_.stability; }

  /// (N+1) x N upper Hessenberg matrix of the Arnoldi recurrence.
  const Eigen::MatrixXcd& hessenberg() const { return hessenberg_; }
  /// Norm of the weighted constant vector; e_0 = 1 / constant_norm.
  double constant_norm() const { return h00_; }

  /// Upper-triangular R with weighted Vandermonde = Q R for the scaled
  /// monomial basis. Diagnostic only; evaluation never touches it.
  const Eigen::MatrixXcd& triangular_factor() const { return r_factor_; }

  /// Orthonormal basis values e_0(z), ..., e_N(z). Throws
  /// Error(ProbeTooCloseToBoundary) within boundary_offset of the boundary.
  std::vector<Complex> basis(Complex z) const;

  /// K_N(z) = sum_j |e_j(z)|^2.
  double eval(Complex z) const;

  /// K_N(zeta, z) = sum_j e_j(zeta) conj(e_j(z)).
  Complex eval2(Complex zeta, Complex z) const;

  /// |<f, K_N(., z)> - f(z)| / (1 + |f(z)|) with f = sum_k coeffs[k] z^k,
  /// the inner product taken with the build's own rule.
  double reproducing_error(std::span<const Complex> coeffs, Complex z) const;

 private:
  KernelApprox() = default;

  void check_interior(Complex z) const;
  void basis_into(Complex z, std::span<Complex> out) const;

  std::shared_ptr<const Region> region_;
  Weight weight_;
  int degree_ = 0;
  Complex center_;
  double scale_ = 1.0;
  double boundary_offset_ = 0.0;
  StableRule stable_;
  double h00_ = 1.0;
  Eigen::MatrixXcd hessenberg_;
  Eigen::MatrixXcd r_factor_;
};

/// Closed-form kernels used as oracles.
class ClosedFormKernel {
 public:
  /// 1 / (pi (1 - |z|^2)^2) on the unit disk.
  static ClosedFormKernel unit_disk();
  /// Disk of the given radius centred at 0 with weight alpha |z|^2:
  /// sum_j |z|^{2j} / c_j, c_j = 2 pi int_0^R r^{2j+1} e^{-alpha r^2} dr.
  static ClosedFormKernel disk_fock(double radius, double alpha);
  /// normalization * e^{x^2}; an empty normalization means "unknown" and
  /// evaluates with normalization 1.
  static ClosedFormKernel gaussian_x(std::optional<double> normalization = std::nullopt);
  static ClosedFormKernel product(ClosedFormKernel left, ClosedFormKernel right);

  /// Number of complex variables.
  int dimension() const;
  bool normalization_known() const;

  /// Throws Error(DomainError) outside the natural domain.
  double eval(std::span<const Complex> point) const;
  double eval(Complex z) const { return eval(std::span<const Complex>(&z, 1)); }

  /// Normalising moments c_j of the disk_fock kind, j = 0..count-1.
  static std::vector<double> fock_moments(double radius, double alpha, int count);

 private:
  enum class Kind { UnitDisk, DiskFock, GaussianX, Product };
  Kind kind_ = Kind::UnitDisk;
  double radius_ = 1.0;
  double alpha_ = 0.0;
  std::optional<double> normalization_;
  std::shared_ptr<const ClosedFormKernel> left_;
  std::shared_ptr<const ClosedFormKernel> right_;
};

struct ConvergenceRow {
  int degree;
  double value;
  /// |K_N - K_prev| / K_N; NaN for the first row.
  double delta;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  bool converged = false;
  double threshold = 0.0;
};

/// K_N(z) for each N in `degrees` (strictly increasing) with successive
/// relative deltas; converged iff the last delta is below `threshold`.
ConvergenceTable converge_table(const Region& region, const Weight& weight, Complex z,
                                std::span<const int> degrees, double threshold = 1e-8,
                                const KernelBuildOptions& options = {});

}  // namespace bergman
