#include "bergman/classical.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "bergman/error.hpp"

namespace bergman {

TaylorMap::TaylorMap(std::vector<Complex> coefficients) : coeffs_(std::move(coefficients)) {
  if (coeffs_.empty()) throw Error(ErrorKind::InvalidArgument, "taylor map needs coefficients");
}

TaylorMap TaylorMap::half_plane(int terms) {
  std::vector<Complex> a(static_cast<std::size_t>(terms) + 1, 1.0);
  a[0] = 0.0;
  return TaylorMap(std::move(a));
}

TaylorMap TaylorMap::koebe(int terms) {
  std::vector<Complex> a(static_cast<std::size_t>(terms) + 1);
  for (int k = 1; k <= terms; ++k) a[static_cast<std::size_t>(k)] = static_cast<double>(k);
  return TaylorMap(std::move(a));
}

Complex TaylorMap::value(Complex z) const {
  Complex acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Complex TaylorMap::derivative(Complex z) const {
  Complex acc = 0.0;
  for (std::size_t k = coeffs_.size() - 1; k >= 1; --k)
    acc = acc * z + static_cast<double>(k) * coeffs_[k];
  return acc;
}

Complex TaylorMap::second_derivative(Complex z) const {
  Complex acc = 0.0;
  for (std::size_t k = coeffs_.size() - 1; k >= 2; --k)
    acc = acc * z + static_cast<double>(k * (k - 1)) * coeffs_[k];
  return acc;
}

double disk_density(Complex z) {
  const double r2 = std::norm(z);
  if (!(r2 < 1.0)) throw Error(ErrorKind::DomainError, "hyperbolic density needs |z| < 1");
  return 2.0 / (1.0 - r2);
}

double pushforward_density(const TaylorMap& f, Complex zeta) {
  const double d = std::abs(f.derivative(zeta));
  if (d < 1e-12)
    throw Error(ErrorKind::DerivativeVanishes,
                "derivative vanishes; map not locally univalent there");
  return disk_density(zeta) / d;
}

double verify_metric_identity(std::span<const Complex> probes, int degree,
                              const KernelBuildOptions& options) {
  const KernelApprox k =
      KernelApprox::build(ConvexDomain::disk(0.0, 1.0), Weight::zero(), degree, options);
  double worst = 0.0;
  for (const Complex& z : probes) {
    const double lambda2 = std::pow(disk_density(z), 2);
    worst = std::max(worst, std::abs(4.0 * std::numbers::pi * k.eval(z) - lambda2) / lambda2);
  }
  return worst;
}

UnivalenceScan univalence_criterion_scan(const TaylorMap& f, std::span<const double> r_grid,
                                         int theta_count) {
  if (theta_count < 1 || r_grid.empty())
    throw Error(ErrorKind::InvalidArgument, "univalence scan needs a nonempty grid");
  UnivalenceScan scan;
  scan.min_value = std::numeric_limits<double>::infinity();
  for (double r : r_grid) {
    if (!(r >= 0.0 && r < 1.0)) throw Error(ErrorKind::DomainError, "scan radii must lie in [0, 1)");
    for (int k = 0; k < theta_count; ++k) {
      const double theta = 2.0 * std::numbers::pi * k / theta_count;
      const Complex z = std::polar(r, theta);
      const Complex d1 = f.derivative(z);
      if (std::abs(d1) < 1e-12)
        throw Error(ErrorKind::DerivativeVanishes,
                    "derivative vanishes; map not locally univalent there");
      const double v = (z * f.second_derivative(z) / d1).real();
      scan.samples.push_back({r, theta, v});
      if (v < scan.min_value) {
        scan.min_value = v;
        scan.witness = z;
      }
    }
  }
  return scan;
}

std::vector<Complex> image_curve(const TaylorMap& f, double r, int count) {
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k)
    out.push_back(f.value(std::polar(r, 2.0 * std::numbers::pi * k / count)));
  return out;
}

bool image_curve_convex(std::span<const Complex> curve, double tol) {
  const std::size_t n = curve.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Complex a = curve[(i + 1) % n] - curve[i];
    const Complex b = curve[(i + 2) % n] - curve[(i + 1) % n];
    const double cross = a.real() * b.imag() - a.imag() * b.real();
    if (cross < -tol * std::abs(a) * std::abs(b)) return false;
  }
  return true;
}

}  // namespace bergman
