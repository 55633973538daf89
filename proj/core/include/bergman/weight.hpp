#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "bergman/domain.hpp"
#include "bergman/report.hpp"

namespace bergman {

struct ZeroWeight {};

/// a x^2 + b y^2 + c x y + linear_x x + linear_y y + constant.
struct QuadraticWeight {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double linear_x = 0.0;
  double linear_y = 0.0;
  double constant = 0.0;
};

/// alpha |z - center|^2.
struct ModulusSquaredWeight {
  double alpha = 1.0;
  Complex center{0.0, 0.0};
};

struct AffinePiece {
  double gx = 0.0;
  double gy = 0.0;
  double offset = 0.0;

  double operator()(Complex z) const { return gx * z.real() + gy * z.imag() + offset; }
};

/// max over pieces of the affine functions; convex by construction.
struct MaxAffineWeight {
  std::vector<AffinePiece> pieces;
};

/// Second derivatives in the complex coordinate t = x + iy:
/// phi_ttbar = Laplacian / 4, phi_tt = (phi_xx - phi_yy - 2i phi_xy) / 4.
struct ComplexHessian {
  double phi_ttbar = 0.0;
  Complex phi_tt{0.0, 0.0};
};

/// Weight function phi in the measure e^{-phi} dA. The variant list is
/// closed so that second derivatives are always exact.
class Weight {
 public:
  using Variant = std::variant<ZeroWeight, QuadraticWeight, ModulusSquaredWeight, MaxAffineWeight>;

  Weight() : value_(ZeroWeight{}) {}
  Weight(Variant v);  // NOLINT

  static Weight zero() { return Weight(); }
  static Weight quadratic(double a, double b, double c, double linear_x = 0.0,
                          double linear_y = 0.0, double constant = 0.0);
  static Weight modulus_squared(double alpha, Complex center = {0.0, 0.0});
  static Weight max_affine(std::vector<AffinePiece> pieces);

  const Variant& value() const { return value_; }

  double eval(Complex z) const;

  bool is_smooth() const { return !std::holds_alternative<MaxAffineWeight>(value_); }
  bool is_zero() const { return std::holds_alternative<ZeroWeight>(value_); }

  /// Convexity of the closed form (quadratic: PSD real Hessian).
  bool is_convex() const;

  /// Non-convex weights are legal but flagged as negative controls.
  bool is_control() const { return !is_convex(); }

  /// Throws Error(NoPointwiseHessian) for max_affine.
  ComplexHessian complex_hessian(Complex z) const;

  /// The weight z -> phi(z + shift), in the same variant family.
  Weight translated(Complex shift) const;

  /// Short description such as "quadratic(a=1,b=0,c=0)".
  std::string describe() const;

 private:
  Variant value_;
};

/// Second-difference probe of phi itself along random segments of `domain`.
ConvexityReport verify_convexity(const Weight& w, const ConvexDomain& domain, int n_segments,
                                 std::uint64_t seed, int samples_per_segment = 17);

}  // namespace bergman
