#include "bergman/weight.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bergman/convexity.hpp"
#include "bergman/error.hpp"

namespace bergman {

Weight::Weight(Variant v) : value_(std::move(v)) {
  if (const auto* m = std::get_if<MaxAffineWeight>(&value_); m && m->pieces.empty())
    throw Error(ErrorKind::InvalidArgument, "max_affine weight needs at least one piece");
  if (const auto* m = std::get_if<ModulusSquaredWeight>(&value_); m && !(m->alpha >= 0.0))
    throw Error(ErrorKind::InvalidArgument, "modulus_squared alpha must be >= 0");
}

Weight Weight::quadratic(double a, double b, double c, double linear_x, double linear_y,
                         double constant) {
  return Weight(QuadraticWeight{a, b, c, linear_x, linear_y, constant});
}

Weight Weight::modulus_squared(double alpha, Complex center) {
  return Weight(ModulusSquaredWeight{alpha, center});
}

Weight Weight::max_affine(std::vector<AffinePiece> pieces) {
  return Weight(MaxAffineWeight{std::move(pieces)});
}

double Weight::eval(Complex z) const {
  const double x = z.real();
  const double y = z.imag();
  return std::visit(
      [&](const auto& w) -> double {
        using T = std::decay_t<decltype(w)>;
        if constexpr (std::is_same_v<T, ZeroWeight>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, QuadraticWeight>) {
          return w.a * x * x + w.b * y * y + w.c * x * y + w.linear_x * x + w.linear_y * y +
                 w.constant;
        } else if constexpr (std::is_same_v<T, ModulusSquaredWeight>) {
          return w.alpha * std::norm(z - w.center);
        } else {
          double best = -std::numeric_limits<double>::infinity();
          for (const AffinePiece& p : w.pieces) best = std::max(best, p(z));
          return best;
        }
      },
      value_);
}

bool Weight::is_convex() const {
  if (const auto* q = std::get_if<QuadraticWeight>(&value_)) {
    // [[2a, c], [c, 2b]] positive semidefinite
    return q->a >= 0.0 && q->b >= 0.0 && 4.0 * q->a * q->b - q->c * q->c >= 0.0;
  }
  return true;
}

ComplexHessian Weight::complex_hessian(Complex) const {
  return std::visit(
      [](const auto& w) -> ComplexHessian {
        using T = std::decay_t<decltype(w)>;
        if constexpr (std::is_same_v<T, ZeroWeight>) {
          return {};
        } else if constexpr (std::is_same_v<T, QuadraticWeight>) {
          return {0.5 * (w.a + w.b), Complex(0.5 * (w.a - w.b), -0.5 * w.c)};
        } else if constexpr (std::is_same_v<T, ModulusSquaredWeight>) {
          return {w.alpha, Complex(0.0, 0.0)};
        } else {
          throw Error(ErrorKind::NoPointwiseHessian,
                      "no pointwise Hessian for a max_affine weight");
        }
      },
      value_);
}

Weight Weight::translated(Complex shift) const {
  const double sx = shift.real();
  const double sy = shift.imag();
  return std::visit(
      [&](const auto& w) -> Weight {
        using T = std::decay_t<decltype(w)>;
        if constexpr (std::is_same_v<T, ZeroWeight>) {
          return Weight();
        } else if constexpr (std::is_same_v<T, QuadraticWeight>) {
          QuadraticWeight out = w;
          out.linear_x = 2.0 * w.a * sx + w.c * sy + w.linear_x;
          out.linear_y = 2.0 * w.b * sy + w.c * sx + w.linear_y;
          out.constant = w.a * sx * sx + w.b * sy * sy + w.c * sx * sy + w.linear_x * sx +
                         w.linear_y * sy + w.constant;
          return Weight(out);
        } else if constexpr (std::is_same_v<T, ModulusSquaredWeight>) {
          return Weight(ModulusSquaredWeight{w.alpha, w.center - shift});
        } else {
          MaxAffineWeight out = w;
          for (AffinePiece& p : out.pieces) p.offset += p.gx * sx + p.gy * sy;
          return Weight(out);
        }
      },
      value_);
}

std::string Weight::describe() const {
  std::ostringstream os;
  std::visit(
      [&](const auto& w) {
        using T = std::decay_t<decltype(w)>;
        if constexpr (std::is_same_v<T, ZeroWeight>) {
          os << "zero";
        } else if constexpr (std::is_same_v<T, QuadraticWeight>) {
          os << "quadratic(a=" << w.a << ",b=" << w.b << ",c=" << w.c << ",linear=(" << w.linear_x
             << "," << w.linear_y << "),constant=" << w.constant << ")";
        } else if constexpr (std::is_same_v<T, ModulusSquaredWeight>) {
          os << "modsq(alpha=" << w.alpha << ",center=(" << w.center.real() << ","
             << w.center.imag() << "))";
        } else {
          os << "max_affine(" << w.pieces.size() << " pieces)";
        }
      },
      value_);
  if (is_control()) os << " [control]";
  return os.str();
}

ConvexityReport verify_convexity(const Weight& w, const ConvexDomain& domain, int n_segments,
                                 std::uint64_t seed, int samples_per_segment) {
  if (n_segments < 1) throw Error(ErrorKind::InvalidArgument, "n_segments must be >= 1");
  ConvexProbeOptions options;
  options.segments = n_segments;
  options.samples = samples_per_segment;
  options.seed = seed;
  options.tol = Tolerance{1e-12, 0.0};
  return check_convex([&w](Complex z) { return w.eval(z); }, Region(domain), options);
}

}  // namespace bergman
