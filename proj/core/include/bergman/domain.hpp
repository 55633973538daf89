#pragma once

#include <array>
#include <complex>
#include <span>
#include <variant>
#include <vector>

namespace bergman {

using Complex = std::complex<double>;

struct BoundingBox {
  double x_min, x_max, y_min, y_max;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
};

struct Triangle {
  std::array<Complex, 3> v;

  /// Signed area, positive for counterclockwise vertex order.
  double signed_area() const;
};

struct Disk {
  Complex center;
  double radius;
};

/// Ellipse {center + e^{i rotation} (a u + i b v) : u^2 + v^2 < 1}.
struct Ellipse {
  Complex center;
  double semi_a;
  double semi_b;
  double rotation;
};

struct ConvexPolygon {
  std::vector<Complex> vertices;  // strictly convex, counterclockwise
};

/// Bounded convex planar region: disk, ellipse, or strictly convex polygon.
/// Immutable once constructed; the factories validate their input.
class ConvexDomain {
 public:
  using Shape = std::variant<Disk, Ellipse, ConvexPolygon>;

  static ConvexDomain disk(Complex center, double radius);
  static ConvexDomain ellipse(Complex center, double semi_a, double semi_b,
                              double rotation = 0.0);
  /// Throws Error(NotConvex) unless every consecutive cross product is > 0.
  static ConvexDomain polygon(std::vector<Complex> vertices);

  static ConvexDomain rectangle(double x_min, double x_max, double y_min,
                                double y_max);
  static ConvexDomain regular_polygon(int sides, Complex center,
                                      double circumradius, double phase = 0.0);

  const Shape& shape() const { return shape_; }
  bool is_disk() const { return std::holds_alternative<Disk>(shape_); }
  bool is_ellipse() const { return std::holds_alternative<Ellipse>(shape_); }
  bool is_polygon() const {
    return std::holds_alternative<ConvexPolygon>(shape_);
  }

  /// Membership with a boundary band of width `tol` counted as inside.
  bool contains(Complex z, double tol = 0.0) const;

  /// Euclidean distance from z to the boundary, positive inside and negative
  /// outside.
  double signed_distance(Complex z) const;

  double area() const;
  Complex centroid() const;
  double diameter() const;
  BoundingBox bounds() const;

  /// Tiles the region (polygon: exactly; disk/ellipse: an inscribed
  /// 8*refinement-gon) with counterclockwise triangles.
  std::vector<Triangle> triangulate(int refinement) const;

  /// Image under z -> scale*z + translate.
  ConvexDomain affine_image(Complex scale, Complex translate) const;

 private:
  explicit ConvexDomain(Shape shape) : shape_(std::move(shape)) {}

  Shape shape_;
};

/// Simple counterclockwise polygon which may be non-convex. Exists so the
/// kernel pipeline can be pointed at negative controls.
class SimplePolygon {
 public:
  /// Throws Error(NotSimple) on self-intersection or clockwise orientation.
  explicit SimplePolygon(std::vector<Complex> vertices);

  const std::vector<Complex>& vertices() const { return vertices_; }
  bool is_convex() const;

  bool contains(Complex z, double tol = 0.0) const;
  double signed_distance(Complex z) const;
  double area() const;
  Complex centroid() const;
  double diameter() const;
  BoundingBox bounds() const;

  /// Ear-clipping triangulation; union equals the polygon exactly.
  std::vector<Triangle> triangulate() const;

 private:
  std::vector<Complex> vertices_;
};

/// Any region a kernel can be built on.
class Region {
 public:
  Region(ConvexDomain domain) : value_(std::move(domain)) {}  // NOLINT
  Region(SimplePolygon polygon) : value_(std::move(polygon)) {}  // NOLINT

  bool is_convex() const;
  const ConvexDomain* convex() const {
    return std::get_if<ConvexDomain>(&value_);
  }
  const SimplePolygon* simple_polygon() const {
    return std::get_if<SimplePolygon>(&value_);
  }

  bool contains(Complex z, double tol = 0.0) const;
  double signed_distance(Complex z) const;
  double area() const;
  Complex centroid() const;
  double diameter() const;
  BoundingBox bounds() const;

 private:
  std::variant<ConvexDomain, SimplePolygon> value_;
};

/// Straight probe segment with equally spaced samples.
struct Segment {
  Complex p;
  Complex q;
  int sample_count = 3;

  /// (1-u_i) p + u_i q at u_i = i/(m-1). Requires sample_count >= 2.
  std::vector<Complex> samples() const;
};

/// Polygon vertex helpers shared by the quadrature splitter.
double polygon_signed_area(std::span<const Complex> vertices);
Complex polygon_centroid(std::span<const Complex> vertices);

/// Clips a convex counterclockwise polygon to {z : a*x + b*y + c >= 0}.
std::vector<Complex> clip_half_plane(std::span<const Complex> polygon,
                                     double a, double b, double c);

}  // namespace bergman
