#include "bergman/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "bergman/error.hpp"

namespace bergman {
namespace {

double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

double segment_distance(Complex z, Complex a, Complex b) {
  const Complex ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(z - a);
  const double u = std::clamp(((z - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
  return std::abs(z - (a + u * ab));
}

double min_edge_distance(std::span<const Complex> v, Complex z) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i) {
    best = std::min(best, segment_distance(z, v[i], v[(i + 1) % v.size()]));
  }
  return best;
}

double max_pairwise_distance(std::span<const Complex> v) {
  double best = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) best = std::max(best, std::abs(v[i] - v[j]));
  return best;
}

BoundingBox vertex_bounds(std::span<const Complex> v) {
  BoundingBox box{v[0].real(), v[0].real(), v[0].imag(), v[0].imag()};
  for (const Complex& p : v) {
    box.x_min = std::min(box.x_min, p.real());
    box.x_max = std::max(box.x_max, p.real());
    box.y_min = std::min(box.y_min, p.imag());
    box.y_max = std::max(box.y_max, p.imag());
  }
  return box;
}

// Crossing-number test; boundary points are handled by the caller.
bool crossing_inside(std::span<const Complex> v, Complex z) {
  bool inside = false;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    const Complex a = v[i];
    const Complex b = v[j];
    if ((a.imag() > z.imag()) != (b.imag() > z.imag())) {
      const double x = a.real() + (z.imag() - a.imag()) * (b.real() - a.real()) /
                                      (b.imag() - a.imag());
      if (z.real() < x) inside = !inside;
    }
  }
  return inside;
}

bool segments_cross(Complex a, Complex b, Complex c, Complex d) {
  const double d1 = cross(b - a, c - a);
  const double d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c);
  const double d4 = cross(d - c, b - c);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  auto on_segment = [](Complex p, Complex q, Complex r) {
    return std::min(p.real(), q.real()) <= r.real() && r.real() <= std::max(p.real(), q.real()) &&
           std::min(p.imag(), q.imag()) <= r.imag() && r.imag() <= std::max(p.imag(), q.imag());
  };
  if (d1 == 0 && on_segment(a, b, c)) return true;
  if (d2 == 0 && on_segment(a, b, d)) return true;
  if (d3 == 0 && on_segment(c, d, a)) return true;
  if (d4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

// Distance from (y0, y1) in the closed first quadrant to the ellipse with
// semi-axes e0 >= e1 > 0 (bisection on the Lagrange multiplier, after Eberly).
double ellipse_root(double r0, double z0, double z1, double g) {
  const double n0 = r0 * z0;
  double s0 = z1 - 1.0;
  double s1 = g < 0 ? 0.0 : std::hypot(n0, z1) - 1.0;
  double s = 0.0;
  for (int i = 0; i < 200; ++i) {
    s = 0.5 * (s0 + s1);
    if (s == s0 || s == s1) break;
    const double ratio0 = n0 / (s + r0);
    const double ratio1 = z1 / (s + 1.0);
    g = ratio0 * ratio0 + ratio1 * ratio1 - 1.0;
    if (g > 0)
      s0 = s;
    else if (g < 0)
      s1 = s;
    else
      break;
  }
  return s;
}

double ellipse_quadrant_distance(double e0, double e1, double y0, double y1) {
  if (y1 > 0) {
    if (y0 > 0) {
      const double z0 = y0 / e0;
      const double z1 = y1 / e1;
      const double g = z0 * z0 + z1 * z1 - 1.0;
      if (g == 0.0) return 0.0;
      const double r0 = (e0 / e1) * (e0 / e1);
      const double sbar = ellipse_root(r0, z0, z1, g);
      const double x0 = r0 * y0 / (sbar + r0);
      const double x1 = y1 / (sbar + 1.0);
      return std::hypot(x0 - y0, x1 - y1);
    }
    return std::abs(y1 - e1);
  }
  const double numer0 = e0 * y0;
  const double denom0 = e0 * e0 - e1 * e1;
  if (numer0 < denom0) {
    const double xde0 = numer0 / denom0;
    const double x0 = e0 * xde0;
    const double x1 = e1 * std::sqrt(1.0 - xde0 * xde0);
    return std::hypot(x0 - y0, x1);
  }
  return std::abs(y0 - e0);
}

// Local ellipse coordinates: axis-aligned, centered.
Complex to_ellipse_frame(const Ellipse& e, Complex z) {
  return (z - e.center) * std::polar(1.0, -e.rotation);
}

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    std::ostringstream os;
    os << what << " must be finite and positive, got " << value;
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
}

std::vector<Triangle> subdivide(const Triangle& t, int k) {
  std::vector<Triangle> out;
  out.reserve(static_cast<std::size_t>(k) * k);
  auto at = [&](int i, int j) {
    const double u = static_cast<double>(i) / k;
    const double v = static_cast<double>(j) / k;
    return t.v[0] + u * (t.v[1] - t.v[0]) + v * (t.v[2] - t.v[0]);
  };
  for (int i = 0; i < k; ++i) {
    for (int j = 0; i + j < k; ++j) {
      out.push_back({{at(i, j), at(i + 1, j), at(i, j + 1)}});
      if (i + j + 1 < k) out.push_back({{at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)}});
    }
  }
  return out;
}

std::vector<Triangle> centroid_fan(std::span<const Complex> v) {
  const Complex c = polygon_centroid(v);
  std::vector<Triangle> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back({{c, v[i], v[(i + 1) % v.size()]}});
  return out;
}

}  // namespace

double Triangle::signed_area() const { return 0.5 * cross(v[1] - v[0], v[2] - v[0]); }

double polygon_signed_area(std::span<const Complex> v) {
  double twice = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) twice += cross(v[i], v[(i + 1) % v.size()]);
  return 0.5 * twice;
}

Complex polygon_centroid(std::span<const Complex> v) {
  double twice_area = 0.0;
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Complex a = v[i];
    const Complex b = v[(i + 1) % v.size()];
    const double c = cross(a, b);
    twice_area += c;
    acc += (a + b) * c;
  }
  return acc / (3.0 * twice_area);
}

std::vector<Complex> clip_half_plane(std::span<const Complex> polygon, double a, double b,
                                     double c) {
  std::vector<Complex> out;
  if (polygon.empty()) return out;
  auto value = [&](Complex z) { return a * z.real() + b * z.imag() + c; };
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    const Complex p = polygon[i];
    const Complex q = polygon[(i + 1) % polygon.size()];
    const double fp = value(p);
    const double fq = value(q);
    if (fp >= 0) out.push_back(p);
    if ((fp >= 0) != (fq >= 0)) {
      const double u = fp / (fp - fq);
      out.push_back(p + u * (q - p));
    }
  }
  // Drop consecutive duplicates produced by vertices lying on the line.
  std::vector<Complex> cleaned;
  for (const Complex& z : out) {
    if (cleaned.empty() || std::abs(z - cleaned.back()) > 1e-15 * (1.0 + std::abs(z)))
      cleaned.push_back(z);
  }
  while (cleaned.size() > 1 &&
         std::abs(cleaned.front() - cleaned.back()) <= 1e-15 * (1.0 + std::abs(cleaned.front())))
    cleaned.pop_back();
  return cleaned;
}

// ---------------------------------------------------------------------------
// ConvexDomain

ConvexDomain ConvexDomain::disk(Complex center, double radius) {
  require_positive(radius, "disk radius");
  return ConvexDomain(Disk{center, radius});
}

ConvexDomain ConvexDomain::ellipse(Complex center, double semi_a, double semi_b,
                                   double rotation) {
  require_positive(semi_a, "ellipse semi-axis a");
  require_positive(semi_b, "ellipse semi-axis b");
  return ConvexDomain(Ellipse{center, semi_a, semi_b, rotation});
}

ConvexDomain ConvexDomain::polygon(std::vector<Complex> vertices) {
  const std::size_t n = vertices.size();
  if (n < 3) throw Error(ErrorKind::NotConvex, "polygon needs at least 3 vertices");
  double turning = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Complex e0 = vertices[(i + 1) % n] - vertices[i];
    const Complex e1 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
    const double c = cross(e0, e1);
    if (!(c > 0.0)) {
      std::ostringstream os;
      os << "polygon vertices are not strictly convex counterclockwise (cross product " << c
         << " at vertex " << (i + 1) % n << ")";
      throw Error(ErrorKind::NotConvex, os.str());
    }
    turning += std::arg(e1 / e0);
  }
  // A star polygon also has all-positive turns but winds more than once.
  if (std::abs(turning - 2.0 * std::numbers::pi) > 1e-9)
    throw Error(ErrorKind::NotConvex, "polygon winds more than once");
  return ConvexDomain(ConvexPolygon{std::move(vertices)});
}

ConvexDomain ConvexDomain::rectangle(double x_min, double x_max, double y_min, double y_max) {
  return polygon({{x_min, y_min}, {x_max, y_min}, {x_max, y_max}, {x_min, y_max}});
}

ConvexDomain ConvexDomain::regular_polygon(int sides, Complex center, double circumradius,
                                           double phase) {
  if (sides < 3) throw Error(ErrorKind::InvalidArgument, "regular polygon needs >= 3 sides");
  require_positive(circumradius, "circumradius");
  std::vector<Complex> v;
  for (int k = 0; k < sides; ++k)
    v.push_back(center + std::polar(circumradius, phase + 2.0 * std::numbers::pi * k / sides));
  return polygon(std::move(v));
}

bool ConvexDomain::contains(Complex z, double tol) const {
  if (const auto* p = std::get_if<ConvexPolygon>(&shape_)) {
    const auto& v = p->vertices;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Complex e = v[(i + 1) % v.size()] - v[i];
      if (cross(e, z - v[i]) / std::abs(e) < -tol) return false;
    }
    return true;
  }
  return signed_distance(z) >= -tol;
}

double ConvexDomain::signed_distance(Complex z) const {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Disk>) {
          return s.radius - std::abs(z - s.center);
        } else if constexpr (std::is_same_v<T, Ellipse>) {
          Complex w = to_ellipse_frame(s, z);
          double e0 = s.semi_a;
          double e1 = s.semi_b;
          if (e0 < e1) {
            std::swap(e0, e1);
            w = Complex(w.imag(), w.real());
          }
          const double y0 = std::abs(w.real());
          const double y1 = std::abs(w.imag());
          const double d = ellipse_quadrant_distance(e0, e1, y0, y1);
          const bool inside = (y0 / e0) * (y0 / e0) + (y1 / e1) * (y1 / e1) < 1.0;
          return inside ? d : -d;
        } else {
          const double d = min_edge_distance(s.vertices, z);
          bool inside = true;
          const auto& v = s.vertices;
          for (std::size_t i = 0; i < v.size() && inside; ++i)
            inside = cross(v[(i + 1) % v.size()] - v[i], z - v[i]) >= 0.0;
          return inside ? d : -d;
        }
      },
      shape_);
}

double ConvexDomain::area() const {
  return std::visit(
      [](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Disk>)
          return std::numbers::pi * s.radius * s.radius;
        else if constexpr (std::is_same_v<T, Ellipse>)
          return std::numbers::pi * s.semi_a * s.semi_b;
        else
          return polygon_signed_area(s.vertices);
      },
      shape_);
}

Complex ConvexDomain::centroid() const {
  return std::visit(
      [](const auto& s) -> Complex {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ConvexPolygon>)
          return polygon_centroid(s.vertices);
        else
          return s.center;
      },
      shape_);
}

double ConvexDomain::diameter() const {
  return std::visit(
      [](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Disk>)
          return 2.0 * s.radius;
        else if constexpr (std::is_same_v<T, Ellipse>)
          return 2.0 * std::max(s.semi_a, s.semi_b);
        else
          return max_pairwise_distance(s.vertices);
      },
      shape_);
}

BoundingBox ConvexDomain::bounds() const {
  return std::visit(
      [](const auto& s) -> BoundingBox {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Disk>) {
          return {s.center.real() - s.radius, s.center.real() + s.radius,
                  s.center.imag() - s.radius, s.center.imag() + s.radius};
        } else if constexpr (std::is_same_v<T, Ellipse>) {
          const double c = std::cos(s.rotation);
          const double sn = std::sin(s.rotation);
          const double hx = std::hypot(s.semi_a * c, s.semi_b * sn);
          const double hy = std::hypot(s.semi_a * sn, s.semi_b * c);
          return {s.center.real() - hx, s.center.real() + hx, s.center.imag() - hy,
                  s.center.imag() + hy};
        } else {
          return vertex_bounds(s.vertices);
        }
      },
      shape_);
}

std::vector<Triangle> ConvexDomain::triangulate(int refinement) const {
  if (refinement < 1) throw Error(ErrorKind::InvalidArgument, "refinement must be >= 1");
  std::vector<Complex> outline;
  int sub = refinement;
  if (const auto* p = std::get_if<ConvexPolygon>(&shape_)) {
    outline = p->vertices;
  } else {
    // Inscribed polygon; its area falls short of the true area by O(n^-2).
    const int n = 8 * refinement;
    sub = 1;
    const Complex c = centroid();
    const Ellipse e = is_disk() ? Ellipse{std::get<Disk>(shape_).center,
                                          std::get<Disk>(shape_).radius,
                                          std::get<Disk>(shape_).radius, 0.0}
                                : std::get<Ellipse>(shape_);
    for (int k = 0; k < n; ++k) {
      const double th = 2.0 * std::numbers::pi * k / n;
      outline.push_back(c + std::polar(1.0, e.rotation) *
                                Complex(e.semi_a * std::cos(th), e.semi_b * std::sin(th)));
    }
  }
  std::vector<Triangle> out;
  for (const Triangle& t : centroid_fan(outline)) {
    auto pieces = subdivide(t, sub);
    out.insert(out.end(), pieces.begin(), pieces.end());
  }
  return out;
}

ConvexDomain ConvexDomain::affine_image(Complex scale, Complex translate) const {
  if (scale == Complex(0.0, 0.0))
    throw Error(ErrorKind::InvalidArgument, "affine scale must be nonzero");
  return std::visit(
      [&](const auto& s) -> ConvexDomain {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Disk>) {
          return disk(scale * s.center + translate, std::abs(scale) * s.radius);
        } else if constexpr (std::is_same_v<T, Ellipse>) {
          return ellipse(scale * s.center + translate, std::abs(scale) * s.semi_a,
                         std::abs(scale) * s.semi_b, s.rotation + std::arg(scale));
        } else {
          std::vector<Complex> v;
          v.reserve(s.vertices.size());
          for (const Complex& z : s.vertices) v.push_back(scale * z + translate);
          return polygon(std::move(v));
        }
      },
      shape_);
}

// ---------------------------------------------------------------------------
// SimplePolygon

SimplePolygon::SimplePolygon(std::vector<Complex> vertices) : vertices_(std::move(vertices)) {
  const std::size_t n = vertices_.size();
  if (n < 3) throw Error(ErrorKind::NotSimple, "polygon needs at least 3 vertices");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_cross(vertices_[i], vertices_[(i + 1) % n], vertices_[j],
                         vertices_[(j + 1) % n]))
        throw Error(ErrorKind::NotSimple, "polygon edges intersect");
    }
  }
  if (!(polygon_signed_area(vertices_) > 0.0))
    throw Error(ErrorKind::NotSimple, "polygon must be counterclockwise with positive area");
}

bool SimplePolygon::is_convex() const {
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!(cross(vertices_[(i + 1) % n] - vertices_[i],
                vertices_[(i + 2) % n] - vertices_[(i + 1) % n]) > 0.0))
      return false;
  }
  return true;
}

bool SimplePolygon::contains(Complex z, double tol) const {
  if (crossing_inside(vertices_, z)) return true;
  return min_edge_distance(vertices_, z) <= tol;
}

double SimplePolygon::signed_distance(Complex z) const {
  const double d = min_edge_distance(vertices_, z);
  return crossing_inside(vertices_, z) ? d : -d;
}

double SimplePolygon::area() const { return polygon_signed_area(vertices_); }
Complex SimplePolygon::centroid() const { return polygon_centroid(vertices_); }
double SimplePolygon::diameter() const { return max_pairwise_distance(vertices_); }
BoundingBox SimplePolygon::bounds() const { return vertex_bounds(vertices_); }

std::vector<Triangle> SimplePolygon::triangulate() const {
  std::vector<Complex> ring = vertices_;
  std::vector<Triangle> out;
  auto inside_triangle = [](Complex p, Complex a, Complex b, Complex c) {
    return cross(b - a, p - a) >= 0 && cross(c - b, p - b) >= 0 && cross(a - c, p - c) >= 0;
  };
  while (ring.size() > 3) {
    const std::size_t n = ring.size();
    bool clipped = false;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex a = ring[(i + n - 1) % n];
      const Complex b = ring[i];
      const Complex c = ring[(i + 1) % n];
      if (!(cross(b - a, c - b) > 0.0)) continue;  // reflex or degenerate corner
      bool ear = true;
      for (std::size_t k = 0; k < n && ear; ++k) {
        if (k == i || k == (i + n - 1) % n || k == (i + 1) % n) continue;
        if (inside_triangle(ring[k], a, b, c)) ear = false;
      }
      if (!ear) continue;
      out.push_back({{a, b, c}});
      ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(i));
      clipped = true;
      break;
    }
    if (!clipped) throw Error(ErrorKind::NotSimple, "ear clipping failed");
  }
  out.push_back({{ring[0], ring[1], ring[2]}});
  return out;
}

// ---------------------------------------------------------------------------
// Region

bool Region::is_convex() const {
  return std::visit(
      [](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, ConvexDomain>)
          return true;
        else
          return r.is_convex();
      },
      value_);
}

bool Region::contains(Complex z, double tol) const {
  return std::visit([&](const auto& r) { return r.contains(z, tol); }, value_);
}
double Region::signed_distance(Complex z) const {
  return std::visit([&](const auto& r) { return r.signed_distance(z); }, value_);
}
double Region::area() const {
  return std::visit([](const auto& r) { return r.area(); }, value_);
}
Complex Region::centroid() const {
  return std::visit([](const auto& r) { return r.centroid(); }, value_);
}
double Region::diameter() const {
  return std::visit([](const auto& r) { return r.diameter(); }, value_);
}
BoundingBox Region::bounds() const {
  return std::visit([](const auto& r) { return r.bounds(); }, value_);
}

// ---------------------------------------------------------------------------

std::vector<Complex> Segment::samples() const {
  if (sample_count < 2) throw Error(ErrorKind::InvalidArgument, "segment needs >= 2 samples");
  std::vector<Complex> out(static_cast<std::size_t>(sample_count));
  const double last = sample_count - 1;
  for (int i = 0; i < sample_count; ++i) {
    const double u = i / last;
    out[static_cast<std::size_t>(i)] = i + 1 == sample_count ? q : p + u * (q - p);
  }
  return out;
}

}  // namespace bergman
