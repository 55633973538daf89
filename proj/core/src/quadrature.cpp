#include "bergman/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "bergman/error.hpp"

namespace bergman {
namespace {

void check_degree(int degree) {
  if (degree < 1) throw Error(ErrorKind::InvalidArgument, "quadrature degree must be >= 1");
  if (degree > kMaxQuadratureDegree) {
    std::ostringstream os;
    os << "degree too large: " << degree << " exceeds cap " << kMaxQuadratureDegree;
    throw Error(ErrorKind::DegreeTooLarge, os.str());
  }
}

GaussLegendre compute_gauss_legendre(int n) {
  GaussLegendre gl;
  gl.nodes.resize(static_cast<std::size_t>(n));
  gl.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node for the weight.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1.0;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Map [-1, 1] -> [0, 1].
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    gl.nodes[lo] = 0.5 * (1.0 - x);
    gl.nodes[hi] = 0.5 * (1.0 + x);
    gl.weights[lo] = 0.5 * w;
    gl.weights[hi] = 0.5 * w;
  }
  return gl;
}

void append_triangle(QuadratureRule& rule, const Triangle& t, int degree) {
  const double area = t.signed_area();
  if (!(area > 0.0)) return;
  // (u, v) in [0,1]^2 -> v0 + u (v1 - v0) + u v (v2 - v1); Jacobian 2 A u.
  // Total degree d becomes degree d+1 in u and d in v.
  const int n = (degree + 3) / 2;
  const GaussLegendre& gl = gauss_legendre(n);
  const Complex e1 = t.v[1] - t.v[0];
  const Complex e2 = t.v[2] - t.v[1];
  for (int i = 0; i < n; ++i) {
    const double u = gl.nodes[static_cast<std::size_t>(i)];
    for (int j = 0; j < n; ++j) {
      const double v = gl.nodes[static_cast<std::size_t>(j)];
      rule.nodes.push_back(t.v[0] + u * (e1 + v * e2));
      rule.weights.push_back(2.0 * area * u * gl.weights[static_cast<std::size_t>(i)] *
                             gl.weights[static_cast<std::size_t>(j)]);
    }
  }
}

void append_polygon_fan(QuadratureRule& rule, std::span<const Complex> polygon, int degree) {
  if (polygon.size() < 3 || !(polygon_signed_area(polygon) > 0.0)) return;
  const Complex c = polygon_centroid(polygon);
  for (std::size_t i = 0; i < polygon.size(); ++i)
    append_triangle(rule, {{c, polygon[i], polygon[(i + 1) % polygon.size()]}}, degree);
}

QuadratureRule conic_rule(const Ellipse& e, int degree) {
  // x^a y^b with a+b <= d: the angular part is a trigonometric polynomial of
  // degree <= d (exact with d+1 trapezoid points; d+2 used), the radial part
  // r^{a+b+1} needs ceil((d+2)/2) Gauss points.
  const int n_theta = degree + 2;
  const int n_r = (degree + 3) / 2;
  const GaussLegendre& gl = gauss_legendre(n_r);
  QuadratureRule rule;
  rule.exact_degree = degree;
  rule.nodes.reserve(static_cast<std::size_t>(n_theta * n_r));
  rule.weights.reserve(static_cast<std::size_t>(n_theta * n_r));
  const Complex rot = std::polar(1.0, e.rotation);
  const double jac = e.semi_a * e.semi_b * 2.0 * std::numbers::pi / n_theta;
  for (int k = 0; k < n_theta; ++k) {
    const double th = 2.0 * std::numbers::pi * k / n_theta;
    const double c = std::cos(th), s = std::sin(th);
    for (int i = 0; i < n_r; ++i) {
      const double r = gl.nodes[static_cast<std::size_t>(i)];
      rule.nodes.push_back(e.center + rot * Complex(e.semi_a * r * c, e.semi_b * r * s));
      rule.weights.push_back(jac * r * gl.weights[static_cast<std::size_t>(i)]);
    }
  }
  return rule;
}

// Splits a convex polygon into the cells on which a single affine piece is
// the maximum.
std::vector<std::vector<Complex>> split_by_pieces(std::span<const Complex> polygon,
                                                  const MaxAffineWeight& w) {
  std::vector<std::vector<Complex>> cells;
  for (std::size_t i = 0; i < w.pieces.size(); ++i) {
    std::vector<Complex> cell(polygon.begin(), polygon.end());
    const AffinePiece& pi = w.pieces[i];
    for (std::size_t j = 0; j < w.pieces.size() && cell.size() >= 3; ++j) {
      if (j == i) continue;
      const AffinePiece& pj = w.pieces[j];
      const double a = pi.gx - pj.gx, b = pi.gy - pj.gy, c = pi.offset - pj.offset;
      if (a == 0.0 && b == 0.0) {
        // Parallel duplicates: lower index wins ties.
        if (c < 0.0 || (c == 0.0 && j < i)) cell.clear();
        continue;
      }
      cell = clip_half_plane(cell, a, b, c);
    }
    if (cell.size() >= 3 && polygon_signed_area(cell) > 0.0) cells.push_back(std::move(cell));
  }
  return cells;
}

// Piece of the boundary of a convex cell of the unit disk: either a chord
// (a -> b) or a counterclockwise arc of the unit circle (alpha -> beta).
struct BoundaryPiece {
  bool arc;
  Complex a, b;
  double alpha, beta;
};

// Boundary of {|w| < 1} intersected with the convex polygon `cut`, walked
// counterclockwise. Empty when the intersection is empty; a single full arc
// when the disk lies inside `cut`.
std::vector<BoundaryPiece> disk_cell_boundary(std::span<const Complex> cut) {
  struct Portion {
    Complex start, end;
  };
  std::vector<Portion> portions;
  for (std::size_t i = 0; i < cut.size(); ++i) {
    const Complex p = cut[i];
    const Complex d = cut[(i + 1) % cut.size()] - p;
    const double a = std::norm(d);
    if (a == 0.0) continue;
    const double b = (std::conj(p) * d).real();
    const double c = std::norm(p) - 1.0;
    const double disc = b * b - a * c;
    if (disc <= 0.0) continue;
    const double s1 = std::max(0.0, (-b - std::sqrt(disc)) / a);
    const double s2 = std::min(1.0, (-b + std::sqrt(disc)) / a);
    if (s2 - s1 <= 1e-14) continue;
    portions.push_back({p + s1 * d, p + s2 * d});
  }
  std::vector<BoundaryPiece> pieces;
  if (portions.empty()) {
    bool inside = true;
    for (std::size_t i = 0; i < cut.size() && inside; ++i) {
      const Complex e = cut[(i + 1) % cut.size()] - cut[i];
      inside = (std::conj(e) * (-cut[i])).imag() >= 0.0;
    }
    if (inside && cut.size() >= 3) pieces.push_back({true, {}, {}, 0.0, 2.0 * std::numbers::pi});
    return pieces;
  }
  for (std::size_t k = 0; k < portions.size(); ++k) {
    const Portion& cur = portions[k];
    const Portion& next = portions[(k + 1) % portions.size()];
    pieces.push_back({false, cur.start, cur.end, 0.0, 0.0});
    if (std::abs(cur.end - next.start) > 1e-13) {
      const double alpha = std::arg(cur.end);
      double beta = std::arg(next.start);
      while (beta <= alpha) beta += 2.0 * std::numbers::pi;
      pieces.push_back({true, cur.end, next.start, alpha, beta});
    }
  }
  return pieces;
}

// Rule on a convex cell of the unit disk: chords become triangles with the
// collapsed rule, arcs become curved sectors {c + rho (e^{i theta} - c)}
// seen from an interior point c. The arc rule is spectrally accurate rather
// than exact, so refinement decides when it has converged.
void append_disk_cell(QuadratureRule& rule, const std::vector<BoundaryPiece>& pieces,
                      int degree, const Ellipse& map) {
  Complex c{0.0, 0.0};
  int count = 0;
  for (const BoundaryPiece& p : pieces) {
    if (p.arc) {
      const double mid = 0.5 * (p.alpha + p.beta);
      c += std::polar(1.0, p.alpha) + std::polar(1.0, mid);
      count += 2;
    } else {
      c += p.a + p.b;
      count += 2;
    }
  }
  c /= static_cast<double>(count);

  const Complex rot = std::polar(1.0, map.rotation);
  const double jac_map = map.semi_a * map.semi_b;
  auto to_domain = [&](Complex w) {
    return map.center + rot * Complex(map.semi_a * w.real(), map.semi_b * w.imag());
  };

  const int n_rho = (degree + 3) / 2;
  const GaussLegendre& gr = gauss_legendre(n_rho);
  for (const BoundaryPiece& p : pieces) {
    if (!p.arc) {
      QuadratureRule local;
      append_triangle(local, {{c, p.a, p.b}}, degree);
      for (std::size_t i = 0; i < local.size(); ++i) {
        rule.nodes.push_back(to_domain(local.nodes[i]));
        rule.weights.push_back(jac_map * local.weights[i]);
      }
      continue;
    }
    const double span = p.beta - p.alpha;
    const int n_theta =
        std::max(4, static_cast<int>(std::ceil((degree + 2) * span / (2.0 * std::numbers::pi))) + 4);
    const GaussLegendre& gt = gauss_legendre(n_theta);
    for (int k = 0; k < n_theta; ++k) {
      const double th = p.alpha + span * gt.nodes[static_cast<std::size_t>(k)];
      const Complex e = std::polar(1.0, th);
      const double radial = 1.0 - (std::conj(c) * e).real();
      for (int i = 0; i < n_rho; ++i) {
        const double rho = gr.nodes[static_cast<std::size_t>(i)];
        rule.nodes.push_back(to_domain(c + rho * (e - c)));
        rule.weights.push_back(jac_map * span * gt.weights[static_cast<std::size_t>(k)] *
                               gr.weights[static_cast<std::size_t>(i)] * rho * radial);
      }
    }
  }
}

// Conic domain split along the kink lines of a max-affine weight.
QuadratureRule split_conic_rule(const Ellipse& e, int degree, const MaxAffineWeight& w) {
  // Pull every piece back to the unit-disk frame, where it is again affine.
  const Complex rot = std::polar(1.0, e.rotation);
  auto to_domain = [&](Complex u) {
    return e.center + rot * Complex(e.semi_a * u.real(), e.semi_b * u.imag());
  };
  MaxAffineWeight pulled;
  for (const AffinePiece& p : w.pieces) {
    const double o = p(to_domain({0.0, 0.0}));
    pulled.pieces.push_back({p(to_domain({1.0, 0.0})) - o, p(to_domain({0.0, 1.0})) - o, o});
  }
  const std::vector<Complex> box{{-2.0, -2.0}, {2.0, -2.0}, {2.0, 2.0}, {-2.0, 2.0}};
  QuadratureRule rule;
  rule.exact_degree = degree;
  for (const auto& cell : split_by_pieces(box, pulled))
    append_disk_cell(rule, disk_cell_boundary(cell), degree, e);
  return rule;
}

double relative_change(const std::vector<double>& prev, const std::vector<double>& next) {
  double scale = 0.0;
  for (double v : next) scale = std::max(scale, std::abs(v));
  double worst = 0.0;
  for (std::size_t k = 0; k < next.size(); ++k) {
    const double denom = std::max(std::abs(next[k]), 1e-15 * scale);
    if (denom == 0.0) continue;
    worst = std::max(worst, std::abs(next[k] - prev[k]) / denom);
  }
  return worst;
}

}  // namespace

double QuadratureRule::total_weight() const {
  double s = 0.0, c = 0.0;
  for (double w : weights) {
    const double t = s + w;
    c += std::abs(s) >= std::abs(w) ? (s - t) + w : (w - t) + s;
    s = t;
  }
  return s + c;
}

const GaussLegendre& gauss_legendre(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "Gauss-Legendre order must be >= 1");
  static std::mutex mutex;
  static std::map<int, GaussLegendre> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

QuadratureRule triangle_rule(const Triangle& t, int degree) {
  check_degree(degree);
  QuadratureRule rule;
  rule.exact_degree = degree;
  append_triangle(rule, t, degree);
  return rule;
}

QuadratureRule rule_for(const ConvexDomain& domain, int target_degree) {
  return rule_for(Region(domain), target_degree, Weight::zero());
}

QuadratureRule rule_for(const Region& region, int target_degree, const Weight& w) {
  check_degree(target_degree);
  const auto* max_affine = std::get_if<MaxAffineWeight>(&w.value());

  if (const ConvexDomain* dom = region.convex()) {
    std::optional<Ellipse> conic;
    if (const auto* d = std::get_if<Disk>(&dom->shape()))
      conic = Ellipse{d->center, d->radius, d->radius, 0.0};
    else if (const auto* e = std::get_if<Ellipse>(&dom->shape()))
      conic = *e;
    if (conic) {
      if (max_affine && max_affine->pieces.size() > 1)
        return split_conic_rule(*conic, target_degree, *max_affine);
      return conic_rule(*conic, target_degree);
    }

    const auto& vertices = std::get<ConvexPolygon>(dom->shape()).vertices;
    QuadratureRule rule;
    rule.exact_degree = target_degree;
    if (max_affine) {
      for (const auto& cell : split_by_pieces(vertices, *max_affine))
        append_polygon_fan(rule, cell, target_degree);
    } else {
      append_polygon_fan(rule, vertices, target_degree);
    }
    return rule;
  }

  QuadratureRule rule;
  rule.exact_degree = target_degree;
  for (const Triangle& t : region.simple_polygon()->triangulate()) {
    if (max_affine) {
      for (const auto& cell : split_by_pieces(t.v, *max_affine))
        append_polygon_fan(rule, cell, target_degree);
    } else {
      append_triangle(rule, t, target_degree);
    }
  }
  return rule;
}

Complex integrate(const QuadratureRule& rule, const std::function<Complex(Complex)>& f) {
  // Neumaier summation on the real and imaginary parts.
  double s_re = 0.0, c_re = 0.0, s_im = 0.0, c_im = 0.0;
  auto add = [](double& s, double& c, double x) {
    const double t = s + x;
    c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    s = t;
  };
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const Complex v = f(rule.nodes[i]);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      std::ostringstream os;
      os << "non-finite integrand at node (" << rule.nodes[i].real() << ", "
         << rule.nodes[i].imag() << ")";
      throw Error(ErrorKind::NonFiniteIntegrand, os.str());
    }
    add(s_re, c_re, rule.weights[i] * v.real());
    add(s_im, c_im, rule.weights[i] * v.imag());
  }
  return {s_re + c_re, s_im + c_im};
}

StableRule refine_until_stable(const Region& region, int start_degree, const Weight& w,
                               const ProbeSet& probes, double rel_tol,
                               const RefineOptions& options) {
  if (!(rel_tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "rel_tol must be positive");
  if (options.step < 1) throw Error(ErrorKind::InvalidArgument, "refinement step must be >= 1");
  const int cap = std::min(options.max_degree, kMaxQuadratureDegree);
  int degree = std::max(1, std::min(start_degree, cap));
  QuadratureRule rule = rule_for(region, degree, w);
  std::vector<double> values = probes(rule);
  double delta = std::numeric_limits<double>::infinity();
  while (degree < cap) {
    const int next_degree = std::min(degree + options.step, cap);
    QuadratureRule next = rule_for(region, next_degree, w);
    std::vector<double> next_values = probes(next);
    delta = relative_change(values, next_values);
    degree = next_degree;
    rule = std::move(next);
    values = std::move(next_values);
    if (delta <= rel_tol) return {std::move(rule), degree, delta, std::move(values)};
  }
  throw QuadratureNotConverged(delta, degree);
}

StableRule refine_until_stable(const Region& region, int start_degree,
                               std::span<const std::function<double(Complex)>> probes,
                               double rel_tol, const RefineOptions& options) {
  std::vector<std::function<double(Complex)>> fs(probes.begin(), probes.end());
  ProbeSet set = [fs](const QuadratureRule& rule) {
    std::vector<double> out;
    out.reserve(fs.size());
    for (const auto& f : fs)
      out.push_back(integrate(rule, [&f](Complex z) { return Complex(f(z), 0.0); }).real());
    return out;
  };
  return refine_until_stable(region, start_degree, Weight::zero(), set, rel_tol, options);
}

void write_rule_csv(std::ostream& os, const QuadratureRule& rule) {
  os << "node_x,node_y,weight\n";
  os.precision(17);
  for (std::size_t i = 0; i < rule.size(); ++i)
    os << rule.nodes[i].real() << ',' << rule.nodes[i].imag() << ',' << rule.weights[i] << '\n';
}

}  // namespace bergman
