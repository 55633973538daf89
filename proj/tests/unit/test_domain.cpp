#include <numbers>

#include "bergman/domain.hpp"
#include "bergman/error.hpp"
#include "doctest.h"
#include "support.hpp"

using bergman::Complex;
using bergman::ConvexDomain;
using bergman::SimplePolygon;

namespace {

ConvexDomain square() { return ConvexDomain::polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}); }

double triangle_area_sum(const std::vector<bergman::Triangle>& tris) {
  double s = 0.0;
  for (const auto& t : tris) s += t.signed_area();
  return s;
}

}  // namespace

TEST_CASE("contains: disk and square examples") {
  const auto disk = ConvexDomain::disk(0.0, 1.0);
  CHECK(disk.contains(0.0));
  CHECK_FALSE(disk.contains(1.001));
  CHECK(disk.contains(1.001, 0.01));
  CHECK(square().contains({0.5, 0.5}));
  CHECK_FALSE(square().contains({1.2, 0.0}));
  CHECK(square().contains({1.0 + 1e-9, 0.0}, 1e-8));
}

TEST_CASE("polygon factory rejects non-convex and clockwise input") {
  const std::vector<Complex> l_shape{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
  CHECK_THROWS_AS(ConvexDomain::polygon(l_shape), bergman::Error);
  try {
    ConvexDomain::polygon(l_shape);
  } catch (const bergman::Error& e) {
    CHECK(e.kind() == bergman::ErrorKind::NotConvex);
  }
  const SimplePolygon accepted(l_shape);
  CHECK_FALSE(accepted.is_convex());
  CHECK(accepted.area() == doctest::Approx(3.0));
  CHECK_THROWS_AS(ConvexDomain::polygon({{-1, -1}, {-1, 1}, {1, 1}, {1, -1}}), bergman::Error);
  CHECK_THROWS_AS(ConvexDomain::disk(0.0, 0.0), bergman::Error);
}

TEST_CASE("simple polygon rejects self-intersection") {
  CHECK_THROWS_AS(SimplePolygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}}), bergman::Error);
}

TEST_CASE("triangulate: square fan has four unit triangles") {
  const auto tris = square().triangulate(1);
  REQUIRE(tris.size() == 4);
  for (const auto& t : tris) CHECK(t.signed_area() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("triangulate: triangle domain gives three fan triangles") {
  const auto tri = ConvexDomain::polygon({{0, 0}, {3, 0}, {1, 2}});
  const auto tris = tri.triangulate(1);
  CHECK(tris.size() == 3);
  CHECK(triangle_area_sum(tris) == doctest::Approx(tri.area()).epsilon(1e-14));
}

TEST_CASE("triangulate: inscribed polygon area tends to pi") {
  const auto disk = ConvexDomain::disk(0.0, 1.0);
  double previous = 0.0;
  for (int k : {1, 2, 4, 8, 16}) {
    const double a = triangle_area_sum(disk.triangulate(k));
    const int n = 8 * k;
    CHECK(a == doctest::Approx(n * std::sin(2.0 * std::numbers::pi / n) / 2.0).epsilon(1e-12));
    CHECK(a > previous);
    CHECK(a < std::numbers::pi);
    previous = a;
  }
  // pi - (n/2) sin(2 pi/n) ~ 2 pi^3 / (3 n^2) at n = 128.
  CHECK(std::numbers::pi - previous < 1.3e-3);
}

TEST_CASE("triangulate: area sums match closed form on random polygons") {
  bergman::Rng rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const auto v = testing::random_convex_polygon(rng, 3 + static_cast<int>(rng.below(8)),
                                                  {rng.uniform(-2, 2), rng.uniform(-2, 2)}, rng.uniform(0.1, 3));
    const auto dom = ConvexDomain::polygon(v);
    for (int refinement : {1, 3}) {
      const double sum = triangle_area_sum(dom.triangulate(refinement));
      CHECK(std::abs(sum - dom.area()) <= 1e-12 * dom.area());
    }
  }
  const SimplePolygon l({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}});
  CHECK(triangle_area_sum(l.triangulate()) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("segment samples") {
  const auto s = bergman::Segment{0.0, 1.0, 3}.samples();
  REQUIRE(s.size() == 3);
  CHECK(s[0] == Complex(0.0));
  CHECK(s[1] == Complex(0.5));
  CHECK(s[2] == Complex(1.0));

  const auto d = bergman::Segment{{0, 0.3}, {0, 0.3}, 5}.samples();
  REQUIRE(d.size() == 5);
  for (const auto& z : d) CHECK(z == Complex(0, 0.3));

  const auto e = bergman::Segment{-1.0, {0, 1}, 2}.samples();
  REQUIRE(e.size() == 2);
  CHECK(e[0] == Complex(-1.0));
  CHECK(e[1] == Complex(0, 1));
}

TEST_CASE("affine image examples") {
  const auto unit = ConvexDomain::disk(0.0, 1.0);
  const auto shifted = unit.affine_image(1.0, 2.0);
  const auto& d = std::get<bergman::Disk>(shifted.shape());
  CHECK(d.center == Complex(2.0));
  CHECK(d.radius == 1.0);

  const auto scaled_domain = unit.affine_image({0, 2}, 0.0);
  const auto& scaled = std::get<bergman::Disk>(scaled_domain.shape());
  CHECK(std::abs(scaled.center) == 0.0);
  CHECK(scaled.radius == doctest::Approx(2.0));

  const Complex zt{0.3, -0.2};
  const auto sq = square();
  const auto moved = sq.affine_image(1.0, -zt);
  const auto& src = std::get<bergman::ConvexPolygon>(sq.shape()).vertices;
  const auto& dst = std::get<bergman::ConvexPolygon>(moved.shape()).vertices;
  REQUIRE(src.size() == dst.size());
  for (std::size_t i = 0; i < src.size(); ++i) CHECK(std::abs(dst[i] - (src[i] - zt)) < 1e-15);

  const auto ell = ConvexDomain::ellipse(0.0, 2.0, 1.0, 0.3).affine_image({0, 1.5}, {1, 1});
  CHECK(ell.area() == doctest::Approx(2.0 * std::numbers::pi * 2.25));
}

TEST_CASE("geometry accessors") {
  CHECK(square().area() == doctest::Approx(4.0));
  CHECK(std::abs(square().centroid()) < 1e-15);
  CHECK(square().diameter() == doctest::Approx(2.0 * std::sqrt(2.0)));
  const auto ell = ConvexDomain::ellipse({1, 2}, 2.0, 1.0, 0.7);
  CHECK(ell.area() == doctest::Approx(2.0 * std::numbers::pi));
  CHECK(std::abs(ell.centroid() - Complex(1, 2)) < 1e-15);
  CHECK(ell.diameter() == doctest::Approx(4.0));
  const auto pent = ConvexDomain::regular_polygon(5, 0.0, 1.2);
  CHECK(pent.area() == doctest::Approx(2.5 * 1.44 * std::sin(2.0 * std::numbers::pi / 5)));
  const auto b = ConvexDomain::disk({1, -1}, 2.0).bounds();
  CHECK(b.x_min == doctest::Approx(-1.0));
  CHECK(b.y_max == doctest::Approx(1.0));
}

TEST_CASE("signed distance") {
  CHECK(ConvexDomain::disk(0.0, 1.0).signed_distance(0.25) == doctest::Approx(0.75));
  CHECK(ConvexDomain::disk(0.0, 1.0).signed_distance(2.0) == doctest::Approx(-1.0));
  CHECK(square().signed_distance({0.5, 0.0}) == doctest::Approx(0.5));
  CHECK(square().signed_distance({2.0, 0.0}) == doctest::Approx(-1.0));
  const auto ell = ConvexDomain::ellipse(0.0, 2.0, 1.0);
  CHECK(ell.signed_distance(0.0) == doctest::Approx(1.0));
  CHECK(ell.signed_distance(1.5) == doctest::Approx(0.5));
  CHECK(ell.signed_distance({0.0, 3.0}) == doctest::Approx(-2.0));
  const SimplePolygon l({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}});
  CHECK(l.signed_distance({0.5, 0.5}) == doctest::Approx(0.5));
  CHECK(l.signed_distance({1.5, 1.5}) == doctest::Approx(-0.5));
}

TEST_CASE("property: segments between members stay inside") {
  bergman::Rng rng(99);
  const std::vector<ConvexDomain> domains{
      ConvexDomain::disk({0.3, -0.1}, 1.7), ConvexDomain::ellipse({1, 1}, 2.0, 0.5, 1.1), square(),
      ConvexDomain::regular_polygon(7, {-1, 2}, 0.8, 0.2)};
  for (const auto& dom : domains) {
    const auto box = dom.bounds();
    const double tol = 1e-12 * dom.diameter();
    int pairs = 0;
    while (pairs < 1000) {
      const Complex p{rng.uniform(box.x_min, box.x_max), rng.uniform(box.y_min, box.y_max)};
      const Complex q{rng.uniform(box.x_min, box.x_max), rng.uniform(box.y_min, box.y_max)};
      if (!dom.contains(p) || !dom.contains(q)) continue;
      ++pairs;
      for (const Complex& z : bergman::Segment{p, q, 9}.samples()) REQUIRE(dom.contains(z, tol));
    }
  }
}

TEST_CASE("clip half plane") {
  const std::vector<Complex> sq{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
  const auto right = bergman::clip_half_plane(sq, 1.0, 0.0, 0.0);
  CHECK(bergman::polygon_signed_area(right) == doctest::Approx(2.0));
  const auto none = bergman::clip_half_plane(sq, 1.0, 0.0, -5.0);
  CHECK(none.size() < 3);
}
