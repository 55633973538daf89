#include <numbers>
#include <sstream>

#include "bergman/error.hpp"
#include "bergman/quadrature.hpp"
#include "doctest.h"
#include "support.hpp"

using bergman::Complex;
using bergman::ConvexDomain;
using bergman::QuadratureRule;
using bergman::Weight;

namespace {

double moment(const QuadratureRule& r, int a, int b) {
  return bergman::integrate(r, [a, b](Complex z) {
           return Complex(std::pow(z.real(), a) * std::pow(z.imag(), b), 0.0);
         }).real();
}

void check_positive(const QuadratureRule& r) {
  REQUIRE(r.nodes.size() == r.weights.size());
  for (double w : r.weights) REQUIRE(w > 0.0);
}

}  // namespace

TEST_CASE("gauss legendre on [0,1]") {
  const auto& g = bergman::gauss_legendre(10);
  REQUIRE(g.nodes.size() == 10);
  double sum = 0.0, m19 = 0.0;
  for (std::size_t i = 0; i < 10; ++i) {
    sum += g.weights[i];
    m19 += g.weights[i] * std::pow(g.nodes[i], 19);
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(m19 == doctest::Approx(1.0 / 20).epsilon(1e-14));
}

TEST_CASE("unit disk examples") {
  const auto rule = bergman::rule_for(ConvexDomain::disk(0.0, 1.0), 20);
  check_positive(rule);
  CHECK(std::abs(rule.total_weight() - std::numbers::pi) < 1e-12);
  for (int j = 0; j <= 10; ++j) {
    const double v = bergman::integrate(rule, [j](Complex z) { return Complex(std::pow(std::norm(z), j)); }).real();
    CHECK(std::abs(v - std::numbers::pi / (j + 1)) < 1e-12);
  }
  CHECK(std::abs(bergman::integrate(rule, [](Complex z) { return z; })) < 1e-12);
}

TEST_CASE("square x^2 y^2") {
  const auto sq = ConvexDomain::polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
  const auto rule = bergman::rule_for(sq, 4);
  check_positive(rule);
  CHECK(std::abs(moment(rule, 2, 2) - 4.0 / 9.0) < 1e-12);
  CHECK(std::abs(rule.total_weight() - 4.0) < 1e-12);
}

TEST_CASE("weighted radial example on disk of radius 3") {
  const auto rule = bergman::rule_for(ConvexDomain::disk(0.0, 3.0), 80);
  const double v = bergman::integrate(rule, [](Complex z) {
                     return Complex(std::norm(z) * std::exp(-std::norm(z)));
                   }).real();
  CHECK(std::abs(v - std::numbers::pi * (1 - 10 * std::exp(-9.0))) < 1e-8);
}

TEST_CASE("property: polygon exactness against Green's theorem moments") {
  bergman::Rng rng(11);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(6));
    const Complex c{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const auto v = testing::random_convex_polygon(rng, n, c, rng.uniform(0.5, 2.0));
    const auto dom = ConvexDomain::polygon(v);
    const int degree = 2 + static_cast<int>(rng.below(20));
    const auto rule = bergman::rule_for(dom, degree);
    check_positive(rule);
    CHECK(rule.exact_degree >= degree);
    for (int a = 0; a <= degree; ++a)
      for (int b = 0; a + b <= degree; ++b) {
        const double exact = testing::polygon_moment(v, a, b);
        const double got = moment(rule, a, b);
        const double scale = testing::polygon_moment(v, 0, 0) * std::pow(std::abs(c) + 2.0, a + b);
        REQUIRE(std::abs(got - exact) <= 1e-11 * scale);
      }
  }
}

TEST_CASE("property: disk and ellipse exactness") {
  for (int degree : {3, 10, 31}) {
    const auto rule = bergman::rule_for(ConvexDomain::disk(0.0, 1.0), degree);
    CHECK(rule.exact_degree >= degree);
    for (int a = 0; a <= degree; ++a)
      for (int b = 0; a + b <= degree; ++b)
        REQUIRE(std::abs(moment(rule, a, b) - testing::unit_disk_moment(a, b)) <= 1e-11);
  }
  // Ellipse semi-axes (2, 0.5), rotation 0: x = 2u, y = 0.5v.
  const auto ell = bergman::rule_for(ConvexDomain::ellipse(0.0, 2.0, 0.5), 12);
  for (int a = 0; a <= 12; ++a)
    for (int b = 0; a + b <= 12; ++b) {
      const double exact = testing::unit_disk_moment(a, b) * std::pow(2.0, a) * std::pow(0.5, b);
      REQUIRE(std::abs(moment(ell, a, b) - exact) <= 1e-11 * std::pow(2.0, a));
    }
}

TEST_CASE("property: affine covariance") {
  const Complex scale{0.6, 1.1};
  const Complex shift{-0.4, 2.0};
  const double jac = std::norm(scale);
  const auto f = [](Complex z) { return Complex(std::cos(z.real()) * std::exp(0.3 * z.imag()), z.real() * z.imag()); };
  for (const ConvexDomain& dom :
       {ConvexDomain::disk({0.2, 0.1}, 1.3), ConvexDomain::ellipse(0.0, 1.5, 0.7, 0.4),
        ConvexDomain::regular_polygon(6, {1, 0}, 1.0, 0.1)}) {
    const auto image = dom.affine_image(scale, shift);
    const Complex direct = bergman::integrate(bergman::rule_for(image, 30), f);
    const Complex pulled =
        jac * bergman::integrate(bergman::rule_for(dom, 30), [&](Complex z) { return f(scale * z + shift); });
    CHECK(std::abs(direct - pulled) <= 1e-11 * (1.0 + std::abs(direct)));
  }
}

TEST_CASE("triangle rule exactness") {
  const bergman::Triangle t{{Complex{0, 0}, Complex{2, 0}, Complex{0.5, 1.5}}};
  const std::vector<Complex> v{t.v.begin(), t.v.end()};
  for (int degree : {1, 5, 14}) {
    const auto rule = bergman::triangle_rule(t, degree);
    check_positive(rule);
    for (int a = 0; a <= degree; ++a)
      for (int b = 0; a + b <= degree; ++b)
        CHECK(std::abs(moment(rule, a, b) - testing::polygon_moment(v, a, b)) < 1e-12 * std::pow(2.0, a + b));
  }
}

TEST_CASE("simple polygon rule covers the L-shape") {
  const bergman::SimplePolygon l({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}});
  const auto rule = bergman::rule_for(bergman::Region(l), 8, Weight::zero());
  CHECK(std::abs(rule.total_weight() - 3.0) < 1e-12);
  CHECK(std::abs(moment(rule, 3, 5) - testing::polygon_moment(l.vertices(), 3, 5)) < 1e-11);
}

TEST_CASE("max_affine split rules integrate the kinked weight") {
  const auto w = Weight::max_affine({{2, 0, -1}, {0, 0, 0}, {0, -1, -0.5}});
  const auto f = [&w](Complex z) { return Complex(std::exp(-w.eval(z))); };
  // Reference on a heavily refined unsplit fan is not exact; the split rule at
  // two different degrees must agree to high accuracy.
  for (const ConvexDomain& dom : {ConvexDomain::polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}),
                                  ConvexDomain::ellipse(0.0, 2.0, 1.0), ConvexDomain::disk(0.3, 1.0)}) {
    const Complex lo = bergman::integrate(bergman::rule_for(dom, 20, w), f);
    const Complex hi = bergman::integrate(bergman::rule_for(dom, 60, w), f);
    CHECK(std::abs(lo - hi) < 1e-12 * std::abs(hi));
  }
  // Piecewise closed form on the square: exp(-max(2x-1, 0, -y-1/2)).
  // Over [-1,1]^2, -y-1/2 > 0 iff y < -1/2 and dominates 2x-1 iff -y-1/2 > 2x-1.
  const auto sq = ConvexDomain::polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
  const auto split = bergman::rule_for(sq, 30, w);
  const auto unsplit = bergman::rule_for(sq, 30);
  const double a = bergman::integrate(split, f).real();
  const double b = bergman::integrate(unsplit, f).real();
  CHECK(std::abs(a - b) > 1e-9);  // the kink defeats the unsplit rule
  // 1-D reference: integrate in x analytically for each y by Gauss on y pieces.
  const auto& g = bergman::gauss_legendre(40);
  auto inner = [](double y) {
    // int_{-1}^{1} exp(-max(2x-1, 0, -y-1/2)) dx, kinks at solutions of the max.
    const double c = std::max(0.0, -y - 0.5);
    // 2x - 1 > c  iff  x > (1 + c) / 2.
    const double x0 = std::min(1.0, (1.0 + c) / 2.0);
    double s = (x0 + 1.0) * std::exp(-c);
    if (x0 < 1.0) s += 0.5 * (std::exp(-(2 * x0 - 1)) - std::exp(-1.0));
    return s;
  };
  double ref = 0.0;
  for (const auto& [lo, hi] : {std::pair{-1.0, -0.5}, std::pair{-0.5, 1.0}})
    for (std::size_t i = 0; i < g.nodes.size(); ++i) ref += (hi - lo) * g.weights[i] * inner(lo + (hi - lo) * g.nodes[i]);
  CHECK(std::abs(a - ref) < 1e-12 * ref);
}

TEST_CASE("integrate rejects non-finite values") {
  const auto rule = bergman::rule_for(ConvexDomain::disk(0.0, 1.0), 4);
  try {
    (void)bergman::integrate(rule, [](Complex) { return Complex(std::nan("")); });
    FAIL("expected an error");
  } catch (const bergman::Error& e) {
    CHECK(e.kind() == bergman::ErrorKind::NonFiniteIntegrand);
  }
}

TEST_CASE("degree cap") {
  try {
    (void)bergman::rule_for(ConvexDomain::disk(0.0, 1.0), 201);
    FAIL("expected an error");
  } catch (const bergman::Error& e) {
    CHECK(e.kind() == bergman::ErrorKind::DegreeTooLarge);
  }
}

TEST_CASE("refine_until_stable examples") {
  const bergman::Region disk = ConvexDomain::disk(0.0, 1.0);
  const std::function<double(Complex)> gauss = [](Complex z) { return std::exp(-std::norm(z)); };
  const auto stable = bergman::refine_until_stable(disk, 4, std::span(&gauss, 1), 1e-10);
  CHECK(stable.stability <= 1e-10);
  CHECK(std::abs(stable.probe_values[0] - std::numbers::pi * (1 - std::exp(-1.0))) < 1e-10);

  const std::function<double(Complex)> poly = [](Complex z) { return std::pow(z.real(), 4) + z.imag(); };
  const auto immediate = bergman::refine_until_stable(disk, 8, std::span(&poly, 1), 1e-12);
  CHECK(immediate.degree == 8 + 4);  // one comparison step
  CHECK(immediate.stability < 1e-14);

  const std::function<double(Complex)> kink = [](Complex z) { return std::abs(z.real()) < 0.3 ? 1.0 : 0.0; };
  try {
    (void)bergman::refine_until_stable(disk, 4, std::span(&kink, 1), 1e-14, {4, 40});
    FAIL("expected non-convergence");
  } catch (const bergman::QuadratureNotConverged& e) {
    CHECK(e.kind() == bergman::ErrorKind::QuadratureNotConverged);
    CHECK(e.last_delta() > 1e-14);
    CHECK(e.last_degree() == 40);
  }
}

TEST_CASE("rule csv dump") {
  const auto rule = bergman::rule_for(ConvexDomain::disk(0.0, 1.0), 2);
  std::ostringstream os;
  bergman::write_rule_csv(os, rule);
  const std::string s = os.str();
  CHECK(s.rfind("node_x,node_y,weight\n", 0) == 0);
  CHECK(static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')) == rule.size() + 1);
}

TEST_CASE("determinism: same rule, bit-identical integral") {
  const auto rule = bergman::rule_for(ConvexDomain::regular_polygon(5, 0.0, 1.2), 40);
  const auto f = [](Complex z) { return Complex(std::sin(3 * z.real()) * std::exp(z.imag())); };
  const Complex a = bergman::integrate(rule, f);
  const Complex b = bergman::integrate(bergman::rule_for(ConvexDomain::regular_polygon(5, 0.0, 1.2), 40), f);
  CHECK(a == b);
}
