#include <numbers>

#include "bergman/error.hpp"
#include "bergman/kernel.hpp"
#include "doctest.h"
#include "support.hpp"

using bergman::ClosedFormKernel;
using bergman::Complex;
using bergman::ConvexDomain;
using bergman::KernelApprox;
using bergman::Weight;

namespace {

constexpr double pi = std::numbers::pi;

ConvexDomain square() { return ConvexDomain::polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}); }

// K_C(x) for phi = x^2 from the Fourier representation
// f(z) = int g(xi) e^{z xi} dxi, ||f||^2 = 2 pi^{3/2} int |g|^2 e^{xi^2}:
// K(x) = (2 pi^{3/2})^{-1} int e^{2 x xi - xi^2} dxi, by the trapezoid rule.
double gaussian_weight_kernel(double x) {
  const double h = 1e-3;
  double s = 0.0;
  for (double xi = x - 12.0; xi <= x + 12.0; xi += h) s += std::exp(2 * x * xi - xi * xi);
  return s * h / (2.0 * std::pow(pi, 1.5));
}

std::vector<Complex> probe_grid(double r_max, int radii, int angles) {
  std::vector<Complex> out;
  for (int i = 0; i < radii; ++i)
    for (int k = 0; k < angles; ++k)
      out.push_back(std::polar(r_max * i / (radii - 1), 2 * pi * (k + 0.5) / angles));
  return out;
}

}  // namespace

TEST_CASE("closed forms") {
  CHECK(ClosedFormKernel::unit_disk().eval(0.0) == doctest::Approx(1.0 / pi).epsilon(1e-15));
  CHECK(ClosedFormKernel::unit_disk().eval(0.5) == doctest::Approx(1.0 / (pi * 0.5625)).epsilon(1e-15));
  CHECK_THROWS_AS(ClosedFormKernel::unit_disk().eval(1.0), bergman::Error);

  // Normalization as displayed in the source, checked for its value only.
  const auto shown = ClosedFormKernel::gaussian_x(std::sqrt(pi));
  CHECK(shown.normalization_known());
  CHECK(shown.eval({1, 7}) == doctest::Approx(std::sqrt(pi) * std::exp(1.0)).epsilon(1e-15));
  CHECK_FALSE(ClosedFormKernel::gaussian_x().normalization_known());

  const auto bidisk = ClosedFormKernel::product(ClosedFormKernel::unit_disk(), ClosedFormKernel::unit_disk());
  CHECK(bidisk.dimension() == 2);
  const Complex origin[2] = {0.0, 0.0};
  CHECK(bidisk.eval(origin) == doctest::Approx(1.0 / (pi * pi)).epsilon(1e-15));

  // disk_fock with alpha = 0 reduces to the scaled unit disk kernel.
  const auto flat = ClosedFormKernel::disk_fock(2.0, 0.0);
  CHECK(flat.eval(0.7) == doctest::Approx(4.0 / (pi * std::pow(4.0 - 0.49, 2))).epsilon(1e-13));
  // c_j = 2 pi int_0^1 r^{2j+1} e^{-r^2} dr; c_0 = pi (1 - e^{-1}).
  const auto c = ClosedFormKernel::fock_moments(1.0, 1.0, 3);
  CHECK(c[0] == doctest::Approx(pi * (1 - std::exp(-1.0))).epsilon(1e-14));
  CHECK(c[1] == doctest::Approx(pi * (1 - 2 * std::exp(-1.0))).epsilon(1e-14));
}

TEST_CASE("build: unit disk monomials are already orthogonal") {
  const auto k = KernelApprox::build(ConvexDomain::disk(0.0, 1.0), Weight::zero(), 10);
  CHECK(std::abs(k.center()) < 1e-15);
  CHECK(k.scale() == doctest::Approx(1.0));
  const auto& r = k.triangular_factor();
  for (int i = 0; i <= 10; ++i)
    for (int j = 0; j <= 10; ++j) {
      if (i == j)
        CHECK(std::abs(r(i, j)) == doctest::Approx(std::sqrt(pi / (j + 1))).epsilon(1e-12));
      else
        CHECK(std::abs(r(i, j)) <= 1e-12);
    }
}

TEST_CASE("build: unit disk with |z|^2 weight has the radial diagonal") {
  const auto k = KernelApprox::build(ConvexDomain::disk(0.0, 1.0), Weight::modulus_squared(1.0), 10);
  const auto c = ClosedFormKernel::fock_moments(1.0, 1.0, 11);
  const auto& r = k.triangular_factor();
  for (int j = 0; j <= 10; ++j) {
    CHECK(std::norm(r(j, j)) == doctest::Approx(c[static_cast<std::size_t>(j)]).epsilon(1e-10));
    for (int i = 0; i < j; ++i) CHECK(std::abs(r(i, j)) <= 1e-12);
  }
}

TEST_CASE("eval examples") {
  const auto sq0 = KernelApprox::build(square(), Weight::zero(), 0);
  CHECK(sq0.eval({0.2, -0.3}) == doctest::Approx(0.25).epsilon(1e-14));

  for (int n : {0, 3, 10}) {
    const auto k = KernelApprox::build(ConvexDomain::disk(0.0, 1.0), Weight::zero(), n);
    CHECK(std::abs(k.eval(0.0) - 1.0 / pi) < 1e-10);
  }
  const auto k30 = KernelApprox::build(ConvexDomain::disk(0.0, 1.0), Weight::zero(), 30);
  CHECK(std::abs(k30.eval(0.5) - 1.0 / (pi * 0.5625)) < 1e-8);
  CHECK(std::abs(k30.eval2(0.3, 0.0) - Complex(1.0 / pi)) < 1e-9);
  CHECK(std::abs(k30.eval2({0.2, 0.1}, {0.2, 0.1}) - k30.eval({0.2, 0.1})) < 1e-12 * k30.eval({0.2, 0.1}));
}

TEST_CASE("eval refuses probes near the boundary") {
  const auto k = KernelApprox::build(ConvexDomain::disk(0.0, 1.0), Weight::zero(), 5);
  CHECK(k.boundary_offset() == doctest::Approx(0.1));
  try {
    (void)k.eval(0.95);
    FAIL("expected an error");
  } catch (const bergman::Error& e) {
    CHECK(e.kind() == bergman::ErrorKind::ProbeTooCloseToBoundary);
  }
  CHECK_NOTHROW((void)k.eval(0.89));
}

TEST_CASE("oracle equivalence on |z| <= 0.7") {
  const auto grid = probe_grid(0.7, 10, 10);
  const auto k = KernelApprox::build(ConvexDomain::disk(0.0, 1.0), Weight::zero(), 30);
  const auto exact = ClosedFormKernel::unit_disk();
  double worst = 0.0;
  for (const Complex& z : grid) worst = std::max(worst, std::abs(k.eval(z) - exact.eval(z)) / exact.eval(z));
  CHECK(worst <= 1e-6);

  const auto kw = KernelApprox::build(ConvexDomain::disk(0.0, 1.0), Weight::modulus_squared(1.0), 30);
  const auto fock = ClosedFormKernel::disk_fock(1.0, 1.0);
  worst = 0.0;
  for (const Complex& z : grid) worst = std::max(worst, std::abs(kw.eval(z) - fock.eval(z)) / fock.eval(z));
  CHECK(worst <= 1e-6);
}

TEST_CASE("reproducing property") {
  const auto k = KernelApprox::build(ConvexDomain::disk(0.0, 1.0), Weight::zero(), 10);
  const Complex one[] = {1.0};
  CHECK(k.reproducing_error(one, 0.0) <= 1e-10);
  const Complex cube[] = {0.0, 0.0, 0.0, 1.0};
  CHECK(k.reproducing_error(cube, 0.4) <= 1e-9);

  const auto kw = KernelApprox::build(ConvexDomain::regular_polygon(5, 0.2, 1.2), Weight::quadratic(1, 0, 0.3), 12);
  bergman::Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Complex> coeffs(static_cast<std::size_t>(1 + rng.below(13)));
    for (auto& c : coeffs) c = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const Complex z{rng.uniform(-0.4, 0.6), rng.uniform(-0.4, 0.4)};
    CHECK(kw.reproducing_error(coeffs, z) <= 1e-9);
  }
}

TEST_CASE("converge_table examples") {
  const int degrees[] = {10, 20, 30};
  const auto t = bergman::converge_table(ConvexDomain::disk(0.0, 1.0), Weight::zero(), 0.5, degrees);
  REQUIRE(t.rows.size() == 3);
  CHECK(std::isnan(t.rows[0].delta));
  // Tail of sum (j+1) |z|^{2j}: ten more degrees shrink it by about 0.25^10.
  CHECK(t.rows[2].delta < t.rows[1].delta * 1e-4);
  CHECK(t.converged);

  const int low[] = {0, 1};
  for (const ConvexDomain& dom : {square(), ConvexDomain::ellipse(0.0, 2.0, 1.0)}) {
    const auto m = bergman::converge_table(dom, Weight::modulus_squared(1.0), dom.centroid(), low);
    CHECK(m.rows[1].value >= m.rows[0].value - 1e-12);
  }

  const int ladder[] = {8, 16, 24, 32};
  const auto sq = bergman::converge_table(square(), Weight::quadratic(1, 0, 0), 0.0, ladder);
  for (std::size_t i = 1; i < sq.rows.size(); ++i)
    CHECK(sq.rows[i].value >= sq.rows[i - 1].value * (1 - 1e-9));
}

TEST_CASE("property: positivity, degree monotonicity, hermitian symmetry") {
  bergman::Rng rng(17);
  const std::vector<std::pair<bergman::Region, Weight>> cases{
      {square(), Weight::zero()},
      {ConvexDomain::ellipse({0.5, 0}, 2.0, 1.0, 0.3), Weight::modulus_squared(0.5)},
      {ConvexDomain::regular_polygon(5, 0.0, 1.2), Weight::max_affine({{2, 0, -1}, {0, 0, 0}, {0, -1, -0.5}})},
      {bergman::SimplePolygon({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}), Weight::quadratic(1, 0, 0)}};
  for (const auto& [region, weight] : cases) {
    std::vector<KernelApprox> ks;
    for (int n = 6; n <= 9; ++n) ks.push_back(KernelApprox::build(region, weight, n));
    int probes = 0;
    const auto box = region.bounds();
    while (probes < 30) {
      const Complex z{rng.uniform(box.x_min, box.x_max), rng.uniform(box.y_min, box.y_max)};
      if (region.signed_distance(z) < ks[0].boundary_offset()) continue;
      ++probes;
      for (std::size_t i = 0; i < ks.size(); ++i) {
        REQUIRE(ks[i].eval(z) > 0.0);
        if (i) CHECK(ks[i - 1].eval(z) <= ks[i].eval(z) * (1 + 1e-9));
      }
      const Complex w{rng.uniform(box.x_min, box.x_max), rng.uniform(box.y_min, box.y_max)};
      if (region.signed_distance(w) < ks[0].boundary_offset()) continue;
      const Complex a = ks.back().eval2(z, w);
      const Complex b = ks.back().eval2(w, z);
      CHECK(std::abs(a - std::conj(b)) <= 1e-12 * std::abs(a) + 1e-15);
      CHECK(std::abs(ks.back().eval2(z, z).real() - ks.back().eval(z)) <= 1e-12 * ks.back().eval(z));
    }
  }
}

TEST_CASE("property: domain and weight monotonicity") {
  // Nested disks and a square inside the disk.
  const auto inner = KernelApprox::build(ConvexDomain::disk(0.0, 0.8), Weight::zero(), 30);
  const auto outer = KernelApprox::build(ConvexDomain::disk(0.0, 1.0), Weight::zero(), 30);
  const auto sq = KernelApprox::build(ConvexDomain::rectangle(-0.5, 0.5, -0.5, 0.5), Weight::zero(), 30);
  for (const Complex& z : probe_grid(0.35, 5, 8)) {
    CHECK(inner.eval(z) >= outer.eval(z) * (1 - 1e-6));
    CHECK(sq.eval(z) >= outer.eval(z) * (1 - 1e-6));
  }
  // zero <= |z|^2 pointwise, so K_zero <= K_{|z|^2}.
  const auto weighted = KernelApprox::build(ConvexDomain::disk(0.0, 1.0), Weight::modulus_squared(1.0), 30);
  for (const Complex& z : probe_grid(0.7, 8, 8)) CHECK(outer.eval(z) <= weighted.eval(z) * (1 + 1e-6));
}

TEST_CASE("gaussian weight constant by rectangle exhaustion") {
  // The Fourier oracle itself: e^{x^2} / (2 pi).
  for (double x : {0.0, 0.5, 1.0})
    CHECK(gaussian_weight_kernel(x) == doctest::Approx(std::exp(x * x) / (2 * pi)).epsilon(1e-12));

  double previous_error = 1.0;
  for (double a : {2.0, 3.0, 4.0}) {
    const auto k = KernelApprox::build(ConvexDomain::rectangle(-a, a, -2 * a, 2 * a), Weight::quadratic(1, 0, 0), 40);
    const double err = std::abs(k.eval(0.0) - gaussian_weight_kernel(0.0)) / gaussian_weight_kernel(0.0);
    CHECK(err < previous_error);
    previous_error = err;
    if (a == 4.0) {
      CHECK(err < 1e-4);
      // The x-dependence is e^{x^2} on the central part.
      for (double x : {-1.0, -0.5, 0.5, 1.0})
        CHECK(k.eval(x) / std::exp(x * x) == doctest::Approx(k.eval(0.0)).epsilon(2e-3));
    }
  }
  CHECK(previous_error < 1e-4);
}

TEST_CASE("determinism: identical builds evaluate bit-identically") {
  const auto w = Weight::max_affine({{2, 0, -1}, {0, 0, 0}});
  const auto a = KernelApprox::build(ConvexDomain::ellipse(0.0, 2.0, 1.0), w, 15);
  const auto b = KernelApprox::build(ConvexDomain::ellipse(0.0, 2.0, 1.0), w, 15);
  CHECK(a.eval({0.3, 0.2}) == b.eval({0.3, 0.2}));
  CHECK(a.gram_stability() == b.gram_stability());
}
