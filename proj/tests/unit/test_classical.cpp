#include <numbers>

#include "bergman/classical.hpp"
#include "bergman/error.hpp"
#include "doctest.h"

using bergman::Complex;
using bergman::TaylorMap;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("disk density values") {
  CHECK(bergman::disk_density(0.0) == 2.0);
  CHECK(bergman::disk_density(0.5) == doctest::Approx(8.0 / 3.0).epsilon(1e-15));
  CHECK(bergman::disk_density({0.0, -0.5}) == doctest::Approx(8.0 / 3.0).epsilon(1e-15));
  CHECK_THROWS_AS(bergman::disk_density(1.0), bergman::Error);
  CHECK_THROWS_AS(bergman::disk_density({0.8, 0.8}), bergman::Error);
}

TEST_CASE("4 pi K equals lambda squared on the unit disk") {
  std::vector<Complex> probes;
  for (double r : {0.0, 0.3, 0.6, 0.9, 0.99})
    for (int k = 0; k < 8; ++k) probes.push_back(std::polar(r, 2 * pi * k / 8));
  // Closed form identity.
  const auto k = bergman::ClosedFormKernel::unit_disk();
  for (const Complex z : probes) {
    const double lam = bergman::disk_density(z);
    CHECK(std::abs(4 * pi * k.eval(z) - lam * lam) <= 1e-14 * lam * lam);
  }
  std::vector<Complex> inner;
  for (const Complex z : probes)
    if (std::abs(z) <= 0.6) inner.push_back(z);
  CHECK(bergman::verify_metric_identity(inner, 30) <= 1e-6);
}

TEST_CASE("taylor maps") {
  CHECK_THROWS_AS(TaylorMap({}), bergman::Error);
  const TaylorMap hp = TaylorMap::half_plane();
  const TaylorMap kb = TaylorMap::koebe();
  CHECK(hp.truncation() == 400);
  for (const Complex z : {Complex(0.3, 0.2), Complex(-0.5, 0.1)}) {
    CHECK(std::abs(hp.value(z) - z / (1.0 - z)) < 1e-13);
    CHECK(std::abs(kb.value(z) - z / ((1.0 - z) * (1.0 - z))) < 1e-13);
    const double h = 1e-5;
    const Complex fd = (kb.value(z + h) - kb.value(z - h)) / (2 * h);
    CHECK(std::abs(fd - kb.derivative(z)) <= 1e-8 * std::abs(kb.derivative(z)));
    const Complex fd2 = (kb.derivative(z + h) - kb.derivative(z - h)) / (2 * h);
    CHECK(std::abs(fd2 - kb.second_derivative(z)) <= 1e-8 * std::abs(kb.second_derivative(z)));
  }
  // Density of the half plane {Re w > -1/2} at f(zeta) is 1 / (Re w + 1/2).
  const Complex zeta{0.2, -0.3};
  const Complex w = hp.value(zeta);
  CHECK(bergman::pushforward_density(hp, zeta) == doctest::Approx(1.0 / (w.real() + 0.5)).epsilon(1e-10));
}

TEST_CASE("univalence scans") {
  const double radii[] = {0.5, 0.9};
  const TaylorMap id({0.0, 1.0});
  const auto s_id = bergman::univalence_criterion_scan(id, radii, 32);
  CHECK(s_id.min_value == 0.0);
  CHECK(s_id.satisfied());
  CHECK(s_id.samples.size() == 64);

  // Re(z f''/f') = Re(2z / (1 - z)) > -1 for the half plane map.
  const auto s_hp = bergman::univalence_criterion_scan(TaylorMap::half_plane(), radii, 64);
  CHECK(s_hp.satisfied());
  CHECK(s_hp.min_value == doctest::Approx(-1.8 / 1.9).epsilon(1e-10));

  const double r9[] = {0.9};
  const auto s_kb = bergman::univalence_criterion_scan(TaylorMap::koebe(), r9, 64);
  CHECK_FALSE(s_kb.satisfied());
  CHECK(std::abs(s_kb.witness - Complex(-0.9)) < 1e-12);
  // z f''/f' + 1 = (1 + 4z + z^2) / (1 - z^2) for the Koebe map; at z = -0.9 that is -10.4211.
  // The series alternate at z = -0.9; cancellation costs about 1e-10.
  CHECK(s_kb.min_value == doctest::Approx((1 - 3.6 + 0.81) / (1 - 0.81) - 1).epsilon(1e-8));

  const double bad[] = {1.0};
  CHECK_THROWS_AS(bergman::univalence_criterion_scan(id, bad, 4), bergman::Error);
  try {
    const TaylorMap flat({0.0, 0.0, 1.0});
    const double r[] = {0.0};
    (void)bergman::univalence_criterion_scan(flat, r, 4);
    FAIL("expected an error");
  } catch (const bergman::Error& e) {
    CHECK(e.kind() == bergman::ErrorKind::DerivativeVanishes);
  }
}

TEST_CASE("image curve convexity agrees with the scan") {
  const double r9[] = {0.9};
  for (const TaylorMap& f : {TaylorMap({0.0, 1.0}), TaylorMap::half_plane(), TaylorMap::koebe(),
                             TaylorMap({0.0, 1.0, 0.4})}) {
    const auto scan = bergman::univalence_criterion_scan(f, r9, 256);
    const auto curve = bergman::image_curve(f, 0.9, 256);
    CHECK(curve.size() == 256);
    CHECK(bergman::image_curve_convex(curve, 1e-9) == scan.satisfied());
  }
}
