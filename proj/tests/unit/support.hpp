#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "bergman/domain.hpp"
#include "bergman/random.hpp"

namespace testing {

using bergman::Complex;

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Integral of x^a y^b over a counterclockwise polygon by Green's theorem,
// x^{a+1} y^b / (a+1) dy around the boundary, each edge expanded exactly.
inline double polygon_moment(const std::vector<Complex>& v, int a, int b) {
  double total = 0.0;
  for (std::size_t e = 0; e < v.size(); ++e) {
    const Complex p = v[e];
    const Complex d = v[(e + 1) % v.size()] - p;
    double edge = 0.0;
    for (int i = 0; i <= a + 1; ++i)
      for (int k = 0; k <= b; ++k)
        edge += binomial(a + 1, i) * std::pow(p.real(), a + 1 - i) * std::pow(d.real(), i) *
                binomial(b, k) * std::pow(p.imag(), b - k) * std::pow(d.imag(), k) / (i + k + 1);
    total += edge * d.imag() / (a + 1);
  }
  return total;
}

// Integral of x^a y^b over the unit disk in polar form.
inline double unit_disk_moment(int a, int b) {
  if (a % 2 || b % 2) return 0.0;
  const double angular = 2.0 * std::tgamma((a + 1) / 2.0) * std::tgamma((b + 1) / 2.0) /
                         std::tgamma((a + b + 2) / 2.0);
  return angular / (a + b + 2);
}

// Random strictly convex polygon: sorted random angles on a jittered circle.
inline std::vector<Complex> random_convex_polygon(bergman::Rng& rng, int n, Complex center,
                                                  double radius) {
  std::vector<double> angles;
  for (int i = 0; i < n; ++i) angles.push_back(2.0 * std::numbers::pi * (i + 0.8 * rng.uniform()) / n);
  std::vector<Complex> v;
  for (double t : angles) v.push_back(center + std::polar(radius, t));
  return v;
}

}  // namespace testing
