#include "bergman/convexity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "bergman/error.hpp"

namespace bergman {
namespace {

constexpr int kMaxRejections = 100000;

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

}  // namespace

const char* to_string(Verdict v) noexcept {
  return v == Verdict::ConvexWithinTol ? "convex-within-tol" : "violation";
}

double Tolerance::absolute(double scale) const {
  return std::max(floor, 3.0 * source_error) * (1.0 + scale);
}

SlackScan second_difference_scan(std::span<const double> values) {
  if (values.size() < 3)
    throw Error(ErrorKind::InvalidArgument, "second difference scan needs >= 3 values");
  SlackScan out{std::numeric_limits<double>::infinity(), 1};
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    const double slack = values[i - 1] + values[i + 1] - 2.0 * values[i];
    if (slack < out.min_slack) out = {slack, static_cast<int>(i)};
  }
  return out;
}

Complex random_interior_point(const Region& region, double margin, Rng& rng) {
  const BoundingBox box = region.bounds();
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    const Complex z(rng.uniform(box.x_min, box.x_max), rng.uniform(box.y_min, box.y_max));
    if (region.signed_distance(z) >= margin) return z;
  }
  throw Error(ErrorKind::InsufficientProbes, "no interior point found with the requested margin");
}

Segment random_segment(const Region& region, int samples, double margin, Rng& rng) {
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    Segment seg{random_interior_point(region, margin, rng),
                random_interior_point(region, margin, rng), samples};
    // Endpoints suffice for convex regions only; check every sample anyway.
    bool ok = true;
    for (const Complex& z : seg.samples()) {
      if (region.signed_distance(z) < margin) {
        ok = false;
        break;
      }
    }
    if (ok) return seg;
  }
  throw Error(ErrorKind::InsufficientProbes, "no admissible probe segment found");
}

ConvexityReport check_convex_on_segments(const RealFunction& f, std::span<const Segment> segments,
                                         const Tolerance& tol, bool pairwise_midpoint) {
  ConvexityReport report;
  report.samples_per_segment = segments.empty() ? 0 : segments.front().sample_count;
  if (pairwise_midpoint) report.method = "pairwise midpoint";
  double scale = 0.0;
  std::vector<double> values;
  for (const Segment& seg : segments) {
    const auto points = seg.samples();
    values.resize(points.size());
    try {
      for (std::size_t i = 0; i < points.size(); ++i) values[i] = f(points[i]);
    } catch (const Error&) {
      ++report.skipped_segments;
      continue;
    }
    for (double v : values) scale = std::max(scale, std::abs(v));

    SlackScan scan{std::numeric_limits<double>::infinity(), 1};
    if (pairwise_midpoint) {
      for (std::size_t i = 0; i < values.size(); ++i) {
        for (std::size_t k = i + 2; k < values.size(); k += 2) {
          const std::size_t mid = (i + k) / 2;
          const double slack = values[i] + values[k] - 2.0 * values[mid];
          if (slack < scan.min_slack) scan = {slack, static_cast<int>(mid)};
        }
      }
    } else {
      scan = second_difference_scan(values);
    }
    ++report.probed_segments;
    report.segment_min_slacks.push_back(scan.min_slack);
    if (scan.min_slack < report.min_slack) {
      report.min_slack = scan.min_slack;
      report.witness = SegmentWitness{seg, scan.argmin};
    }
  }
  if (report.skipped_segments * 2 > static_cast<int>(segments.size())) {
    std::ostringstream os;
    os << "insufficient probes: " << report.skipped_segments << " of " << segments.size()
       << " segments failed to evaluate";
    throw Error(ErrorKind::InsufficientProbes, os.str());
  }
  report.tol = tol.absolute(scale);
  report.verdict = report.min_slack < -report.tol ? Verdict::Violation : Verdict::ConvexWithinTol;
  return report;
}

ConvexityReport check_convex(const RealFunction& f, const Region& region,
                             const ConvexProbeOptions& options) {
  if (options.segments < 1) throw Error(ErrorKind::InvalidArgument, "segments must be >= 1");
  if (options.samples < 3) throw Error(ErrorKind::InvalidArgument, "samples must be >= 3");
  Rng rng(options.seed);
  std::vector<Segment> segments;
  segments.reserve(static_cast<std::size_t>(options.segments));
  for (int i = 0; i < options.segments; ++i)
    segments.push_back(random_segment(region, options.samples, options.margin, rng));
  return check_convex_on_segments(f, segments, options.tol, options.pairwise_midpoint);
}

// ---------------------------------------------------------------------------

SliceMap::SliceMap(Complex lambda) : lambda_(lambda), lambda2_(lambda * lambda) {
  if (!(std::abs(lambda) < 1.0))
    throw Error(ErrorKind::InvalidArgument, "slice map requires |lambda| < 1");
}

double hessian_form_lemma(const ComplexHessian& h, Complex lambda) {
  const Complex l2 = lambda * lambda;
  return (1.0 + std::norm(l2)) * h.phi_ttbar + 2.0 * (l2 * h.phi_tt).real();
}

double real_hessian_form(const ComplexHessian& h, Complex eta) {
  return h.phi_ttbar * std::norm(eta) + (h.phi_tt * eta * eta).real();
}

SubharmonicityReport check_subharmonic(const RealFunction& f, const Region& region,
                                       double spacing, double tol, double margin) {
  if (!(spacing > 0.0)) throw Error(ErrorKind::InvalidArgument, "spacing must be positive");
  const BoundingBox box = region.bounds();
  const int nx = static_cast<int>(std::floor(box.width() / spacing)) + 1;
  const int ny = static_cast<int>(std::floor(box.height() / spacing)) + 1;

  Grid2D grid{box.x_min, box.y_min, spacing, nx, ny,
              std::vector<double>(static_cast<std::size_t>(nx) * ny, nan())};
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      if (region.signed_distance(grid.point(i, j)) >= margin) grid.at(i, j) = f(grid.point(i, j));

  SubharmonicityReport report;
  report.grid_spacing = spacing;
  report.tol = tol;
  for (int j = 1; j + 1 < ny; ++j) {
    for (int i = 1; i + 1 < nx; ++i) {
      const double c = grid.at(i, j);
      const double sum = grid.at(i + 1, j) + grid.at(i - 1, j) + grid.at(i, j + 1) +
                         grid.at(i, j - 1);
      if (std::isnan(c) || std::isnan(sum)) continue;
      ++report.grid_points;
      const double lap = (sum - 4.0 * c) / (spacing * spacing);
      if (lap < report.min_laplacian) {
        report.min_laplacian = lap;
        report.witness = grid.point(i, j);
      }
    }
  }
  if (report.grid_points == 0)
    throw Error(ErrorKind::EmptyGrid, "no interior grid point has its stencil inside the region");
  report.verdict = report.min_laplacian < -tol ? Verdict::Violation : Verdict::ConvexWithinTol;
  return report;
}

std::vector<Complex> default_lambda_grid() {
  std::vector<Complex> grid{Complex(0.0, 0.0)};
  for (double r : {0.3, 0.6, 0.9, 0.99})
    for (int k = 0; k < 16; ++k) grid.push_back(std::polar(r, 2.0 * std::numbers::pi * k / 16));
  return grid;
}

ConvexityReport certify_convex_via_slices(const RealFunction& f, const ConvexDomain& domain,
                                          const SliceCertifyOptions& options) {
  const double h = options.spacing;
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "spacing must be positive");
  if (options.lambda_grid.empty()) throw Error(ErrorKind::InvalidArgument, "empty lambda grid");

  const BoundingBox box = domain.bounds();
  ConvexityReport report;
  double scale = 0.0;
  struct Worst {
    double lap;
    SliceWitness at;
  };
  std::optional<Worst> worst;

  for (const Complex& lambda : options.lambda_grid) {
    const SliceMap map(lambda);
    // t = s + l2 conj(s) is real-linear: t.x = x (1 + l2.re) + y l2.im,
    // t.y = x l2.im + y (1 - l2.re).
    const Complex l2 = lambda * lambda;
    const double a11 = 1.0 + l2.real(), a12 = l2.imag();
    const double a21 = l2.imag(), a22 = 1.0 - l2.real();

    double s_ymin = std::numeric_limits<double>::infinity();
    double s_ymax = -s_ymin, s_xmin = s_ymin, s_xmax = -s_ymin;
    for (Complex corner : {Complex(box.x_min, box.y_min), Complex(box.x_max, box.y_min),
                           Complex(box.x_min, box.y_max), Complex(box.x_max, box.y_max)}) {
      const Complex s = map.inverse(corner);
      s_xmin = std::min(s_xmin, s.real());
      s_xmax = std::max(s_xmax, s.real());
      s_ymin = std::min(s_ymin, s.imag());
      s_ymax = std::max(s_ymax, s.imag());
    }
    const int ny = static_cast<int>(std::floor((s_ymax - s_ymin) / h)) + 1;
    const int nx = static_cast<int>(std::floor((s_xmax - s_xmin) / h)) + 1;

    // Per row, only the x-range whose image lands in the bounding box is
    // visited; the rest of the sheared rectangle is empty.
    auto row_range = [&](double y) {
      double lo = s_xmin, hi = s_xmax;
      auto restrict = [&](double coef, double offset, double tmin, double tmax) {
        if (std::abs(coef) < 1e-300) {
          if (offset < tmin || offset > tmax) hi = lo - 1.0;
          return;
        }
        double u = (tmin - offset) / coef, v = (tmax - offset) / coef;
        if (u > v) std::swap(u, v);
        lo = std::max(lo, u);
        hi = std::min(hi, v);
      };
      restrict(a11, a12 * y, box.x_min, box.x_max);
      restrict(a21, a22 * y, box.y_min, box.y_max);
      return std::pair{lo, hi};
    };

    std::vector<double> values;
    double slice_min = std::numeric_limits<double>::infinity();
    int points = 0;
    // Rows j-1, j, j+1 are kept in a rolling window keyed by x-index.
    auto sample_row = [&](int j) {
      std::vector<double> row(static_cast<std::size_t>(nx), nan());
      if (j < 0 || j >= ny) return row;
      const double y = s_ymin + j * h;
      auto [lo, hi] = row_range(y);
      if (hi < lo) return row;
      const int i0 = std::max(0, static_cast<int>(std::floor((lo - s_xmin) / h)));
      const int i1 = std::min(nx - 1, static_cast<int>(std::ceil((hi - s_xmin) / h)));
      for (int i = i0; i <= i1; ++i) {
        const Complex t = map.forward(Complex(s_xmin + i * h, y));
        if (domain.signed_distance(t) >= options.margin) {
          const double v = f(t);
          row[static_cast<std::size_t>(i)] = v;
          scale = std::max(scale, std::abs(v));
        }
      }
      return row;
    };
    std::vector<double> below = sample_row(-1);
    std::vector<double> here = sample_row(0);
    for (int j = 0; j < ny; ++j) {
      std::vector<double> above = sample_row(j + 1);
      for (int i = 1; i + 1 < nx; ++i) {
        const auto k = static_cast<std::size_t>(i);
        const double c = here[k];
        const double sum = here[k - 1] + here[k + 1] + below[k] + above[k];
        if (std::isnan(c) || std::isnan(sum)) continue;
        ++points;
        const double lap = (sum - 4.0 * c) / (h * h);
        if (lap < slice_min) {
          slice_min = lap;
          const Complex s(s_xmin + i * h, s_ymin + j * h);
          if (!worst || lap < worst->lap) worst = Worst{lap, {lambda, s, map.forward(s)}};
        }
      }
      below = std::move(here);
      here = std::move(above);
    }
    ++report.probed_segments;
    report.samples_per_segment = std::max(report.samples_per_segment, points);
    report.segment_min_slacks.push_back(slice_min);
    report.min_slack = std::min(report.min_slack, slice_min);
  }

  if (report.samples_per_segment == 0)
    throw Error(ErrorKind::EmptyGrid, "no slice grid point has its stencil inside the domain");
  report.tol = options.tol.absolute(scale) / (h * h);
  if (worst) report.slice_witness = worst->at;
  report.verdict = report.min_slack < -report.tol ? Verdict::Violation : Verdict::ConvexWithinTol;
  report.evidence_only = !options.smooth_input && report.verdict == Verdict::Violation;
  std::ostringstream os;
  os << "slice subharmonicity, lambda grid of size " << options.lambda_grid.size();
  report.method = os.str();
  return report;
}

// ---------------------------------------------------------------------------

Grid2D sample_grid(const RealFunction& f, const BoundingBox& box, double spacing) {
  if (!(spacing > 0.0)) throw Error(ErrorKind::InvalidArgument, "spacing must be positive");
  Grid2D g;
  g.x0 = box.x_min;
  g.y0 = box.y_min;
  g.spacing = spacing;
  g.nx = static_cast<int>(std::floor(box.width() / spacing)) + 1;
  g.ny = static_cast<int>(std::floor(box.height() / spacing)) + 1;
  g.values.resize(static_cast<std::size_t>(g.nx) * g.ny);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) g.at(i, j) = f(g.point(i, j));
  return g;
}

Grid2D mollify(const Grid2D& grid, double radius) {
  const double h = grid.spacing;
  if (!(radius >= h)) throw Error(ErrorKind::InvalidArgument, "mollifier radius must be >= spacing");
  // 0.3 / 0.1 is 2.9999999999999996 in floating point.
  const int m = static_cast<int>(std::floor(radius / h * (1 + 1e-12)));
  if (grid.nx <= 2 * m || grid.ny <= 2 * m)
    throw Error(ErrorKind::GridTooSmall, "grid is smaller than the mollifier support");

  const int side = 2 * m + 1;
  std::vector<double> bump(static_cast<std::size_t>(side) * side, 0.0);
  double mass = 0.0;
  for (int dj = -m; dj <= m; ++dj) {
    for (int di = -m; di <= m; ++di) {
      const double r2 = (di * di + dj * dj) * h * h / (radius * radius);
      const double w = r2 < 1.0 ? std::pow(1.0 - r2, 3) : 0.0;
      bump[static_cast<std::size_t>(dj + m) * side + (di + m)] = w;
      mass += w;
    }
  }
  for (double& w : bump) w /= mass;

  Grid2D out;
  out.spacing = h;
  out.x0 = grid.x0 + m * h;
  out.y0 = grid.y0 + m * h;
  out.nx = grid.nx - 2 * m;
  out.ny = grid.ny - 2 * m;
  out.values.assign(static_cast<std::size_t>(out.nx) * out.ny, 0.0);
  for (int j = 0; j < out.ny; ++j) {
    for (int i = 0; i < out.nx; ++i) {
      double acc = 0.0;
      for (int dj = -m; dj <= m; ++dj)
        for (int di = -m; di <= m; ++di)
          acc += bump[static_cast<std::size_t>(dj + m) * side + (di + m)] *
                 grid.at(i + m - di, j + m - dj);
      out.at(i, j) = acc;
    }
  }
  return out;
}

}  // namespace bergman
