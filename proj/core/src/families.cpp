#include "bergman/families.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

#include "bergman/error.hpp"
#include "bergman/random.hpp"
#include "parallel.hpp"

namespace bergman {
namespace {

constexpr int kMaxRejections = 100000;

std::string describe_t(Complex t) {
  std::ostringstream os;
  os << "(" << t.real() << ", " << t.imag() << ")";
  return os.str();
}

}  // namespace

FiberedFamily FiberedFamily::oka(ConvexDomain base, Weight weight, Complex z0, Complex z1) {
  if (!base.contains(z0) || !base.contains(z1))
    throw Error(ErrorKind::InvalidArgument, "oka family needs z0 and z1 inside the base domain");
  return FiberedFamily(OkaFamily{std::move(base), std::move(weight), z0, z1});
}

FiberedFamily FiberedFamily::norm_ball(double radius) {
  if (!(radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "norm ball radius must be > 0");
  return FiberedFamily(NormBallFamily{radius});
}

Complex FiberedFamily::path_point(Complex t) const {
  const auto* oka = std::get_if<OkaFamily>(&value_);
  if (!oka) return {0.0, 0.0};
  return (1.0 - t) * oka->z0 + t * oka->z1;
}

bool FiberedFamily::base_locus_contains(Complex t, double margin) const {
  if (const auto* oka = std::get_if<OkaFamily>(&value_))
    return oka->base.signed_distance(path_point(t)) > margin;
  return std::abs(t) < std::get<NormBallFamily>(value_).radius - margin;
}

SliceData FiberedFamily::slice(Complex t) const {
  if (!base_locus_contains(t))
    throw Error(ErrorKind::OutsideBaseLocus, "t = " + describe_t(t) + " is outside the base locus");
  if (const auto* oka = std::get_if<OkaFamily>(&value_)) {
    const Complex zt = path_point(t);
    return {t, oka->base.affine_image(1.0, -zt), oka->weight.translated(zt)};
  }
  const double r = std::get<NormBallFamily>(value_).radius - std::abs(t);
  return {t, ConvexDomain::disk(0.0, r), Weight::zero()};
}

bool FiberedFamily::total_space_contains(Complex z, Complex t, double margin) const {
  if (!base_locus_contains(t)) return false;
  if (const auto* oka = std::get_if<OkaFamily>(&value_))
    return oka->base.signed_distance(z + path_point(t)) >= margin;
  const double r = std::get<NormBallFamily>(value_).radius - std::abs(t);
  return r - std::abs(z) >= margin;
}

BoundingBox FiberedFamily::base_locus_bounds() const {
  if (const auto* ball = std::get_if<NormBallFamily>(&value_))
    return {-ball->radius, ball->radius, -ball->radius, ball->radius};
  const auto& oka = std::get<OkaFamily>(value_);
  const Complex dir = oka.z1 - oka.z0;
  if (std::abs(dir) == 0.0) return {-1.0, 2.0, -1.5, 1.5};
  const BoundingBox b = oka.base.bounds();
  BoundingBox out{1e300, -1e300, 1e300, -1e300};
  for (Complex corner : {Complex(b.x_min, b.y_min), Complex(b.x_max, b.y_min),
                         Complex(b.x_min, b.y_max), Complex(b.x_max, b.y_max)}) {
    const Complex t = (corner - oka.z0) / dir;
    out.x_min = std::min(out.x_min, t.real());
    out.x_max = std::max(out.x_max, t.real());
    out.y_min = std::min(out.y_min, t.imag());
    out.y_max = std::max(out.y_max, t.imag());
  }
  return out;
}

double norm_ball_log_kernel(double radius, Complex z, Complex t) {
  const double r = radius - std::abs(t);
  return -std::log(std::numbers::pi) - 2.0 * std::log(r * r - std::norm(z)) + 2.0 * std::log(r);
}

std::vector<SweepSample> kernel_sweep(const FiberedFamily& family,
                                      std::span<const Complex> t_samples, int degree,
                                      const KernelBuildOptions& options) {
  for (const Complex& t : t_samples)
    if (!family.base_locus_contains(t))
      throw Error(ErrorKind::OutsideBaseLocus, "sweep sample " + describe_t(t) +
                                                   " is outside the base locus");
  std::vector<SweepSample> out(t_samples.size());
  detail::parallel_for(t_samples.size(), [&](std::size_t i) {
    SweepSample& s = out[i];
    s.t = t_samples[i];
    try {
      const SliceData slice = family.slice(s.t);
      const KernelApprox k = KernelApprox::build(slice.domain, slice.weight, degree, options);
      s.kernel = k.eval(0.0);
      s.log_kernel = std::log(s.kernel);
      s.gram_stability = k.gram_stability();
    } catch (const Error& e) {
      s.error = e.what();
    }
  });
  return out;
}

SliceIdentityCheck verify_slice_identity(const FiberedFamily& family, Complex t, int degree,
                                         const KernelBuildOptions& options, double floor) {
  const auto* oka = std::get_if<OkaFamily>(&family.value());
  if (!oka) throw Error(ErrorKind::InvalidArgument, "slice identity needs an oka family");
  const SliceData slice = family.slice(t);
  const KernelApprox slice_kernel = KernelApprox::build(slice.domain, slice.weight, degree, options);
  const KernelApprox base_kernel = KernelApprox::build(oka->base, oka->weight, degree, options);

  SliceIdentityCheck out;
  out.t = t;
  out.slice_value = slice_kernel.eval(0.0);
  out.base_value = base_kernel.eval(family.path_point(t));
  out.relative_error = std::abs(out.slice_value - out.base_value) / out.base_value;
  out.gram_stability = std::max(slice_kernel.gram_stability(), base_kernel.gram_stability());
  out.bound = std::max(floor, 3.0 * out.gram_stability);
  return out;
}

ConvexityReport verify_log_kernel_convexity(const FiberedFamily& family, const ConvexDomain& t_region,
                                 int degree, const FamilyProbeOptions& probe,
                                 const KernelBuildOptions& options) {
  Rng rng(probe.seed);
  std::vector<Segment> segments;
  for (int i = 0; i < probe.segments; ++i) {
    Segment seg = random_segment(t_region, probe.samples, 0.0, rng);
    for (const Complex& t : seg.samples())
      if (!family.base_locus_contains(t))
        throw Error(ErrorKind::OutsideBaseLocus,
                    "probe region leaves the base locus at t = " + describe_t(t));
    segments.push_back(seg);
  }

  // Build every distinct slice once, concurrently.
  std::vector<Complex> ts;
  for (const Segment& s : segments)
    for (const Complex& t : s.samples()) ts.push_back(t);
  const std::vector<SweepSample> sweep = kernel_sweep(family, ts, degree, options);

  double worst_stability = 0.0;
  std::map<std::pair<double, double>, const SweepSample*> by_t;
  for (const SweepSample& s : sweep) {
    by_t[{s.t.real(), s.t.imag()}] = &s;
    if (!s.error) worst_stability = std::max(worst_stability, s.gram_stability);
  }
  auto log_kernel = [&](Complex t) {
    const SweepSample* s = by_t.at({t.real(), t.imag()});
    if (s->error) throw Error(ErrorKind::InsufficientProbes, *s->error);
    return s->log_kernel;
  };
  ConvexityReport report =
      check_convex_on_segments(log_kernel, segments, Tolerance{probe.tol_floor, worst_stability});
  report.method = "second differences of t -> log K_t(0)";
  return report;
}

// ---------------------------------------------------------------------------

std::shared_ptr<const KernelApprox> SliceCache::find(const Key& key) const {
  std::shared_lock lock(mutex_);
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : it->second;
}

void SliceCache::insert(const Key& key, std::shared_ptr<const KernelApprox> value) {
  std::unique_lock lock(mutex_);
  entries_[key] = std::move(value);
}

std::size_t SliceCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

JointProbeResult verify_joint_convexity(const FiberedFamily& family, int degree,
                                        const JointProbeOptions& probe,
                                        const KernelBuildOptions& options) {
  if (probe.grid_size < 2 || probe.samples < 3 || probe.segments < 1)
    throw Error(ErrorKind::InvalidArgument, "joint probe needs grid >= 2, samples >= 3");
  const BoundingBox box = family.base_locus_bounds();
  const int g = probe.grid_size;
  const double gx = box.width() / (g - 1);
  const double gy = box.height() / (g - 1);
  auto lattice = [&](int i, int j) { return Complex(box.x_min + i * gx, box.y_min + j * gy); };

  const double fraction = std::max(probe.margin_fraction, kDefaultBoundaryFraction);
  auto fibre_margin = [&](Complex t) {
    const double m = 1.01 * fraction * family.slice(t).domain.diameter();
    return options.boundary_offset ? std::max(m, 1.01 * *options.boundary_offset) : m;
  };

  struct JointSegment {
    int i0, j0, di, dj;
    Complex z_start, z_end;
  };
  Rng rng(probe.seed);
  std::vector<JointSegment> segments;
  const int m = probe.samples;
  for (int s = 0; s < probe.segments; ++s) {
    bool found = false;
    for (int attempt = 0; attempt < kMaxRejections && !found; ++attempt) {
      JointSegment js{};
      js.i0 = static_cast<int>(rng.below(static_cast<std::uint64_t>(g)));
      js.j0 = static_cast<int>(rng.below(static_cast<std::uint64_t>(g)));
      const auto span = static_cast<std::uint64_t>(2 * probe.max_cell_step + 1);
      js.di = static_cast<int>(rng.below(span)) - probe.max_cell_step;
      js.dj = static_cast<int>(rng.below(span)) - probe.max_cell_step;
      const int i1 = js.i0 + (m - 1) * js.di;
      const int j1 = js.j0 + (m - 1) * js.dj;
      if (i1 < 0 || i1 >= g || j1 < 0 || j1 >= g) continue;
      const Complex t0 = lattice(js.i0, js.j0);
      const Complex t1 = lattice(i1, j1);
      if (!family.base_locus_contains(t0) || !family.base_locus_contains(t1)) continue;
      const double m0 = fibre_margin(t0);
      const double m1 = fibre_margin(t1);
      const BoundingBox b0 = family.slice(t0).domain.bounds();
      const BoundingBox b1 = family.slice(t1).domain.bounds();
      js.z_start = {rng.uniform(b0.x_min, b0.x_max), rng.uniform(b0.y_min, b0.y_max)};
      js.z_end = {rng.uniform(b1.x_min, b1.x_max), rng.uniform(b1.y_min, b1.y_max)};
      if (!family.total_space_contains(js.z_start, t0, m0) ||
          !family.total_space_contains(js.z_end, t1, m1))
        continue;
      bool ok = true;
      for (int k = 0; k < m && ok; ++k) {
        const double u = static_cast<double>(k) / (m - 1);
        const Complex t = lattice(js.i0 + k * js.di, js.j0 + k * js.dj);
        const Complex z = js.z_start + u * (js.z_end - js.z_start);
        ok = family.base_locus_contains(t) && family.total_space_contains(z, t, fibre_margin(t));
      }
      if (!ok) continue;
      segments.push_back(js);
      found = true;
    }
    if (!found) throw Error(ErrorKind::InsufficientProbes, "no admissible joint segment found");
  }

  // Distinct lattice cells, built concurrently into the shared cache.
  SliceCache cache;
  std::vector<SliceCache::Key> keys;
  for (const JointSegment& js : segments)
    for (int k = 0; k < m; ++k) keys.emplace_back(js.i0 + k * js.di, js.j0 + k * js.dj);
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  detail::parallel_for(keys.size(), [&](std::size_t idx) {
    const auto& key = keys[idx];
    if (cache.find(key)) return;
    const SliceData slice = family.slice(lattice(key.first, key.second));
    cache.insert(key, std::make_shared<const KernelApprox>(
                          KernelApprox::build(slice.domain, slice.weight, degree, options)));
  });

  double worst_stability = 0.0;
  for (const auto& key : keys) worst_stability = std::max(worst_stability, cache.find(key)->gram_stability());

  const auto* ball = std::get_if<NormBallFamily>(&family.value());
  JointProbeResult result;
  result.slices_built = cache.size();

  auto scan = [&](auto&& value_at) {
    ConvexityReport report;
    report.samples_per_segment = m;
    report.method = "second differences of (z, t) -> log K_t(z)";
    double scale = 0.0;
    std::vector<double> values(static_cast<std::size_t>(m));
    for (const JointSegment& js : segments) {
      for (int k = 0; k < m; ++k) {
        const double u = static_cast<double>(k) / (m - 1);
        const Complex z = k + 1 == m ? js.z_end : js.z_start + u * (js.z_end - js.z_start);
        values[static_cast<std::size_t>(k)] = value_at(js.i0 + k * js.di, js.j0 + k * js.dj, z);
        scale = std::max(scale, std::abs(values[static_cast<std::size_t>(k)]));
      }
      const SlackScan s = second_difference_scan(values);
      ++report.probed_segments;
      report.segment_min_slacks.push_back(s.min_slack);
      if (s.min_slack < report.min_slack) {
        report.min_slack = s.min_slack;
        report.witness = SegmentWitness{Segment{js.z_start, js.z_end, m}, s.argmin};
      }
    }
    report.tol = Tolerance{probe.tol_floor, worst_stability}.absolute(scale);
    report.verdict = report.min_slack < -report.tol ? Verdict::Violation : Verdict::ConvexWithinTol;
    return report;
  };

  double deviation = 0.0;
  result.report = scan([&](int i, int j, Complex z) {
    const double v = std::log(cache.find({i, j})->eval(z));
    if (ball) deviation = std::max(deviation, std::abs(v - norm_ball_log_kernel(ball->radius, z, lattice(i, j))));
    return v;
  });
  if (ball) {
    result.oracle_report = scan([&](int i, int j, Complex z) {
      return norm_ball_log_kernel(ball->radius, z, lattice(i, j));
    });
    result.oracle_report->method = "closed-form norm-ball kernel on the same segments";
    result.oracle_max_deviation = deviation;
  }
  return result;
}

}  // namespace bergman
