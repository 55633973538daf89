#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bergman/convexity.hpp"
#include "bergman/domain.hpp"
#include "bergman/kernel.hpp"
#include "bergman/weight.hpp"

namespace bergman {

/// Fibration {(z, t) : z + z_t in base} with z_t = (1 - t) z0 + t z1 and
/// fibre weight phi(z + z_t). The slice at t is the base translated by -z_t,
/// so slice kernels at 0 trace K along the complexified segment z0 -> z1.
struct OkaFamily {
  ConvexDomain base;
  Weight weight;
  Complex z0;
  Complex z1;
};

/// {(z, t) : |z| + |t| < radius}: slices are disk(0, radius - |t|) with zero
/// weight.
struct NormBallFamily {
  double radius = 1.0;
};

struct SliceData {
  Complex t;
  ConvexDomain domain;
  Weight weight;
};

struct SweepSample {
  Complex t;
  double kernel = 0.0;  // K_t(0)
  double log_kernel = 0.0;
  double gram_stability = 0.0;
  std::optional<std::string> error;
};

struct SliceIdentityCheck {
  Complex t;
  double slice_value = 0.0;  // K_{slice}(0)
  double base_value = 0.0;   // K_{base}(z_t)
  double relative_error = 0.0;
  /// max(floor, 3 * max gram stability of the two builds).
  double bound = 0.0;
  double gram_stability = 0.0;
};

class FiberedFamily {
 public:
  using Variant = std::variant<OkaFamily, NormBallFamily>;

  static FiberedFamily oka(ConvexDomain base, Weight weight, Complex z0, Complex z1);
  static FiberedFamily norm_ball(double radius);

  const Variant& value() const { return value_; }
  bool is_oka() const { return std::holds_alternative<OkaFamily>(value_); }

  /// z_t for the Oka variant.
  Complex path_point(Complex t) const;

  /// Oka: z_t in the base; norm ball: |t| < radius.
  bool base_locus_contains(Complex t, double margin = 0.0) const;

  /// Throws Error(OutsideBaseLocus) when t is not in the base locus.
  SliceData slice(Complex t) const;

  /// Whether (z, t) lies in the total space, keeping `margin` from the fibre
  /// boundary.
  bool total_space_contains(Complex z, Complex t, double margin = 0.0) const;

  /// Bounding box of the base locus (Oka: clipped to a box around [0, 1]).
  BoundingBox base_locus_bounds() const;

 private:
  explicit FiberedFamily(Variant v) : value_(std::move(v)) {}
  Variant value_;
};

/// log K of the unit disk kernel scaled to radius r: the closed form of the
/// norm-ball fibres, log K = -log pi - 2 log(r^2 - |z|^2) + 2 log r.
double norm_ball_log_kernel(double radius, Complex z, Complex t);

/// Per-slice build and K_t(0). Build failures are recorded per sample.
/// Slices are independent and are built concurrently.
std::vector<SweepSample> kernel_sweep(const FiberedFamily& family,
                                      std::span<const Complex> t_samples, int degree,
                                      const KernelBuildOptions& options = {});

/// |K_{slice t}(0) - K_{base}(z_t)| / K_{base}(z_t) for the Oka variant.
SliceIdentityCheck verify_slice_identity(const FiberedFamily& family, Complex t, int degree,
                                         const KernelBuildOptions& options = {},
                                         double floor = 1e-6);

struct FamilyProbeOptions {
  int segments = 100;
  int samples = 33;
  std::uint64_t seed = 0;
  double tol_floor = 1e-5;
};

/// Convexity of t -> log K_t(0) over random segments of `t_region`, which
/// must lie in the base locus.
ConvexityReport verify_log_kernel_convexity(const FiberedFamily& family, const ConvexDomain& t_region,
                                 int degree, const FamilyProbeOptions& probe,
                                 const KernelBuildOptions& options = {});

/// Thread-safe cache of slice kernels keyed by a t-grid cell.
class SliceCache {
 public:
  using Key = std::pair<int, int>;

  std::shared_ptr<const KernelApprox> find(const Key& key) const;
  /// Last writer wins; values for a key are deterministic so races are benign.
  void insert(const Key& key, std::shared_ptr<const KernelApprox> value);
  std::size_t size() const;

 private:
  mutable std::shared_mutex mutex_;
  std::map<Key, std::shared_ptr<const KernelApprox>> entries_;
};

struct JointProbeOptions {
  int segments = 100;
  int samples = 9;
  std::uint64_t seed = 0;
  double tol_floor = 1e-5;
  /// t is restricted to a grid_size x grid_size lattice over the base locus
  /// bounding box; segment t-samples land exactly on lattice points so every
  /// slice kernel is shared through the cache.
  int grid_size = 64;
  /// Largest t-step of a segment, in lattice cells per axis.
  int max_cell_step = 2;
  /// Fraction of the fibre diameter kept clear of the fibre boundary.
  double margin_fraction = 0.05;
};

struct JointProbeResult {
  ConvexityReport report;
  /// Closed-form cross-check (norm-ball only): same segments evaluated with
  /// norm_ball_log_kernel.
  std::optional<ConvexityReport> oracle_report;
  /// Largest |numerical - closed form| of log K over all samples.
  std::optional<double> oracle_max_deviation;
  std::size_t slices_built = 0;
};

/// Second-difference scan of (z, t) -> log K_{slice t}(z) along random
/// segments of the total space (a 4-real-dimensional domain).
JointProbeResult verify_joint_convexity(const FiberedFamily& family, int degree,
                                        const JointProbeOptions& probe,
                                        const KernelBuildOptions& options = {});

}  // namespace bergman
