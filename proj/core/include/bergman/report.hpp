#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bergman/domain.hpp"

namespace bergman {

enum class Verdict { ConvexWithinTol, Violation };

const char* to_string(Verdict v) noexcept;

/// Where the most negative second difference was seen: the probe segment and
/// the interior sample index of the stencil centre.
struct SegmentWitness {
  Segment segment;
  int index = 0;
};

/// Point and slice parameter of the worst slice Laplacian.
struct SliceWitness {
  Complex lambda;
  Complex s;  // slice coordinate
  Complex t;  // image point t_lambda(s)
};

struct ConvexityReport {
  int probed_segments = 0;
  int samples_per_segment = 0;
  int skipped_segments = 0;
  double min_slack = std::numeric_limits<double>::infinity();
  std::optional<SegmentWitness> witness;
  std::optional<SliceWitness> slice_witness;
  double tol = 0.0;
  Verdict verdict = Verdict::ConvexWithinTol;
  /// How the verdict was reached, e.g. "second differences" or
  /// "slice subharmonicity, lambda grid of size 65".
  std::string method = "second differences";
  /// Set when a violation cannot be read as a refutation (non-smooth input
  /// probed through slices).
  bool evidence_only = false;
  /// Per-segment (or per-slice) minima, in probe order.
  std::vector<double> segment_min_slacks;
};

struct SubharmonicityReport {
  double grid_spacing = 0.0;
  int grid_points = 0;
  double min_laplacian = std::numeric_limits<double>::infinity();
  std::optional<Complex> witness;
  double tol = 0.0;
  Verdict verdict = Verdict::ConvexWithinTol;
};

}  // namespace bergman
