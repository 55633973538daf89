#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bergman/classical.hpp"
#include "bergman/domain.hpp"
#include "bergman/families.hpp"
#include "bergman/report.hpp"
#include "bergman/weight.hpp"
#include "json.hpp"

namespace bergman::tools {

using Json = nlohmann::ordered_json;

/// Bumped whenever a report field is added, removed or renamed.
inline constexpr int kReportSchemaVersion = 1;

// --- config ingestion -------------------------------------------------------

/// Complex numbers are written as [re, im] or as a bare real.
Complex parse_complex(const Json& j);
Json complex_json(Complex z);

/// {"disk": {"center": [x, y], "radius": r}}
/// {"ellipse": {"center", "semi_a", "semi_b", "rotation"}}
/// {"polygon": {"vertices": [[x, y], ...]}}
/// {"rectangle": {"x": [lo, hi], "y": [lo, hi]}}
/// {"regular_polygon": {"sides", "center", "circumradius", "phase"}}
/// {"simple_polygon": {"vertices": [...]}}  (non-convex allowed)
Region parse_region(const Json& j);
ConvexDomain parse_convex_domain(const Json& j);

/// {"zero": {}}, {"quadratic": {"a", "b", "c", "linear_x", "linear_y",
/// "constant"}}, {"modsq": {"alpha", "center"}},
/// {"max_affine": {"pieces": [[gx, gy, offset], ...]}}
Weight parse_weight(const Json& j);

/// {"norm_ball": {"radius"}} or {"oka": {"base", "weight", "z0", "z1"}}
FiberedFamily parse_family(const Json& j);

/// Reads keys from an experiment config, recording the value actually used
/// (including defaults) so the echoed config is complete.
class ConfigReader {
 public:
  explicit ConfigReader(const Json& config) : source_(config), echo_(Json::object()) {}

  template <class T>
  T get(const std::string& key, const T& fallback) {
    T value = source_.contains(key) ? source_.at(key).get<T>() : fallback;
    echo_[key] = value;
    return value;
  }
  const Json& require(const std::string& key);
  Json get_json(const std::string& key, const Json& fallback);
  bool has(const std::string& key) const { return source_.contains(key); }

  const Json& echo() const { return echo_; }

 private:
  const Json& source_;
  Json echo_;
};

// --- reports ----------------------------------------------------------------

struct Assertion {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

/// Plot-ready table written as UTF-8 CSV with a header row.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Numbers are written with round-trip precision.
  void add(const std::vector<double>& row);
};

struct RunReport {
  std::string experiment;
  std::uint64_t seed = 0;
  Json config;
  Json results = Json::object();
  Json diagnostics = Json::object();
  std::vector<Assertion> assertions;
  /// Exploratory runs carry no verdict and never affect the exit code.
  bool exploratory = false;
  std::map<std::string, Table> tables;
  double wall_time_s = 0.0;

  bool passed() const;
  /// wall_time_s is omitted when include_timing is false so reruns compare
  /// bit-identically.
  Json to_json(bool include_timing = true) const;
};

Json report_json(const ConvexityReport& r, bool include_slacks = false);

void write_csv(const std::filesystem::path& path, const Table& table);
/// <experiment>.json plus one CSV per table, named <experiment>_<table>.csv,
/// with dots in the experiment name replaced by underscores.
void write_outputs(const RunReport& report, const std::filesystem::path& dir, bool csv);

// --- experiments ------------------------------------------------------------

/// Experiment kinds, e.g. "kernel.eval", "convexity.logk", "family.joint".
std::vector<std::string> experiment_kinds();

/// Shipped configuration for a kind.
Json default_config(const std::string& kind);

/// Dispatches on kind; `seed` overrides the config's seed when set.
RunReport run_experiment(const std::string& kind, const Json& config,
                         std::optional<std::uint64_t> seed = std::nullopt);

RunReport run_kernel_eval(const Json& config);
RunReport run_kernel_converge(const Json& config);
/// Convexity of log K on a convex domain with a convex weight: segment probe
/// plus slice certification.
RunReport run_log_convexity(const Json& config);
RunReport run_negative_control(const Json& config);
/// -1/sqrt K fails convexity for the Gaussian weight x^2 while log K passes.
RunReport run_counterexample(const Json& config);
/// Min slacks of -1/sqrt K; exploratory, no verdict.
RunReport run_question_explorer(const Json& config);
RunReport run_family_sweep(const Json& config);
RunReport run_family_identity(const Json& config);
RunReport run_family_log_convexity(const Json& config);
RunReport run_family_joint(const Json& config);
RunReport run_classic_hyperbolic(const Json& config);
RunReport run_classic_univalent(const Json& config);

struct SuiteEntry {
  std::string name;
  std::string kind;
  Json config;
};

/// The shipped acceptance set, in run order.
std::vector<SuiteEntry> shipped_suite();

struct SuiteResult {
  std::vector<std::pair<SuiteEntry, RunReport>> runs;
  bool passed() const;
  Table summary() const;
  Json to_json(bool include_timing = true) const;
};

SuiteResult run_suite(const std::vector<SuiteEntry>& entries,
                      std::optional<std::uint64_t> seed = std::nullopt);

}  // namespace bergman::tools
