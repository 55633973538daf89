#include <functional>

#include "bergman/error.hpp"
#include "bergman/tools/experiments.hpp"

namespace bergman::tools {
namespace {

using Runner = RunReport (*)(const Json&);

const std::vector<std::pair<std::string, Runner>>& runners() {
  static const std::vector<std::pair<std::string, Runner>> table{
      {"kernel.eval", run_kernel_eval},
      {"kernel.converge", run_kernel_converge},
      {"convexity.logk", run_log_convexity},
      {"convexity.control", run_negative_control},
      {"convexity.counterexample", run_counterexample},
      {"convexity.question", run_question_explorer},
      {"family.sweep", run_family_sweep},
      {"family.identity", run_family_identity},
      {"family.logk", run_family_log_convexity},
      {"family.joint", run_family_joint},
      {"classic.hyperbolic", run_classic_hyperbolic},
      {"classic.univalent", run_classic_univalent},
  };
  return table;
}

Json unit_disk() { return {{"disk", {{"center", {0, 0}}, {"radius", 1.0}}}}; }
Json square() { return {{"polygon", {{"vertices", {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}}}}}; }
Json pentagon() {
  return {{"regular_polygon", {{"sides", 5}, {"center", {0, 0}}, {"circumradius", 1.2}, {"phase", 0.0}}}};
}
Json ellipse() {
  return {{"ellipse", {{"center", {0, 0}}, {"semi_a", 2.0}, {"semi_b", 1.0}, {"rotation", 0.0}}}};
}
Json l_shape() {
  return {{"simple_polygon", {{"vertices", {{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}}}}};
}
Json zero() { return {{"zero", Json::object()}}; }
Json modsq() { return {{"modsq", {{"alpha", 1.0}, {"center", {0, 0}}}}}; }
Json x_squared() { return {{"quadratic", {{"a", 1.0}, {"b", 0.0}, {"c", 0.0}}}}; }
Json max_affine() {
  return {{"max_affine", {{"pieces", {{2.0, 0.0, -1.0}, {0.0, 0.0, 0.0}, {0.0, -1.0, -0.5}}}}}};
}
Json square_oka() {
  return {{"oka", {{"base", square()}, {"weight", modsq()}, {"z0", {-0.4, 0.0}}, {"z1", {0.4, 0.2}}}}};
}

}  // namespace

std::vector<std::string> experiment_kinds() {
  std::vector<std::string> out;
  for (const auto& [name, _] : runners()) out.push_back(name);
  return out;
}

Json default_config(const std::string& kind) {
  if (kind == "kernel.eval")
    return {{"domain", unit_disk()},
            {"weight", zero()},
            {"degree", 30},
            {"polar_grid", {{"max_radius", 0.7}, {"radii", 10}, {"angles", 10}}},
            {"oracle", "unit_disk"}};
  if (kind == "kernel.converge")
    return {{"domain", square()}, {"weight", zero()}, {"point", {0.3, 0.2}}, {"degrees", {10, 20, 30, 40}}};
  if (kind == "convexity.logk")
    return {{"domain", square()}, {"weight", zero()}, {"degree", 20}, {"seed", 42}};
  if (kind == "convexity.control")
    return {{"domain", l_shape()}, {"weight", zero()}, {"degree", 40}, {"segments", 500}, {"seed", 7}};
  if (kind == "convexity.counterexample") return {{"degree", 40}};
  if (kind == "convexity.question") return {{"domain", square()}, {"degree", 20}, {"seed", 42}};
  if (kind == "family.sweep")
    return {{"family", {{"norm_ball", {{"radius", 1.0}}}}},
            {"degree", 20},
            {"t_line", {{"from", 0.0}, {"to", 0.6}, {"count", 13}}}};
  if (kind == "family.identity")
    return {{"family", square_oka()}, {"degree", 20}, {"t_samples", {0.0, 0.25, 0.5, 0.75, 1.0}}};
  if (kind == "family.logk")
    return {{"family", {{"norm_ball", {{"radius", 1.0}}}}},
            {"t_region", {{"disk", {{"center", {0, 0}}, {"radius", 0.6}}}}},
            {"degree", 20},
            {"segments", 100},
            {"seed", 31}};
  if (kind == "family.joint")
    return {{"family", {{"norm_ball", {{"radius", 1.0}}}}}, {"degree", 20}, {"segments", 100}, {"seed", 11}};
  if (kind == "classic.hyperbolic") return {{"degree", 30}};
  if (kind == "classic.univalent") return {{"map", "koebe"}, {"r_grid", {0.9}}, {"expect", "violated"}};
  throw Error(ErrorKind::InvalidArgument, "unknown experiment kind '" + kind + "'");
}

RunReport run_experiment(const std::string& kind, const Json& config, std::optional<std::uint64_t> seed) {
  for (const auto& [name, runner] : runners()) {
    if (name != kind) continue;
    if (!seed) return runner(config);
    Json patched = config;
    patched["seed"] = *seed;
    return runner(patched);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown experiment kind '" + kind + "'");
}

std::vector<SuiteEntry> shipped_suite() {
  std::vector<SuiteEntry> s;
  s.push_back({"disk-oracle", "kernel.eval", default_config("kernel.eval")});
  s.push_back({"weighted-disk-oracle", "kernel.eval",
               {{"domain", {{"disk", {{"center", {0, 0}}, {"radius", 3.0}}}}},
                {"weight", modsq()},
                {"degree", 40},
                {"polar_grid", {{"max_radius", 1.0}, {"radii", 11}, {"angles", 12}}},
                {"oracle", {{"disk_fock", {{"radius", 3.0}, {"alpha", 1.0}}}}}}});

  const std::vector<std::pair<std::string, Json>> domains{
      {"square", square()}, {"pentagon", pentagon()}, {"ellipse", ellipse()}};
  const std::vector<std::pair<std::string, Json>> weights{
      {"zero", zero()}, {"modsq", modsq()}, {"x2", x_squared()}, {"max-affine", max_affine()}};
  for (const auto& [dn, d] : domains)
    for (const auto& [wn, w] : weights)
      s.push_back({"logk-" + dn + "-" + wn, "convexity.logk",
                   {{"domain", d}, {"weight", w}, {"degree", 20}, {"segments", 200}, {"samples", 33}, {"seed", 42}}});

  s.push_back({"slice-identity", "family.identity", default_config("family.identity")});
  s.push_back({"norm-ball-sweep", "family.sweep", default_config("family.sweep")});
  s.push_back({"oka-disk-sweep", "family.sweep",
               {{"family", {{"oka", {{"base", unit_disk()}, {"z0", -0.5}, {"z1", 0.5}}}}},
                {"degree", 20},
                {"t_line", {{"from", 0.0}, {"to", 1.0}, {"count", 11}}}}});
  s.push_back({"norm-ball-logk", "family.logk", default_config("family.logk")});
  s.push_back({"norm-ball-joint", "family.joint", default_config("family.joint")});
  s.push_back({"counterexample", "convexity.counterexample", default_config("convexity.counterexample")});
  s.push_back({"l-shape-control", "convexity.control", default_config("convexity.control")});
  s.push_back({"nonconvex-weight-control", "convexity.control",
               {{"domain", unit_disk()},
                {"weight", {{"quadratic", {{"a", 3.0}, {"b", -1.0}, {"c", 0.0}}}}},
                {"degree", 20},
                {"segments", 200},
                {"seed", 7},
                {"expect", "record"}}});
  s.push_back({"convex-domain-control", "convexity.control",
               {{"domain", square()}, {"weight", zero()}, {"degree", 20}, {"segments", 200}, {"seed", 7},
                {"expect", "convex"}}});
  s.push_back({"identity-map", "classic.univalent", {{"map", "identity"}, {"expect", "satisfied"}}});
  s.push_back({"half-plane-map", "classic.univalent", {{"map", "half_plane"}, {"expect", "satisfied"}}});
  s.push_back({"koebe-map", "classic.univalent", default_config("classic.univalent")});
  s.push_back({"hyperbolic-identity", "classic.hyperbolic", default_config("classic.hyperbolic")});
  s.push_back({"question-square", "convexity.question", default_config("convexity.question")});
  s.push_back({"question-disk", "convexity.question", {{"domain", unit_disk()}, {"seed", 42}}});
  return s;
}

bool SuiteResult::passed() const {
  for (const auto& [entry, report] : runs)
    if (!report.exploratory && !report.passed()) return false;
  return true;
}

Table SuiteResult::summary() const {
  Table t{{"name", "experiment", "status", "assertions", "failed", "wall_time_s"}, {}};
  for (const auto& [entry, report] : runs) {
    int failed = 0;
    for (const Assertion& a : report.assertions) failed += a.passed ? 0 : 1;
    const std::string status = report.exploratory ? "exploratory" : report.passed() ? "pass" : "fail";
    t.rows.push_back({entry.name, report.experiment, status, std::to_string(report.assertions.size()),
                      std::to_string(failed), std::to_string(report.wall_time_s)});
  }
  return t;
}

Json SuiteResult::to_json(bool include_timing) const {
  Json runs_json = Json::array();
  for (const auto& [entry, report] : runs)
    runs_json.push_back({{"name", entry.name}, {"report", report.to_json(include_timing)}});
  return {{"schema_version", kReportSchemaVersion}, {"passed", passed()}, {"runs", runs_json}};
}

SuiteResult run_suite(const std::vector<SuiteEntry>& entries, std::optional<std::uint64_t> seed) {
  SuiteResult out;
  for (const SuiteEntry& e : entries) out.runs.emplace_back(e, run_experiment(e.kind, e.config, seed));
  return out;
}

}  // namespace bergman::tools
