#include <chrono>
#include <cmath>
#include <numbers>

#include "bergman/convexity.hpp"
#include "bergman/error.hpp"
#include "bergman/kernel.hpp"
#include "bergman/random.hpp"
#include "bergman/tools/experiments.hpp"

namespace bergman::tools {
namespace {

using Clock = std::chrono::steady_clock;

struct Run {
  RunReport report;
  ConfigReader cfg;
  Clock::time_point start = Clock::now();

  Run(std::string experiment, const Json& config) : cfg(config) {
    report.experiment = std::move(experiment);
    report.seed = cfg.get<std::uint64_t>("seed", 0);
  }

  void check(std::string name, bool passed, double value, double threshold, std::string detail) {
    report.assertions.push_back({std::move(name), passed, value, threshold, std::move(detail)});
  }

  RunReport finish() {
    report.config = cfg.echo();
    report.wall_time_s = std::chrono::duration<double>(Clock::now() - start).count();
    return std::move(report);
  }
};

Json kernel_diagnostics(const KernelApprox& k) {
  return {{"degree", k.degree()},
          {"gram_stability", k.gram_stability()},
          {"rule_size", k.rule().size()},
          {"quadrature_degree", k.quadrature_degree()},
          {"boundary_offset", k.boundary_offset()}};
}

KernelBuildOptions build_options(ConfigReader& cfg) {
  KernelBuildOptions opt;
  opt.rel_tol = cfg.get<double>("rel_tol", opt.rel_tol);
  return opt;
}

/// max_radius * i / (radii - 1) at `angles` equispaced angles.
std::vector<Complex> polar_grid(const Json& spec) {
  const double r_max = spec.at("max_radius").get<double>();
  const int radii = spec.at("radii").get<int>();
  const int angles = spec.at("angles").get<int>();
  const Complex center = spec.contains("center") ? parse_complex(spec.at("center")) : Complex{};
  std::vector<Complex> out;
  for (int i = 0; i < radii; ++i) {
    const double r = radii > 1 ? r_max * i / (radii - 1) : r_max;
    for (int k = 0; k < angles; ++k)
      out.push_back(center + std::polar(r, 2.0 * std::numbers::pi * (k + 0.5) / angles));
  }
  return out;
}

std::vector<Complex> points_from(ConfigReader& cfg, const Json& fallback) {
  if (cfg.has("polar_grid")) return polar_grid(cfg.require("polar_grid"));
  std::vector<Complex> out;
  for (const Json& p : cfg.get_json("points", fallback)) out.push_back(parse_complex(p));
  return out;
}

std::optional<ClosedFormKernel> parse_oracle(const Json& j) {
  if (j.is_null()) return std::nullopt;
  if (j.is_string() && j.get<std::string>() == "unit_disk") return ClosedFormKernel::unit_disk();
  if (j.is_object() && j.contains("disk_fock"))
    return ClosedFormKernel::disk_fock(j.at("disk_fock").at("radius").get<double>(),
                                       j.at("disk_fock").at("alpha").get<double>());
  throw Error(ErrorKind::InvalidArgument, "unknown oracle " + j.dump());
}

std::vector<Segment> parse_segments(const Json& j, int samples) {
  std::vector<Segment> out;
  for (const Json& s : j) out.push_back({parse_complex(s.at("p")), parse_complex(s.at("q")), samples});
  return out;
}

Table slack_table(const ConvexityReport& r) {
  Table t{{"segment", "min_slack"}, {}};
  for (std::size_t i = 0; i < r.segment_min_slacks.size(); ++i)
    t.add({static_cast<double>(i), r.segment_min_slacks[i]});
  return t;
}

bool is_unit_disk(const ConvexDomain& d) {
  const auto* disk = std::get_if<Disk>(&d.shape());
  return disk && disk->center == Complex{} && disk->radius == 1.0;
}

std::vector<Complex> t_samples_from(ConfigReader& cfg) {
  if (cfg.has("t_line")) {
    const Json& line = cfg.require("t_line");
    const Complex a = parse_complex(line.at("from"));
    const Complex b = parse_complex(line.at("to"));
    const int n = line.at("count").get<int>();
    std::vector<Complex> out;
    for (int i = 0; i < n; ++i) out.push_back(n > 1 ? a + (b - a) * (static_cast<double>(i) / (n - 1)) : a);
    return out;
  }
  std::vector<Complex> out;
  for (const Json& t : cfg.require("t_samples")) out.push_back(parse_complex(t));
  return out;
}

}  // namespace

RunReport run_kernel_eval(const Json& config) {
  Run run("kernel.eval", config);
  auto& cfg = run.cfg;
  const Region region = parse_region(cfg.require("domain"));
  const Weight weight = parse_weight(cfg.get_json("weight", {{"zero", Json::object()}}));
  const int degree = cfg.get<int>("degree", 20);
  const KernelBuildOptions opt = build_options(cfg);
  const std::vector<Complex> points = points_from(cfg, Json::array({Json::array({0.0, 0.0})}));
  const auto oracle = parse_oracle(cfg.get_json("oracle", nullptr));
  const double oracle_tol = cfg.get<double>("oracle_tol", 1e-6);

  const KernelApprox k = KernelApprox::build(region, weight, degree, opt);
  Table table{{"x", "y", "K", "log_K"}, {}};
  if (oracle) {
    table.header.push_back("oracle");
    table.header.push_back("relative_error");
  }
  double worst = 0.0;
  Complex worst_at;
  for (const Complex& z : points) {
    const double v = k.eval(z);
    std::vector<double> row{z.real(), z.imag(), v, std::log(v)};
    if (oracle) {
      const double exact = oracle->eval(z);
      const double rel = std::abs(v - exact) / exact;
      row.push_back(exact);
      row.push_back(rel);
      if (rel > worst) {
        worst = rel;
        worst_at = z;
      }
    }
    table.add(row);
  }
  run.report.results["points"] = points.size();
  if (oracle) {
    run.report.results["max_relative_error"] = worst;
    run.report.results["worst_point"] = complex_json(worst_at);
    run.check("kernel matches closed form", worst <= oracle_tol, worst, oracle_tol,
              "max relative error over the probe points");
  }
  run.report.diagnostics = kernel_diagnostics(k);
  run.report.tables["values"] = std::move(table);
  return run.finish();
}

RunReport run_kernel_converge(const Json& config) {
  Run run("kernel.converge", config);
  auto& cfg = run.cfg;
  const Region region = parse_region(cfg.require("domain"));
  const Weight weight = parse_weight(cfg.get_json("weight", {{"zero", Json::object()}}));
  const Complex z = parse_complex(cfg.get_json("point", Json::array({0.0, 0.0})));
  const auto degrees = cfg.get<std::vector<int>>("degrees", {10, 20, 30, 40});
  const double threshold = cfg.get<double>("threshold", 1e-8);
  const bool assert_converged = cfg.get<bool>("assert_converged", true);
  const KernelBuildOptions opt = build_options(cfg);

  const ConvergenceTable table = converge_table(region, weight, z, degrees, threshold, opt);
  Table out{{"degree", "K", "relative_delta"}, {}};
  for (const ConvergenceRow& row : table.rows) out.add({static_cast<double>(row.degree), row.value, row.delta});
  run.report.results["converged"] = table.converged;
  run.report.results["final_value"] = table.rows.back().value;
  run.report.results["final_delta"] = table.rows.size() > 1 ? table.rows.back().delta : 0.0;
  if (assert_converged)
    run.check("successive kernel values converge", table.converged,
              table.rows.size() > 1 ? table.rows.back().delta : 0.0, threshold,
              "relative change between the last two degrees");
  run.report.tables["convergence"] = std::move(out);
  return run.finish();
}

RunReport run_log_convexity(const Json& config) {
  Run run("convexity.logk", config);
  auto& cfg = run.cfg;
  const Region region = parse_region(cfg.require("domain"));
  const Weight weight = parse_weight(cfg.get_json("weight", {{"zero", Json::object()}}));
  const int degree = cfg.get<int>("degree", 20);
  const int segments = cfg.get<int>("segments", 200);
  const int samples = cfg.get<int>("samples", 33);
  const double tol_floor = cfg.get<double>("tol_floor", 1e-5);
  const bool slices = cfg.get<bool>("slices", true);
  const double spacing = cfg.get<double>("slice_spacing", 0.05);
  const KernelBuildOptions opt = build_options(cfg);

  const bool hypotheses = region.is_convex() && weight.is_convex();
  run.report.results["domain_convex"] = region.is_convex();
  run.report.results["weight_convex"] = weight.is_convex();
  run.report.results["weight"] = weight.describe();

  const KernelApprox k = KernelApprox::build(region, weight, degree, opt);
  const auto log_k = [&k](Complex z) { return std::log(k.eval(z)); };

  ConvexProbeOptions probe;
  probe.segments = segments;
  probe.samples = samples;
  probe.margin = k.boundary_offset();
  probe.tol = Tolerance{tol_floor, k.gram_stability()};
  probe.seed = run.report.seed;
  const ConvexityReport seg = check_convex(log_k, region, probe);
  run.report.results["segments"] = report_json(seg);
  run.report.tables["segment_slacks"] = slack_table(seg);
  if (hypotheses)
    run.check("log K convex along segments", seg.verdict == Verdict::ConvexWithinTol, seg.min_slack,
              -seg.tol, "min second difference of log K");

  if (slices && region.convex()) {
    SliceCertifyOptions so;
    so.spacing = spacing;
    so.margin = k.boundary_offset();
    so.tol = Tolerance{tol_floor, k.gram_stability()};
    const ConvexityReport sl = certify_convex_via_slices(log_k, *region.convex(), so);
    run.report.results["slices"] = report_json(sl);
    run.report.tables["slice_slacks"] = slack_table(sl);
    if (hypotheses)
      run.check("log K subharmonic on every slice", sl.verdict == Verdict::ConvexWithinTol,
                sl.min_slack, -sl.tol, "min slice Laplacian of log K");
  }
  run.report.diagnostics = kernel_diagnostics(k);
  return run.finish();
}

RunReport run_negative_control(const Json& config) {
  Run run("convexity.control", config);
  auto& cfg = run.cfg;
  const Region region = parse_region(cfg.require("domain"));
  const Weight weight = parse_weight(cfg.get_json("weight", {{"zero", Json::object()}}));
  const int degree = cfg.get<int>("degree", 40);
  const int segments = cfg.get<int>("segments", 500);
  const int samples = cfg.get<int>("samples", 33);
  const double tol_floor = cfg.get<double>("tol_floor", 1e-5);
  // "violation": assert min slack <= -min_violation; "convex": assert no
  // violation; "record": no assertion.
  const auto expect = cfg.get<std::string>("expect", "violation");
  const double min_violation = cfg.get<double>("min_violation", 1e-2);
  const KernelBuildOptions opt = build_options(cfg);
  if (expect != "violation" && expect != "convex" && expect != "record")
    throw Error(ErrorKind::InvalidArgument, "expect must be violation, convex or record");

  run.report.results["domain_convex"] = region.is_convex();
  run.report.results["weight_convex"] = weight.is_convex();
  run.report.results["weight"] = weight.describe();

  const KernelApprox k = KernelApprox::build(region, weight, degree, opt);
  ConvexProbeOptions probe;
  probe.segments = segments;
  probe.samples = samples;
  probe.margin = k.boundary_offset();
  probe.tol = Tolerance{tol_floor, k.gram_stability()};
  probe.seed = run.report.seed;
  const ConvexityReport r = check_convex([&k](Complex z) { return std::log(k.eval(z)); }, region, probe);
  run.report.results["probe"] = report_json(r);
  run.report.results["violation_magnitude"] = r.min_slack < 0 ? -r.min_slack : 0.0;
  run.report.tables["segment_slacks"] = slack_table(r);
  if (expect == "violation")
    run.check("log K convexity violated", r.min_slack <= -min_violation, r.min_slack, -min_violation,
              "min second difference of log K");
  else if (expect == "convex")
    run.check("no violation on convex input", r.verdict == Verdict::ConvexWithinTol, r.min_slack, -r.tol,
              "min second difference of log K");
  run.report.diagnostics = kernel_diagnostics(k);
  return run.finish();
}

RunReport run_counterexample(const Json& config) {
  Run run("convexity.counterexample", config);
  auto& cfg = run.cfg;

  // Analytic part: -e^{-x^2/2} and x^2 on an equispaced x grid.
  const auto xs = cfg.get<std::vector<double>>("analytic_x", {0.0, 1.0, 2.0, 3.0, 4.0, 5.0});
  const double expected = cfg.get<double>("analytic_expected", -0.11346);
  const double analytic_tol = cfg.get<double>("analytic_tol", 1e-4);
  std::vector<double> g, sq;
  for (double x : xs) {
    g.push_back(-std::exp(-x * x / 2.0));
    sq.push_back(x * x);
  }
  const SlackScan gs = second_difference_scan(g);
  const SlackScan ss = second_difference_scan(sq);
  // Stencil (2, 3, 4) is centred at x = 3.
  double at_three = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 1; i + 1 < xs.size(); ++i)
    if (xs[i] == 3.0) at_three = g[i - 1] + g[i + 1] - 2.0 * g[i];
  Table analytic{{"x", "neg_exp", "x_squared"}, {}};
  for (std::size_t i = 0; i < xs.size(); ++i) analytic.add({xs[i], g[i], sq[i]});
  run.report.tables["analytic"] = std::move(analytic);
  run.report.results["analytic"] = {{"neg_exp_min_slack", gs.min_slack},
                                    {"neg_exp_slack_at_3", at_three},
                                    {"x_squared_min_slack", ss.min_slack}};
  run.check("-exp(-x^2/2) slack at x=(2,3,4)", std::abs(at_three - expected) <= analytic_tol,
            at_three, expected, "exact value within " + std::to_string(analytic_tol));
  run.check("x^2 slacks nonnegative", ss.min_slack >= 0.0, ss.min_slack, 0.0, "second differences of x^2");

  // Numerical part: rectangle exhaustion of C with weight x^2.
  const Region region = parse_region(cfg.get_json("domain", {{"rectangle", {{"x", {-4, 4}}, {"y", {-8, 8}}}}}));
  const Weight weight = parse_weight(cfg.get_json("weight", {{"quadratic", {{"a", 1.0}}}}));
  const int degree = cfg.get<int>("degree", 40);
  const int samples = cfg.get<int>("samples", 33);
  const double tol_floor = cfg.get<double>("tol_floor", 1e-5);
  const double factor = cfg.get<double>("violation_factor", 10.0);
  const std::vector<Segment> segs = parse_segments(
      cfg.get_json("segments", Json::array({{{"p", {1.5, 0.0}}, {"q", {3.0, 0.0}}}})), samples);
  const KernelBuildOptions opt = build_options(cfg);

  const KernelApprox k = KernelApprox::build(region, weight, degree, opt);
  const Tolerance tol{tol_floor, k.gram_stability()};
  const ConvexityReport lk =
      check_convex_on_segments([&k](Complex z) { return std::log(k.eval(z)); }, segs, tol);
  const ConvexityReport inv =
      check_convex_on_segments([&k](Complex z) { return -1.0 / std::sqrt(k.eval(z)); }, segs, tol);
  run.report.results["log_k"] = report_json(lk, true);
  run.report.results["neg_inv_sqrt_k"] = report_json(inv, true);
  run.report.results["normalization_at_origin"] = k.eval(0.0);
  run.report.results["normalization_exact"] = 1.0 / (2.0 * std::numbers::pi);
  run.check("log K convex on the segments", lk.verdict == Verdict::ConvexWithinTol, lk.min_slack, -lk.tol,
            "min second difference of log K_N");
  run.check("-1/sqrt K violates convexity", inv.min_slack < -factor * inv.tol, inv.min_slack,
            -factor * inv.tol, "min second difference of -1/sqrt K_N against " +
                                   std::to_string(factor) + " x tol");
  run.report.diagnostics = kernel_diagnostics(k);
  return run.finish();
}

RunReport run_question_explorer(const Json& config) {
  Run run("convexity.question", config);
  run.report.exploratory = true;
  auto& cfg = run.cfg;
  const ConvexDomain domain = parse_convex_domain(cfg.require("domain"));
  const int degree = cfg.get<int>("degree", 20);
  const int segments = cfg.get<int>("segments", 200);
  const int samples = cfg.get<int>("samples", 33);
  const KernelBuildOptions opt = build_options(cfg);

  std::optional<KernelApprox> k;
  RealFunction f;
  double margin = kDefaultBoundaryFraction * domain.diameter();
  if (is_unit_disk(domain)) {
    f = [](Complex z) { return -std::sqrt(std::numbers::pi) * (1.0 - std::norm(z)); };
    run.report.results["source"] = "closed form -sqrt(pi) (1 - |z|^2)";
  } else {
    k = KernelApprox::build(domain, Weight::zero(), degree, opt);
    margin = k->boundary_offset();
    f = [&k](Complex z) { return -1.0 / std::sqrt(k->eval(z)); };
    run.report.results["source"] = "numerical kernel";
    run.report.diagnostics = kernel_diagnostics(*k);
  }
  ConvexProbeOptions probe;
  probe.segments = segments;
  probe.samples = samples;
  probe.margin = margin;
  probe.seed = run.report.seed;
  const ConvexityReport r = check_convex(f, domain, probe);
  // Only slacks are reported; the question is open, so there is no verdict.
  run.report.results["min_slack"] = r.min_slack;
  if (r.witness)
    run.report.results["worst_segment"] = {{"p", complex_json(r.witness->segment.p)},
                                           {"q", complex_json(r.witness->segment.q)},
                                           {"index", r.witness->index}};
  run.report.results["probed"] = r.probed_segments;
  run.report.tables["segment_slacks"] = slack_table(r);
  return run.finish();
}

RunReport run_family_sweep(const Json& config) {
  Run run("family.sweep", config);
  auto& cfg = run.cfg;
  const Json family_json = cfg.require("family");
  const FiberedFamily family = parse_family(family_json);
  const int degree = cfg.get<int>("degree", 20);
  const double oracle_tol = cfg.get<double>("oracle_tol", 1e-6);
  const std::vector<Complex> ts = t_samples_from(cfg);
  const KernelBuildOptions opt = build_options(cfg);

  // Closed forms: norm-ball slices are disks; an Oka family over the zero
  // weight unit disk traces the unit disk kernel.
  std::function<double(Complex)> oracle;
  if (const auto* ball = std::get_if<NormBallFamily>(&family.value())) {
    const double radius = ball->radius;
    oracle = [radius](Complex t) { return 1.0 / (std::numbers::pi * std::pow(radius - std::abs(t), 2)); };
  } else if (const auto& oka = std::get<OkaFamily>(family.value());
             is_unit_disk(oka.base) && oka.weight.is_zero()) {
    oracle = [&family](Complex t) { return ClosedFormKernel::unit_disk().eval(family.path_point(t)); };
  }

  const std::vector<SweepSample> sweep = kernel_sweep(family, ts, degree, opt);
  Table table{{"t_re", "t_im", "K", "logK"}, {}};
  if (oracle) table.header.insert(table.header.end(), {"oracle", "relative_error"});
  double worst = 0.0, worst_gs = 0.0;
  int failures = 0;
  for (const SweepSample& s : sweep) {
    if (s.error) {
      ++failures;
      continue;
    }
    worst_gs = std::max(worst_gs, s.gram_stability);
    std::vector<double> row{s.t.real(), s.t.imag(), s.kernel, s.log_kernel};
    if (oracle) {
      const double exact = oracle(s.t);
      const double rel = std::abs(s.kernel - exact) / exact;
      worst = std::max(worst, rel);
      row.push_back(exact);
      row.push_back(rel);
    }
    table.add(row);
  }
  run.report.results["samples"] = sweep.size();
  run.report.results["failed_samples"] = failures;
  run.check("every slice built", failures == 0, failures, 0.0, "per-sample build failures");
  if (oracle) {
    run.report.results["max_relative_error"] = worst;
    run.check("sweep matches closed form", worst <= oracle_tol, worst, oracle_tol,
              "max relative error of K_t(0)");
  }
  run.report.diagnostics = {{"degree", degree}, {"max_gram_stability", worst_gs}};
  run.report.tables["sweep"] = std::move(table);
  return run.finish();
}

RunReport run_family_identity(const Json& config) {
  Run run("family.identity", config);
  auto& cfg = run.cfg;
  const FiberedFamily family = parse_family(cfg.require("family"));
  const int degree = cfg.get<int>("degree", 20);
  const double floor = cfg.get<double>("floor", 1e-6);
  const std::vector<Complex> ts = t_samples_from(cfg);
  const KernelBuildOptions opt = build_options(cfg);

  Table table{{"t_re", "t_im", "slice_K0", "base_K", "relative_error", "bound"}, {}};
  double worst = 0.0, worst_ratio = 0.0;
  for (const Complex& t : ts) {
    const SliceIdentityCheck c = verify_slice_identity(family, t, degree, opt, floor);
    table.add({t.real(), t.imag(), c.slice_value, c.base_value, c.relative_error, c.bound});
    worst = std::max(worst, c.relative_error);
    worst_ratio = std::max(worst_ratio, c.relative_error / c.bound);
    run.check("slice identity at t = (" + std::to_string(t.real()) + ", " + std::to_string(t.imag()) + ")",
              c.relative_error <= c.bound, c.relative_error, c.bound,
              "relative discrepancy of K_slice(0) and K_base(z_t)");
  }
  run.report.results["max_relative_error"] = worst;
  run.report.results["max_error_to_bound"] = worst_ratio;
  run.report.tables["identity"] = std::move(table);
  return run.finish();
}

RunReport run_family_log_convexity(const Json& config) {
  Run run("family.logk", config);
  auto& cfg = run.cfg;
  const FiberedFamily family = parse_family(cfg.require("family"));
  const ConvexDomain t_region =
      parse_convex_domain(cfg.get_json("t_region", {{"disk", {{"center", {0, 0}}, {"radius", 0.6}}}}));
  const int degree = cfg.get<int>("degree", 20);
  FamilyProbeOptions probe;
  probe.segments = cfg.get<int>("segments", 100);
  probe.samples = cfg.get<int>("samples", 33);
  probe.tol_floor = cfg.get<double>("tol_floor", 1e-5);
  probe.seed = run.report.seed;
  const double min_slack_floor = cfg.get<double>("min_slack_floor", -1e-5);
  const KernelBuildOptions opt = build_options(cfg);

  const ConvexityReport r = verify_log_kernel_convexity(family, t_region, degree, probe, opt);
  run.report.results["probe"] = report_json(r);
  run.report.tables["segment_slacks"] = slack_table(r);
  run.check("t -> log K_t(0) convex", r.verdict == Verdict::ConvexWithinTol, r.min_slack, -r.tol,
            "min second difference, scaled tolerance");
  run.check("min slack above floor", r.min_slack >= min_slack_floor, r.min_slack, min_slack_floor,
            "absolute floor on the min second difference");
  return run.finish();
}

RunReport run_family_joint(const Json& config) {
  Run run("family.joint", config);
  auto& cfg = run.cfg;
  const FiberedFamily family = parse_family(cfg.require("family"));
  const int degree = cfg.get<int>("degree", 20);
  JointProbeOptions probe;
  probe.segments = cfg.get<int>("segments", 100);
  probe.samples = cfg.get<int>("samples", 9);
  probe.grid_size = cfg.get<int>("grid_size", 64);
  probe.max_cell_step = cfg.get<int>("max_cell_step", 2);
  probe.tol_floor = cfg.get<double>("tol_floor", 1e-5);
  probe.margin_fraction = cfg.get<double>("margin_fraction", 0.05);
  probe.seed = run.report.seed;
  const KernelBuildOptions opt = build_options(cfg);

  const JointProbeResult r = verify_joint_convexity(family, degree, probe, opt);
  run.report.results["probe"] = report_json(r.report);
  run.report.results["slices_built"] = r.slices_built;
  run.report.tables["segment_slacks"] = slack_table(r.report);
  run.check("(z, t) -> log K_t(z) convex", r.report.verdict == Verdict::ConvexWithinTol, r.report.min_slack,
            -r.report.tol, "min second difference along 4-d segments");
  if (r.oracle_report) {
    run.report.results["oracle"] = report_json(*r.oracle_report);
    run.report.results["oracle_max_deviation"] = *r.oracle_max_deviation;
    run.check("closed form convex on the same segments", r.oracle_report->verdict == Verdict::ConvexWithinTol,
              r.oracle_report->min_slack, -r.oracle_report->tol, "closed-form log K");
  }
  return run.finish();
}

RunReport run_classic_hyperbolic(const Json& config) {
  Run run("classic.hyperbolic", config);
  auto& cfg = run.cfg;
  const int degree = cfg.get<int>("degree", 30);
  const double tol = cfg.get<double>("tol", 1e-6);
  const double origin_tol = cfg.get<double>("origin_tol", 1e-10);
  const Json grid = cfg.get_json("polar_grid", {{"max_radius", 0.7}, {"radii", 10}, {"angles", 10}});
  const std::vector<Complex> probes = polar_grid(grid);
  const KernelBuildOptions opt = build_options(cfg);

  const double worst = verify_metric_identity(probes, degree, opt);
  const Complex origin[] = {Complex{}};
  const double at_origin = verify_metric_identity(origin, degree, opt);

  // 4 pi K = lambda^2 for the closed forms, up to rounding.
  double algebraic = 0.0;
  const ClosedFormKernel disk = ClosedFormKernel::unit_disk();
  Table table{{"r", "lambda", "four_pi_K_closed_form"}, {}};
  for (int i = 0; i <= 99; ++i) {
    const double r = 0.01 * i;
    const double lambda = disk_density(r);
    const double lhs = 4.0 * std::numbers::pi * disk.eval(r);
    algebraic = std::max(algebraic, std::abs(lhs - lambda * lambda) / (lambda * lambda));
    table.add({r, lambda, lhs});
  }
  run.report.results["max_relative_error"] = worst;
  run.report.results["origin_relative_error"] = at_origin;
  run.report.results["closed_form_identity_error"] = algebraic;
  run.check("4 pi K_N = lambda^2 on the probe grid", worst <= tol, worst, tol, "max relative error");
  run.check("4 pi K_N(0) = lambda(0)^2", at_origin <= origin_tol, at_origin, origin_tol, "relative error");
  run.check("closed forms agree", algebraic <= 1e-14, algebraic, 1e-14, "|z| <= 0.99");
  run.report.tables["density"] = std::move(table);
  return run.finish();
}

RunReport run_classic_univalent(const Json& config) {
  Run run("classic.univalent", config);
  auto& cfg = run.cfg;
  const Json map = cfg.get_json("map", "identity");
  const int terms = cfg.get<int>("terms", 400);
  const auto r_grid = cfg.get<std::vector<double>>("r_grid", {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9});
  const int theta_count = cfg.get<int>("theta_count", 64);
  // "satisfied", "violated" or "record".
  const auto expect = cfg.get<std::string>("expect", "record");
  const double tol = cfg.get<double>("tol", 0.0);
  const int curve_points = cfg.get<int>("curve_points", 256);

  std::optional<TaylorMap> f;
  if (map.is_string()) {
    const auto name = map.get<std::string>();
    if (name == "identity") f = TaylorMap({0.0, 1.0});
    else if (name == "half_plane") f = TaylorMap::half_plane(terms);
    else if (name == "koebe") f = TaylorMap::koebe(terms);
    else throw Error(ErrorKind::InvalidArgument, "unknown map '" + name + "'");
  } else {
    std::vector<Complex> coeffs;
    for (const Json& c : map.at("coeffs")) coeffs.push_back(parse_complex(c));
    f = TaylorMap(std::move(coeffs));
  }

  const UnivalenceScan scan = univalence_criterion_scan(*f, r_grid, theta_count);
  Table table{{"r", "theta", "re_z_f2_over_f1"}, {}};
  for (const auto& s : scan.samples) table.add({s.r, s.theta, s.value});
  const double r_max = *std::max_element(r_grid.begin(), r_grid.end());
  const bool curve_convex = image_curve_convex(image_curve(*f, r_max, curve_points));
  run.report.results["min_value"] = scan.min_value;
  run.report.results["witness"] = complex_json(scan.witness);
  run.report.results["criterion_satisfied"] = scan.satisfied(tol);
  run.report.results["image_curve_convex"] = curve_convex;
  run.report.results["image_curve_radius"] = r_max;
  if (expect == "satisfied")
    run.check("Re(z f''/f') >= -1", scan.satisfied(tol), scan.min_value, -1.0 - tol, "min over the scan grid");
  else if (expect == "violated")
    run.check("Re(z f''/f') < -1 somewhere", !scan.satisfied(tol), scan.min_value, -1.0 - tol,
              "min over the scan grid");
  else if (expect != "record")
    throw Error(ErrorKind::InvalidArgument, "expect must be satisfied, violated or record");
  run.report.tables["scan"] = std::move(table);
  return run.finish();
}

}  // namespace bergman::tools
