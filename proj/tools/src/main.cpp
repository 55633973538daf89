#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "bergman/error.hpp"
#include "bergman/kernel.hpp"
#include "bergman/tools/experiments.hpp"

namespace {

using bergman::tools::Json;

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool csv = false;
  bool json = false;
  std::string dump_rule;
};

void add_common(CLI::App* app, CommonFlags& flags) {
  app->add_option("--config", flags.config, "JSON experiment config (defaults to the shipped one)");
  app->add_option("--seed", flags.seed, "override the config seed");
  app->add_option("--out", flags.out, "directory for the JSON report and CSV tables");
  app->add_flag("--csv", flags.csv, "write CSV tables (to --out, else stdout)");
  app->add_flag("--json", flags.json, "print the full JSON report");
}

Json load_config(const std::string& kind, const std::string& path) {
  if (path.empty()) return bergman::tools::default_config(kind);
  std::ifstream is(path);
  if (!is) throw bergman::Error(bergman::ErrorKind::InvalidArgument, "cannot read config " + path);
  return Json::parse(is);
}

void print_csv(std::ostream& os, const bergman::tools::Table& t) {
  for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
}

void print_summary(std::ostream& os, const bergman::tools::RunReport& r) {
  os << r.experiment << " seed=" << r.seed << " wall_time=" << r.wall_time_s << "s\n";
  if (r.exploratory) {
    os << "  exploratory - open question (no verdict)\n";
    os << "  results: " << r.results.dump() << '\n';
    return;
  }
  for (const auto& a : r.assertions)
    os << "  " << (a.passed ? "PASS" : "FAIL") << "  " << a.name << "  value=" << a.value
       << " threshold=" << a.threshold << '\n';
  os << "  status: " << (r.passed() ? "pass" : "fail") << '\n';
}

int run_one(const std::string& kind, const CommonFlags& flags) {
  const Json config = load_config(kind, flags.config);
  const bergman::tools::RunReport report = bergman::tools::run_experiment(kind, config, flags.seed);
  if (!flags.dump_rule.empty()) {
    const auto k = bergman::KernelApprox::build(
        bergman::tools::parse_region(report.config.at("domain")),
        bergman::tools::parse_weight(report.config.at("weight")), report.config.at("degree").get<int>());
    std::ofstream os(flags.dump_rule);
    bergman::write_rule_csv(os, k.rule());
  }
  if (flags.json)
    std::cout << report.to_json().dump(2) << '\n';
  else
    print_summary(std::cout, report);
  if (!flags.out.empty())
    bergman::tools::write_outputs(report, flags.out, flags.csv);
  else if (flags.csv)
    for (const auto& [name, table] : report.tables) {
      std::cout << "# " << name << '\n';
      print_csv(std::cout, table);
    }
  return report.exploratory || report.passed() ? 0 : 1;
}

int run_suite(const CommonFlags& flags) {
  auto entries = bergman::tools::shipped_suite();
  if (!flags.config.empty()) {
    entries.clear();
    std::ifstream is(flags.config);
    if (!is) throw bergman::Error(bergman::ErrorKind::InvalidArgument, "cannot read " + flags.config);
    for (const Json& e : Json::parse(is).at("experiments"))
      entries.push_back({e.at("name").get<std::string>(), e.at("kind").get<std::string>(), e.at("config")});
  }
  bergman::tools::SuiteResult result;
  for (const auto& e : entries) {
    result.runs.emplace_back(e, bergman::tools::run_experiment(e.kind, e.config, flags.seed));
    const auto& report = result.runs.back().second;
    std::cout << (report.exploratory ? "INFO" : report.passed() ? "PASS" : "FAIL") << "  " << e.name << " ("
              << e.kind << ", " << report.wall_time_s << "s)\n";
  }
  const auto summary = result.summary();
  if (!flags.out.empty()) {
    std::filesystem::create_directories(flags.out);
    bergman::tools::write_csv(std::filesystem::path(flags.out) / "summary.csv", summary);
    std::ofstream(std::filesystem::path(flags.out) / "summary.json") << result.to_json().dump(2) << '\n';
    if (flags.csv)
      for (const auto& [entry, report] : result.runs)
        bergman::tools::write_outputs(report, std::filesystem::path(flags.out) / entry.name, true);
  }
  if (flags.json) std::cout << result.to_json().dump(2) << '\n';
  std::cout << (result.passed() ? "suite: pass" : "suite: fail") << '\n';
  return result.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted Bergman kernel experiments"};
  app.require_subcommand(1);
  CommonFlags flags;
  std::string selected;

  const std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>> groups{
      {"kernel", {{"eval", "kernel.eval"}, {"converge", "kernel.converge"}}},
      {"convexity",
       {{"logk", "convexity.logk"},
        {"control", "convexity.control"},
        {"counterexample", "convexity.counterexample"},
        {"question", "convexity.question"}}},
      {"family",
       {{"sweep", "family.sweep"},
        {"identity", "family.identity"},
        {"logk", "family.logk"},
        {"joint", "family.joint"}}},
      {"classic", {{"hyperbolic", "classic.hyperbolic"}, {"univalent", "classic.univalent"}}},
  };
  for (const auto& [group, leaves] : groups) {
    CLI::App* g = app.add_subcommand(group, group + " experiments");
    g->require_subcommand(1);
    for (const auto& [leaf, kind] : leaves) {
      CLI::App* sub = g->add_subcommand(leaf, kind);
      add_common(sub, flags);
      if (kind == "kernel.eval")
        sub->add_option("--dump-rule", flags.dump_rule, "write the quadrature rule as CSV");
      sub->callback([&selected, kind = kind] { selected = kind; });
    }
  }
  CLI::App* suite = app.add_subcommand("suite", "run the shipped acceptance set");
  add_common(suite, flags);
  suite->callback([&selected] { selected = "suite"; });

  CLI11_PARSE(app, argc, argv);
  try {
    return selected == "suite" ? run_suite(flags) : run_one(selected, flags);
  } catch (const bergman::Error& e) {
    std::cerr << "error [" << bergman::to_string(e.kind()) << "]: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
