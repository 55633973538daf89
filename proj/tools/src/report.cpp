#include <charconv>
#include <cmath>
#include <fstream>

#include "bergman/error.hpp"
#include "bergman/tools/experiments.hpp"

namespace bergman::tools {
namespace {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

// JSON has no infinities; they are written as strings.
Json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void Table::add(const std::vector<double>& row) {
  std::vector<std::string> cells;
  cells.reserve(row.size());
  for (double v : row) cells.push_back(format_double(v));
  rows.push_back(std::move(cells));
}

bool RunReport::passed() const {
  for (const Assertion& a : assertions)
    if (!a.passed) return false;
  return true;
}

Json RunReport::to_json(bool include_timing) const {
  Json j;
  j["schema_version"] = kReportSchemaVersion;
  j["experiment"] = experiment;
  j["seed"] = seed;
  j["config"] = config;
  if (exploratory) {
    j["status"] = "exploratory - open question";
  } else {
    j["status"] = passed() ? "pass" : "fail";
    Json list = Json::array();
    for (const Assertion& a : assertions)
      list.push_back({{"name", a.name},
                      {"passed", a.passed},
                      {"value", number(a.value)},
                      {"threshold", number(a.threshold)},
                      {"detail", a.detail}});
    j["assertions"] = list;
  }
  j["results"] = results;
  j["diagnostics"] = diagnostics;
  if (include_timing) j["wall_time_s"] = wall_time_s;
  return j;
}

Json report_json(const ConvexityReport& r, bool include_slacks) {
  Json j;
  j["method"] = r.method;
  j["verdict"] = to_string(r.verdict);
  j["evidence_only"] = r.evidence_only;
  j["min_slack"] = number(r.min_slack);
  j["tol"] = number(r.tol);
  j["probed"] = r.probed_segments;
  j["samples_per_segment"] = r.samples_per_segment;
  j["skipped"] = r.skipped_segments;
  if (r.witness) {
    j["witness"] = {{"p", complex_json(r.witness->segment.p)},
                    {"q", complex_json(r.witness->segment.q)},
                    {"sample_count", r.witness->segment.sample_count},
                    {"index", r.witness->index}};
  }
  if (r.slice_witness) {
    j["slice_witness"] = {{"lambda", complex_json(r.slice_witness->lambda)},
                          {"s", complex_json(r.slice_witness->s)},
                          {"t", complex_json(r.slice_witness->t)}};
  }
  if (include_slacks) {
    Json slacks = Json::array();
    for (double s : r.segment_min_slacks) slacks.push_back(number(s));
    j["segment_min_slacks"] = slacks;
  }
  return j;
}

void write_csv(const std::filesystem::path& path, const Table& table) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_field(cells[i]);
    os << '\n';
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
}

void write_outputs(const RunReport& report, const std::filesystem::path& dir, bool csv) {
  std::filesystem::create_directories(dir);
  std::string stem = report.experiment;
  for (char& c : stem)
    if (c == '.') c = '_';
  {
    std::ofstream os(dir / (stem + ".json"));
    if (!os) throw Error(ErrorKind::InvalidArgument, "cannot write into " + dir.string());
    os << report.to_json().dump(2) << '\n';
  }
  if (csv)
    for (const auto& [name, table] : report.tables) write_csv(dir / (stem + "_" + name + ".csv"), table);
}

}  // namespace bergman::tools
