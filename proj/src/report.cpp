#include "nhfrac/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nhfrac/error.hpp"

namespace nhfrac {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string baseline_key(const StatRow& row) {
  return row.fixture + "|" + std::to_string(row.n) + "|" + row.statistic;
}

std::string report_to_csv(const SuiteReport& report) {
  std::ostringstream os;
  os << "suite,fixture,n,statistic,value,evaluated,skipped,witness\n";
  for (const auto& r : report.rows)
    os << report.suite << ',' << csv_field(r.fixture) << ',' << r.n << ',' << csv_field(r.statistic) << ','
       << format_double(r.value) << ',' << r.evaluated << ',' << r.skipped << ',' << csv_field(r.witness) << '\n';
  return os.str();
}

std::string trends_to_csv(const SuiteReport& report) {
  std::ostringstream os;
  os << "suite,statistic,n_from,n_to,growth,limit,passed\n";
  for (const auto& t : report.trends)
    os << report.suite << ',' << csv_field(t.statistic) << ',' << t.n_from << ',' << t.n_to << ','
       << format_double(t.growth) << ',' << (t.limit < 0.0 ? std::string() : format_double(t.limit)) << ','
       << (t.passed ? "yes" : "no") << '\n';
  return os.str();
}

nlohmann::json report_to_json(const SuiteReport& report) {
  nlohmann::json j;
  j["suite"] = report.suite;
  j["rows"] = nlohmann::json::array();
  for (const auto& r : report.rows)
    j["rows"].push_back({{"fixture", r.fixture},
                         {"n", r.n},
                         {"ladder", r.ladder},
                         {"statistic", r.statistic},
                         {"value", format_double(r.value)},
                         {"evaluated", r.evaluated},
                         {"skipped", r.skipped},
                         {"witness", r.witness}});
  j["trends"] = nlohmann::json::array();
  for (const auto& t : report.trends)
    j["trends"].push_back({{"statistic", t.statistic},
                           {"n_from", t.n_from},
                           {"n_to", t.n_to},
                           {"growth", format_double(t.growth)},
                           {"limit", t.limit < 0.0 ? nlohmann::json() : nlohmann::json(format_double(t.limit))},
                           {"passed", t.passed}});
  j["baselines"] = nlohmann::json::array();
  for (const auto& b : report.baselines)
    j["baselines"].push_back({{"key", b.key},
                              {"baseline", format_double(b.baseline)},
                              {"value", format_double(b.value)},
                              {"passed", b.passed}});
  j["notes"] = report.notes;
  j["failures"] = report.failures;
  j["constants"] = report.constants;
  return j;
}

void write_report(const SuiteReport& report, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const auto base = std::filesystem::path(dir) / report.suite;
  write_text(base.string() + ".csv", report_to_csv(report));
  write_text(base.string() + "_trends.csv", trends_to_csv(report));
  write_text(base.string() + ".json", report_to_json(report).dump(2) + "\n");
}

void compare_baselines(SuiteReport& report, const nlohmann::json& baselines, double tolerance) {
  report.baselines.clear();
  if (!baselines.contains(report.suite)) {
    report.notes.push_back("no regression baselines recorded for this suite");
    return;
  }
  const auto& table = baselines.at(report.suite);
  std::size_t missing = 0;
  for (const auto& r : report.rows) {
    const std::string key = baseline_key(r);
    if (!table.contains(key)) {
      ++missing;
      continue;
    }
    BaselineCheck b;
    b.key = key;
    b.baseline = std::stod(table.at(key).get<std::string>());
    b.value = r.value;
    b.passed = std::abs(b.value - b.baseline) <= tolerance * std::max(std::abs(b.baseline), 1e-300);
    report.baselines.push_back(b);
  }
  if (missing > 0) report.notes.push_back(std::to_string(missing) + " rows have no recorded baseline");
}

nlohmann::json baselines_from(const std::vector<SuiteReport>& reports) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& rep : reports) {
    nlohmann::json table = nlohmann::json::object();
    for (const auto& r : rep.rows) table[baseline_key(r)] = format_double(r.value);
    j[rep.suite] = table;
  }
  return j;
}

}  // namespace nhfrac
