#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"

namespace nhfrac {

// One statistic on one fixture. `witness` names the maximizer (function id,
// point, ball) so the number can be re-derived; `skipped` counts inputs
// dropped by the zero-denominator rule.
struct StatRow {
  std::string fixture;
  std::size_t n = 0;
  bool ladder = false;
  std::string statistic;
  double value = 0.0;
  std::string witness;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
};

// value(n_to) / value(n_from) - 1 along the ladder.
struct TrendRow {
  std::string statistic;
  std::size_t n_from = 0;
  std::size_t n_to = 0;
  double growth = 0.0;
  double limit = -1.0;  // negative: not gated
  bool passed = true;
};

struct BaselineCheck {
  std::string key;
  double baseline = 0.0;
  double value = 0.0;
  bool passed = true;
};

struct SuiteReport {
  std::string suite;
  std::vector<StatRow> rows;
  std::vector<TrendRow> trends;
  std::vector<BaselineCheck> baselines;
  std::vector<std::string> notes;
  std::vector<std::string> failures;  // hard assertion failures
  nlohmann::json constants = nlohmann::json::object();
};

// Fixed 17-significant-digit formatting so reports are byte-stable.
std::string format_double(double v);

std::string baseline_key(const StatRow& row);

// Fills `trends` from the ladder rows; `limit_for` returns a negative value
// for statistics without a gate.
template <class LimitFn>
void compute_trends(SuiteReport& report, LimitFn limit_for);

std::string report_to_csv(const SuiteReport& report);
std::string trends_to_csv(const SuiteReport& report);
nlohmann::json report_to_json(const SuiteReport& report);

// Writes <dir>/<suite>.csv, <dir>/<suite>_trends.csv and <dir>/<suite>.json.
void write_report(const SuiteReport& report, const std::string& dir);

// Compares every row with a baseline entry (relative tolerance) and records
// the outcome; missing entries are noted, not failed.
void compare_baselines(SuiteReport& report, const nlohmann::json& baselines, double tolerance);
nlohmann::json baselines_from(const std::vector<SuiteReport>& reports);

template <class LimitFn>
void compute_trends(SuiteReport& report, LimitFn limit_for) {
  report.trends.clear();
  std::vector<std::string> names;
  for (const auto& r : report.rows)
    if (r.ladder && std::find(names.begin(), names.end(), r.statistic) == names.end()) names.push_back(r.statistic);
  for (const auto& name : names) {
    const StatRow* prev = nullptr;
    for (const auto& r : report.rows) {
      if (!r.ladder || r.statistic != name) continue;
      if (prev != nullptr && prev->value > 0.0) {
        TrendRow t;
        t.statistic = name;
        t.n_from = prev->n;
        t.n_to = r.n;
        t.growth = r.value / prev->value - 1.0;
        t.limit = limit_for(name);
        t.passed = t.limit < 0.0 || t.growth < t.limit;
        report.trends.push_back(t);
      }
      prev = &r;
    }
  }
}

}  // namespace nhfrac
