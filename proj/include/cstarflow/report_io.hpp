#pragma once

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cstarflow/report.hpp"

namespace cstarflow {

/// Witness matrices serialize as row-major arrays of [re, im] pairs with
/// explicit dims: language-neutral and lossless at double precision.
inline nlohmann::json witness_to_json(const std::vector<WitnessMatrix>& w) {
  if (w.empty()) return nullptr;
  nlohmann::json matrices = nlohmann::json::array();
  for (const auto& wm : w) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : wm.value.entries())
      entries.push_back({e.real(), e.imag()});
    matrices.push_back({{"label", wm.label},
                        {"rows", wm.value.rows()},
                        {"cols", wm.value.cols()},
                        {"entries", entries}});
  }
  return nlohmann::json{{"matrices", matrices}};
}

inline std::vector<WitnessMatrix> witness_from_json(const nlohmann::json& j) {
  std::vector<WitnessMatrix> out;
  if (j.is_null()) return out;
  for (const auto& m : j.at("matrices")) {
    const std::size_t rows = m.at("rows").get<std::size_t>();
    const std::size_t cols = m.at("cols").get<std::size_t>();
    std::vector<Complex> entries;
    entries.reserve(rows * cols);
    for (const auto& pair : m.at("entries"))
      entries.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
    out.push_back({m.at("label").get<std::string>(),
                   CMatrix(rows, cols, std::move(entries))});
  }
  return out;
}

inline nlohmann::json report_to_json(const CheckReport& report) {
  nlohmann::json cases = nlohmann::json::array();
  for (const auto& c : report.cases) {
    cases.push_back({{"name", c.name},
                     {"params", nlohmann::json(c.params)},
                     {"residual", c.residual},
                     {"tolerance", c.tolerance},
                     {"pass", c.passed},
                     {"witness", witness_to_json(c.witness)}});
  }
  return nlohmann::json{
      {"suite", report.suite},
      {"config", nlohmann::json(report.config)},
      {"cases", cases},
      {"summary",
       {{"passed", report.passed_count()},
        {"failed", report.failed_count()},
        {"max_residual", report.max_residual()},
        {"seconds", report.seconds}}}};
}

inline CheckReport report_from_json(const nlohmann::json& j) {
  CheckReport report(j.at("suite").get<std::string>());
  report.config =
      j.at("config").get<std::map<std::string, std::string>>();
  report.seconds = j.at("summary").at("seconds").get<double>();
  for (const auto& jc : j.at("cases")) {
    CheckCase c;
    c.name = jc.at("name").get<std::string>();
    c.params = jc.at("params").get<std::map<std::string, std::string>>();
    c.residual = jc.at("residual").get<double>();
    c.tolerance = jc.at("tolerance").get<double>();
    c.witness = witness_from_json(jc.at("witness"));
    report.add(std::move(c));
  }
  return report;
}

inline bool reports_equal_ignoring_seconds(CheckReport a, CheckReport b) {
  a.seconds = 0.0;
  b.seconds = 0.0;
  return report_to_json(a) == report_to_json(b);
}

/// Aligned table plus a one-line summary.
inline std::string render_text(const CheckReport& report) {
  std::ostringstream out;
  out << "suite: " << report.suite;
  for (const auto& [key, value] : report.config)
    out << "  " << key << "=" << value;
  out << "\n";

  std::size_t width = 4;
  for (const auto& c : report.cases) width = std::max(width, c.name.size());
  char line[160];
  std::snprintf(line, sizeof(line), "%-*s  %12s  %10s  %s\n",
                static_cast<int>(width), "CASE", "RESIDUAL", "TOLERANCE",
                "RESULT");
  out << line;
  for (const auto& c : report.cases) {
    std::snprintf(line, sizeof(line), "%-*s  %12.3e  %10.1e  %s\n",
                  static_cast<int>(width), c.name.c_str(), c.residual,
                  c.tolerance, c.passed ? "ok" : "FAIL");
    out << line;
  }
  std::snprintf(line, sizeof(line),
                "summary: %zu passed, %zu failed, max residual %.3e, %.3f s\n",
                report.passed_count(), report.failed_count(),
                report.max_residual(), report.seconds);
  out << line;
  return out.str();
}

/// Write the report in the requested format; empty path means stdout.
inline void emit_report(const CheckReport& report, const std::string& format,
                        const std::string& path) {
  std::string payload;
  if (format == "json")
    payload = report_to_json(report).dump(2) + "\n";
  else
    payload = render_text(report);

  if (path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("emit_report: cannot open '" + path + "' for writing");
  file << payload;
  if (!file) throw IoError("emit_report: write to '" + path + "' failed");
}

} // namespace cstarflow
