#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cstarflow/complex_matrix.hpp"

namespace cstarflow {

/// Shortest defensible decimal text for a double; round-trips exactly.
inline std::string num_str(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string num_str(std::uint64_t v) { return std::to_string(v); }
inline std::string num_str(std::size_t v) { return std::to_string(v); }
inline std::string num_str(int v) { return std::to_string(v); }

/// A labeled matrix attached to a failing case (the offending operands).
struct WitnessMatrix {
  std::string label;
  CMatrix value;
};

/// One measured check: pass iff residual <= tolerance (kept true by
/// CheckReport::add). Boolean conditions are encoded as indicator residuals
/// (0 = holds, 1 = violated) with tolerance 0.5.
struct CheckCase {
  std::string name;
  std::map<std::string, std::string> params;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::vector<WitnessMatrix> witness;
};

struct CheckReport {
  std::string suite;
  std::map<std::string, std::string> config;
  std::vector<CheckCase> cases;
  double seconds = 0.0;

  CheckReport() = default;
  explicit CheckReport(std::string suite_name) : suite(std::move(suite_name)) {}

  /// Insert a case; the pass flag is derived, never hand-set.
  void add(CheckCase c) {
    c.passed = c.residual <= c.tolerance;
    if (c.passed) c.witness.clear();
    cases.push_back(std::move(c));
  }

  /// Merge another report's cases under "prefix/".
  void absorb(const CheckReport& other, const std::string& prefix) {
    for (CheckCase c : other.cases) {
      c.name = prefix + "/" + c.name;
      cases.push_back(std::move(c));
    }
  }

  /// Lexicographic by case name; run order never leaks into reports.
  void sort_cases() {
    std::stable_sort(cases.begin(), cases.end(),
                     [](const CheckCase& a, const CheckCase& b) {
                       return a.name < b.name;
                     });
  }

  std::size_t passed_count() const {
    std::size_t n = 0;
    for (const auto& c : cases) n += c.passed ? 1 : 0;
    return n;
  }

  std::size_t failed_count() const { return cases.size() - passed_count(); }

  double max_residual() const {
    double m = 0.0;
    for (const auto& c : cases) m = std::max(m, c.residual);
    return m;
  }

  bool all_passed() const { return failed_count() == 0; }

  const CheckCase* find(const std::string& name) const {
    for (const auto& c : cases)
      if (c.name == name) return &c;
    return nullptr;
  }
};

} // namespace cstarflow
