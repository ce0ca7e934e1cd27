#pragma once

#include <map>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace nlspec {

struct CheckResult {
  int criterion = 0;
  std::string name;
  std::string ref;  // the claim being checked
  bool pass = false;
  bool skipped = false;
  std::string message;
  std::map<std::string, double> values;  // fitted constants and measured quantities
  std::map<std::string, double> slopes;
  std::map<std::string, std::vector<double>> series;
};

struct Report {
  std::string config_hash;
  std::vector<CheckResult> checks;

  int failures() const;
  bool all_pass() const { return failures() == 0; }
  // Pass/fail per acceptance criterion, in order.
  std::map<int, bool> criteria() const;
};

nlohmann::json to_json(const Report& r);
std::string to_text(const Report& r);
// Two-space indented dump; doubles use the shortest round-trip form.
std::string dump_json(const nlohmann::json& j);

}  // namespace nlspec
