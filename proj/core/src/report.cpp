#include "nlspec/report.hpp"

#include <cmath>
#include <sstream>

#include "nlspec/csv.hpp"

namespace nlspec {

int Report::failures() const {
  int n = 0;
  for (const auto& c : checks) n += (!c.pass && !c.skipped);
  return n;
}

std::map<int, bool> Report::criteria() const {
  std::map<int, bool> out;
  for (const auto& c : checks) {
    if (c.skipped) continue;
    auto it = out.find(c.criterion);
    if (it == out.end()) out[c.criterion] = c.pass;
    else it->second = it->second && c.pass;
  }
  return out;
}

namespace {

// Non-finite values are not representable in JSON; emit them as strings.
nlohmann::json number(double x) {
  if (std::isfinite(x)) return x;
  return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

}  // namespace

nlohmann::json to_json(const Report& r) {
  nlohmann::json j;
  j["config_hash"] = r.config_hash;
  j["failures"] = r.failures();
  nlohmann::json crit = nlohmann::json::object();
  for (auto [k, v] : r.criteria()) crit[std::to_string(k)] = v ? "pass" : "fail";
  j["criteria"] = crit;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : r.checks) {
    nlohmann::json e;
    e["criterion"] = c.criterion;
    e["name"] = c.name;
    e["ref"] = c.ref;
    e["status"] = c.skipped ? "skipped" : (c.pass ? "pass" : "fail");
    e["message"] = c.message;
    nlohmann::json v = nlohmann::json::object(), s = nlohmann::json::object(), ser = nlohmann::json::object();
    for (const auto& [k, x] : c.values) v[k] = number(x);
    for (const auto& [k, x] : c.slopes) s[k] = number(x);
    for (const auto& [k, xs] : c.series) {
      nlohmann::json a = nlohmann::json::array();
      for (double x : xs) a.push_back(number(x));
      ser[k] = a;
    }
    e["values"] = v;
    e["slopes"] = s;
    e["series"] = ser;
    arr.push_back(e);
  }
  j["checks"] = arr;
  return j;
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2); }

std::string to_text(const Report& r) {
  std::ostringstream os;
  os << "config " << r.config_hash << "\n";
  for (const auto& c : r.checks) {
    os << (c.skipped ? "SKIP" : (c.pass ? "PASS" : "FAIL")) << "  [" << c.criterion << "] " << c.name << "  ("
       << c.ref << ")";
    if (!c.message.empty()) os << "  " << c.message;
    os << "\n";
    for (const auto& [k, x] : c.values) os << "      " << k << " = " << format_double(x) << "\n";
    for (const auto& [k, x] : c.slopes) os << "      slope " << k << " = " << format_double(x) << "\n";
  }
  for (auto [k, v] : r.criteria()) os << "criterion " << k << ": " << (v ? "pass" : "fail") << "\n";
  os << (r.all_pass() ? "all checks passed" : std::to_string(r.failures()) + " check(s) failed") << "\n";
  return os.str();
}

}  // namespace nlspec
