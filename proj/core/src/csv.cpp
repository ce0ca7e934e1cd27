#include "nlspec/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "nlspec/errors.hpp"

namespace nlspec {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& r : rows) {
    if (r.size() != header.size()) throw std::invalid_argument("csv row width differs from header");
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << format_double(r[i]);
    out << '\n';
  }
}

void write_profile_csv(const std::string& path, const FrontProfile& p) {
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < p.grid.size(); ++i) rows.push_back({p.grid.node(i), p.m[i], p.dm[i]});
  write_csv(path, {"z", "m", "dm"}, rows);
}

void write_spectrum_csv(const std::string& path, const Vector& values, const std::vector<double>* k) {
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < values.size(); ++i) {
    if (k) rows.push_back({double(i), values[i], (*k)[i]});
    else rows.push_back({double(i), values[i]});
  }
  if (k) write_csv(path, {"index", "eigenvalue", "k"}, rows);
  else write_csv(path, {"index", "eigenvalue"}, rows);
}

void write_curve_csv(const std::string& path, const std::vector<double>& x, const std::vector<double>& y,
                     const std::string& xname, const std::string& yname) {
  if (x.size() != y.size()) throw std::invalid_argument("curve columns differ in length");
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < x.size(); ++i) rows.push_back({x[i], y[i]});
  write_csv(path, {xname, yname}, rows);
}

std::vector<std::vector<double>> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (first) {
        first = false;
        continue;
      }
      throw ConfigError("non-numeric row in " + path + ": " + line);
    }
    first = false;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace nlspec
