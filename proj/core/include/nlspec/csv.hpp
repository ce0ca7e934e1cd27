#pragma once

#include <string>
#include <vector>

#include "nlspec/eigen.hpp"
#include "nlspec/profile.hpp"

namespace nlspec {

// Scientific notation with 17 significant digits, round-trip exact.
std::string format_double(double x);

// Header line then one comma-separated row per entry; rows must match the header width.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

void write_profile_csv(const std::string& path, const FrontProfile& p);
// (index, eigenvalue) or (index, eigenvalue, k) when block labels are given.
void write_spectrum_csv(const std::string& path, const Vector& values, const std::vector<double>* k = nullptr);
void write_curve_csv(const std::string& path, const std::vector<double>& x, const std::vector<double>& y,
                     const std::string& xname = "x", const std::string& yname = "y");

// Numeric rows of a CSV file; a non-numeric first line is taken as a header.
std::vector<std::vector<double>> read_csv(const std::string& path);

}  // namespace nlspec
