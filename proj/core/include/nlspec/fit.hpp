#pragma once

#include <vector>

namespace nlspec {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int points = 0;
};

// Ordinary least squares y ≈ slope·x + intercept.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Slope of log|y| against log x.
LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

// Slope of log|y| against x.
LineFit fit_semilog(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace nlspec
