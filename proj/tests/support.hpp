#pragma once

#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include "nlspec/config.hpp"
#include "nlspec/geometry.hpp"
#include "nlspec/kernels.hpp"
#include "nlspec/operators1d.hpp"
#include "nlspec/operators2d.hpp"
#include "nlspec/profile.hpp"

namespace nlspec::test {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kD0 = 0.15;
inline constexpr double kH1d = 0.025;

// Positive root of m = tanh(βm) by bisection, independent of the library solver.
inline double bisect_mbeta(double beta) {
  double lo = 1e-12, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mid - std::tanh(beta * mid) < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Closed-form marginal of the quartic bump.
inline double marginal_closed_form(double x) {
  const double u = 1.0 - x * x;
  return u <= 0 ? 0.0 : 16.0 / (5.0 * kPi) * std::pow(u, 2.5);
}

inline const Thermodynamics& thermo() {
  static const Thermodynamics th = solve_mbeta(2.0);
  return th;
}

inline const RadialKernel& kernel() {
  static const RadialKernel k = make_default_kernel();
  return k;
}

inline const FrontProfile& whole(int n = 1601) {
  static std::map<int, FrontProfile> memo;
  auto it = memo.find(n);
  if (it == memo.end()) it = memo.emplace(n, solve_front(thermo(), marginal(kernel()), 20.0, n)).first;
  return it->second;
}

inline const FrontProfile& aligned(double lambda) {
  static std::map<double, FrontProfile> memo;
  auto it = memo.find(lambda);
  if (it == memo.end())
    it = memo.emplace(lambda, solve_front(thermo(), marginal_stencil(kernel(), aligned_spacing(lambda, kD0, kH1d)), 20.0))
             .first;
  return it->second;
}

inline const ClosedCurve& ellipse() {
  static const ClosedCurve c = make_ellipse(2.0, 1.0);
  return c;
}

inline ApproxSolutionParams default_params(double lambda) {
  ApproxSolutionParams a;
  a.lambda = lambda;
  return a;
}

inline const Setting2D& setting(double lambda) {
  static std::map<double, Setting2D> memo;
  auto it = memo.find(lambda);
  if (it == memo.end())
    it = memo.emplace(lambda, make_setting(thermo(), kernel(), ellipse(), default_params(lambda), kD0)).first;
  return it->second;
}

inline std::string config_path(const std::string& name) { return std::string(NLSPEC_SOURCE_DIR) + "/configs/" + name; }

}  // namespace nlspec::test
