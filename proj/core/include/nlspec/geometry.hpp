#pragma once

#include <memory>
#include <string>
#include <vector>

#include "nlspec/grid.hpp"
#include "nlspec/kernels.hpp"

namespace nlspec {

struct Vec2 {
  double x = 0, y = 0;
};

struct CurvePoint {
  Vec2 p;  // position
  Vec2 t;  // unit tangent
  Vec2 n;  // unit normal pointing into the enclosed region
  double k = 0;
};

// Arclength-parametrized closed curve, traversed counter-clockwise.
class ClosedCurve {
 public:
  ClosedCurve();  // unit circle
  double length() const;
  CurvePoint at(double s) const;
  double curvature(double s) const { return at(s).k; }
  double max_abs_curvature() const;
  const std::string& family() const;
  // ρ(s, r) − ρ(s2, r2), evaluated without cancellation where possible.
  Vec2 chord(double s, double r, double s2, double r2) const;
  // Same with the curve frames at s and s2 already evaluated.
  Vec2 chord(const CurvePoint& a, double s, double r, const CurvePoint& b, double s2, double r2) const;

  struct Impl;

 private:
  explicit ClosedCurve(std::shared_ptr<const Impl> p) : impl_(std::move(p)) {}
  std::shared_ptr<const Impl> impl_;
  friend ClosedCurve make_circle(double);
  friend ClosedCurve make_ellipse(double, double);
  friend ClosedCurve make_spline_curve(std::vector<Vec2>);
};

ClosedCurve make_circle(double R);
ClosedCurve make_ellipse(double a, double b);
// Periodic C² cubic spline through the points in the chord-length parameter, reparametrized by arclength.
ClosedCurve make_spline_curve(std::vector<Vec2> pts);
ClosedCurve load_curve_csv(const std::string& path);

// s − s2 reduced to [−L/2, L/2).
double periodic_diff(double s, double s2, double L);

struct TubularChart {
  ClosedCurve curve;
  double d0 = 0;
  int n_s = 0;
  Grid1D r;                    // cell-centred normal grid on [−d0, d0]
  std::vector<double> kappa;   // k(s_i)
  std::vector<CurvePoint> frame;
  double sup_k_d0 = 0;

  double ds() const { return curve.length() / n_s; }
  double s(int i) const { return i * ds(); }
  int n_r() const { return r.size(); }
  int size() const { return n_s * n_r(); }
  int index(int i, int j) const { return i * n_r() + j; }
  double alpha(int i, int j) const { return 1.0 - r.node(j) * kappa[i]; }
  double weight(int i, int j) const { return alpha(i, j) * ds() * r.h; }
  Vec2 map(int i, int j) const;
  // Σ α ds dr over the grid.
  double area() const;
};

// strict: require sup|k|·d0 <= 1/2. Otherwise only sup|k|·d0 < 1 (positive Jacobian).
TubularChart build_chart(const ClosedCurve& c, double d0, int n_s, int r_half, bool strict = true);

// J^λ((s−s')α(s*, r*), r−r') with the midpoint (s*, r*); zero outside the λ-box.
double curvilinear_kernel(const ClosedCurve& c, const RadialKernel& k, double lambda, double s, double s2, double r,
                          double r2);

// b of √(α(s,r)α(s',r')) = α(s*,r*)√(1+b).
double jacobian_mismatch(const ClosedCurve& c, double s, double s2, double r, double r2);

struct ScanResult {
  double max_value = 0;
  std::vector<double> values;
};

// Row norms ∫|J^λ(ρ(s,r)−ρ(s',r')) − curvilinear kernel| α(s',r') ds'dr' at sampled (s, r).
ScanResult expansion_remainder_scan(const ClosedCurve& c, const RadialKernel& k, double lambda, double d0, int samples,
                                    double s_offset = 0.0);
// max |b| over kernel-adjacent pairs.
ScanResult jacobian_mismatch_scan(const ClosedCurve& c, double lambda, double d0, int samples);
// ∬ J^λ(s,s',r,r')α(s*,r*) ds'dr' − 1 at sampled s and interior r.
ScanResult row_mass_scan(const ClosedCurve& c, const RadialKernel& k, double lambda, double d0, int samples);

// (B^λ v)(r) − (J̄^λ ⋆_I v)(r) on the r-grid at a fixed s, with the s'-integral done by quadrature.
struct CorrectionProfile {
  std::vector<double> correction;  // Γ v
  std::vector<double> envelope;    // J̄^λ ⋆_I |v|
};
CorrectionProfile gamma_correction(const ClosedCurve& c, const RadialKernel& k, double lambda, const Grid1D& rgrid,
                                   const std::vector<double>& v, double s);

}  // namespace nlspec
