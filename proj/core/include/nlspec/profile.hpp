#pragma once

#include <memory>
#include <vector>

#include "nlspec/geometry.hpp"
#include "nlspec/grid.hpp"
#include "nlspec/kernels.hpp"

namespace nlspec {

struct Thermodynamics {
  double beta = 2.0;
  double m_beta = 0.0;
};

Thermodynamics solve_mbeta(double beta);

// Double-well V(m) = −m²/2 + (1/β)[(1+m)/2 ln((1+m)/2) + (1−m)/2 ln((1−m)/2)].
double potential(double m, const Thermodynamics& th);
double potential_prime(double m, const Thermodynamics& th);
// σ(m) = β(1 − m²).
double mobility(double m, const Thermodynamics& th);

// ∫_Q [V(m) − V(m_β)] + ¼∬_{Q×Q} J(x−y)[m(x) − m(y)]², midpoint rule on the rectangle.
double free_energy(const RectGrid& g, const std::vector<double>& m, const Thermodynamics& th, const RadialKernel& k);

struct FrontSolveOptions {
  double damping = 0.5;
  double tol = 1e-12;
  int max_iters = 500000;
};

struct FrontProfile {
  Thermodynamics th;
  Grid1D grid;
  std::vector<double> m;   // m̄ at grid nodes
  std::vector<double> dm;  // m̄′ by 7-point centred differences
  Stencil1D stencil;       // the marginal stencil the profile is a fixed point of
  int iterations = 0;
  double last_update = 0;

  int center() const { return grid.half; }
  // Node offset j from z = 0; ±m_β beyond the grid.
  double value(int j) const;
  double derivative(int j) const;
  double z_max() const { return grid.half * grid.h; }
};

FrontProfile solve_front(const Thermodynamics& th, const Stencil1D& stencil, double z_max,
                         const FrontSolveOptions& opt = {});
// Grid of n points on [−Z_max, Z_max] with the sampled marginal.
FrontProfile solve_front(const Thermodynamics& th, const MarginalKernel& marginal, double z_max, int n,
                         const FrontSolveOptions& opt = {});

// sup |m̄ − tanh(β J̄⋆m̄)| over nodes at least `margin` inside the grid edge.
double fixed_point_residual(const FrontProfile& p, double margin = 1.0);
// Same residual with the profile cubic-interpolated onto a grid of spacing h/refine.
double refined_fixed_point_residual(const FrontProfile& p, const RadialKernel& k, int refine = 2, double margin = 1.0);

struct DecayFit {
  double alpha = 0;
  double c = 0;
  double r2 = 0;
  double z_lo = 0, z_hi = 0;
  int points = 0;
};

// Fit of log(m_β² − m̄²) against z on [Z/3, 2Z/3], halved toward 0 until enough values clear the floor.
DecayFit decay_fit(const FrontProfile& p, double floor = 1e-10, int min_points = 10);
DecayFit decay_fit_window(const FrontProfile& p, double z_lo, double z_hi, double floor = 1e-10);

struct ApproxSolutionParams {
  double lambda = 0.1;
  double h1_scale = 1.0;  // h₁ = h1_scale·m̄′
  double g_amplitude = 0.5;
  int g_mode = 1;
  double phi_amplitude = 0.1;
  int phi_mode = 1;
  double q_amplitude = 0.0;

  static ApproxSolutionParams zero(double lambda);
  bool is_zero() const { return h1_scale * g_amplitude == 0 && phi_amplitude == 0 && q_amplitude == 0; }
};

// m_A at arclength s (curve length L) and stretched-grid node j of the profile.
double approx_solution(const ApproxSolutionParams& a, const FrontProfile& p, double L, double s, int j);

struct ApproxField {
  std::vector<double> m;  // chart index order
  double min_sigma = 0;
  double max_abs = 0;
  double max_tangential_gradient = 0;  // sup |∂_s m_A| by centred differences
  // ∫ (m̄/σ²(m̄)) h₁ (m̄′)² dz on the profile grid.
  double orthogonality = 0;
};

// m_A on a chart whose normal nodes are λ times profile nodes. Throws if σ(m_A) < floor anywhere.
ApproxField build_mA(const ApproxSolutionParams& a, const FrontProfile& p, const TubularChart& chart,
                     double sigma_floor = 0.05);

}  // namespace nlspec
