#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nlspec/eigen.hpp"
#include "nlspec/geometry.hpp"
#include "nlspec/grid.hpp"
#include "nlspec/kernels.hpp"
#include "nlspec/operators1d.hpp"
#include "nlspec/profile.hpp"

namespace nlspec {

// Periodic s-grid s_i = i·ds times a cell-centred normal grid.
struct CylinderGrid {
  double period = 0;
  int n_s = 0;
  Grid1D z;

  double ds() const { return period / n_s; }
  int n_z() const { return z.size(); }
  int size() const { return n_s * n_z(); }
  int index(int i, int j) const { return i * n_z() + j; }
};

struct DiscreteOperator2D {
  std::string label;
  SparseMatrix matrix;  // symmetric
  CylinderGrid grid;
  Vector weights;       // quadrature weight per cell; the matrix is symmetric in the unweighted form
  Vector multiplier;    // diagonal 1/σ
  double lambda = 1.0;

  int size() const { return static_cast<int>(matrix.rows()); }
};

struct Resolution2D {
  double per_lambda = 3.0;  // tangential nodes per λ
  double per_unit = 6.0;    // normal nodes per unit of z
  double z_max = 20.0;      // profile half-width
};

// Everything the λ-dependent 2D operators share.
struct Setting2D {
  Thermodynamics th;
  RadialKernel kernel;
  ClosedCurve curve;
  ApproxSolutionParams params;
  double lambda = 0.1;
  double d0 = 0.15;
  CylinderGrid grid;        // stretched grid on T × I_λ
  double a = 0;             // ds/λ
  double lattice_c = 0;     // inverse lattice mass
  FrontProfile profile;     // fixed point of the lattice marginal at spacing hz
  std::vector<double> k_half;  // curvature at s = m·ds/2

  double hz() const { return grid.z.h; }
  double curvature_mid(int i, int di) const;
};

// period > 0 replaces the curve length as the s-period (curvature is still read from the curve).
Setting2D make_setting(const Thermodynamics& th, const RadialKernel& k, const ClosedCurve& curve,
                       const ApproxSolutionParams& params, double d0, const Resolution2D& res = {},
                       double period = 0.0);

// Separable operator with the m̄ multiplier; periodic in s, truncated in z.
DiscreteOperator2D build_G_lambda(const Setting2D& st);
// Fourier block 𝓛^{kλ} of 𝓖^λ with the matched lattice stencil.
DiscreteOperator build_block(const Setting2D& st, double k);
// Curvilinear operator in the stretched variable. curved = false drops α (separable kernel, m_A multiplier).
DiscreteOperator2D build_A_cal(const Setting2D& st, bool curved = true);
// Operator on the (s, r) grid assembled from the curvilinear kernel.
DiscreteOperator2D build_L_lambda(const Setting2D& st);

// 𝓟V = p·(J^c V) with p = σ(m_A); self-adjoint for the 1/p-weighted inner product.
struct WeightedOperatorP {
  SparseMatrix kernel;  // J^c with quadrature weights
  Vector p;

  Vector apply(const Vector& v) const { return p.cwiseProduct(kernel * v); }
  // p^{1/2} J^c p^{1/2}, similar to 𝓟.
  SparseMatrix symmetric_form() const;
  // Number of applications after which the image of a one-cell indicator is strictly positive (-1 if never).
  int positivity_steps(int cell, int max_steps) const;
};
WeightedOperatorP build_P_weighted(const Setting2D& st);

// Full operator on the strip T × [−D0, D0] through the Euclidean kernel.
struct StripOperator {
  DiscreteOperator2D op;       // symmetrized: diag(1/σ) − c√(wᵢwⱼ)J^λ(ξᵢ−ξⱼ)
  TubularChart chart;          // strip chart, normal spacing λ·hz
  std::vector<double> r;       // r per cell
  double c_star = 0;           // inf 1/σ(m_A) over |r| >= d0/2
  int tube_half = 0;           // |j| <= tube_half lies in 𝒩(d0)
};
StripOperator build_full_A(const Setting2D& st, double D0_factor = 3.0);

struct CutoffScan {
  int k_bar = -1;
  int n = 0;
  std::vector<double> s_values;
  std::vector<double> outer_norm2;  // ‖η₂^k v‖²
  std::vector<bool> geometric_ok;   // (1−δ)^k Σ s_i bound, for k before k̄
  double delta_star = 0, delta = 0;
  int condition = 0;  // 1: s ≤ 0, 2: s ≤ δ*‖η₂v‖², 3: s ≤ λ²‖v‖²
};
// x: vector in the symmetrized coordinates of the strip operator.
CutoffScan cutoff_cross_term_scan(const StripOperator& A, const Vector& x, double lambda, double d0);

struct BridgeSample {
  double lhs = 0;    // ∫(Aηu)ηu
  double rhs = 0;    // ⟨û, L^λ û⟩
  double norm2 = 0;  // ‖u‖²
};
// Random u supported in the tube; u = ε_i iid uniform(−1,1) from the seed.
std::vector<BridgeSample> bridge_samples(const StripOperator& A, const DiscreteOperator2D& L, int count,
                                         unsigned seed);

}  // namespace nlspec
