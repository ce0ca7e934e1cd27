#pragma once

#include <string>
#include <vector>

#include "nlspec/eigen.hpp"
#include "nlspec/grid.hpp"
#include "nlspec/kernels.hpp"
#include "nlspec/profile.hpp"

namespace nlspec {

// Symmetric matrix discretizing V/σ − K⋆V on a uniform grid with weight grid.h per node.
struct DiscreteOperator {
  std::string label;
  Matrix matrix;
  Grid1D grid;
  Vector multiplier;  // diagonal 1/σ
  double lambda = 1.0;

  int size() const { return static_cast<int>(matrix.rows()); }
};

// Profile grid spacing closest to target_h for which ±d0/λ are cell edges.
double aligned_spacing(double lambda, double d0, double target_h);
// I_λ grid on the profile nodes; throws unless the profile spacing is aligned.
Grid1D interval_grid(const FrontProfile& p, double lambda, double d0);

DiscreteOperator build_L_whole(const FrontProfile& p);
DiscreteOperator build_L0(const FrontProfile& p, double lambda, double d0);
// Restricted operator on I_λ with an arbitrary even stencil and the m̄ multiplier.
DiscreteOperator build_interval_operator(const std::string& label, const FrontProfile& p, const Stencil1D& st,
                                         double lambda, double d0);
DiscreteOperator build_Ls(const FrontProfile& p, const ApproxSolutionParams& a, double L, double s, double d0,
                          double sigma_floor = 0.05);
// Same operator in the unstretched variable r = λz with kernel J̄^λ.
DiscreteOperator build_L1s(const FrontProfile& p, const RadialKernel& k, const ApproxSolutionParams& a, double L,
                           double s, double d0, double sigma_floor = 0.05);
DiscreteOperator build_Lh(const FrontProfile& p, const RadialKernel& k, double h, double lambda, double d0);

// max |1/σ(m_A) − [1/σ(m̄) + λ·2m̄(h₁g + φ)/(β(1−m̄²)²)]| on the I_λ grid.
double mobility_expansion_defect(const FrontProfile& p, const ApproxSolutionParams& a, double L, double s, double d0);

// Principal eigenpair with the sign fixed by the value at z = 0.
struct Principal {
  double value = 0;
  Vector vector;  // unit norm in Σ h v²
  double second = 0;
};
Principal principal_pair(const DiscreteOperator& op);

struct DecayReport {
  int index = 0;
  double eigenvalue = 0;
  double rate = 0;
  double r2 = 0;
  int points = 0;
  bool usable = false;
  std::string note;
};

// Exponential tail fit of |ψ| on |z| >= z0 for every eigenpair below the threshold.
std::vector<DecayReport> eigenfunction_decay_check(const DiscreteOperator& op, const Spectrum& sp, double threshold,
                                                   double z0, double floor = 1e-13);

}  // namespace nlspec
