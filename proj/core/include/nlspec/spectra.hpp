#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "nlspec/eigen.hpp"
#include "nlspec/operators1d.hpp"
#include "nlspec/operators2d.hpp"

namespace nlspec {

// Principal eigenvector ψ₀^{kλ} for every Fourier index k = 2πn/L with |kλ| <= h0.
struct BlockTable {
  double h0 = 0;
  std::vector<int> modes;            // n
  std::vector<double> k;             // 2πn/L
  std::vector<Principal> principal;  // vector unit in Σ hz ψ²
};
BlockTable build_block_table(const Setting2D& st, double h0);

struct ModalCoefficient {
  int mode = 0;
  double k = 0;
  std::complex<double> alpha;
  double perp_norm2 = 0;  // ‖u_k − α_k ψ₀^{kλ}‖²
};

struct DecompositionResult {
  std::vector<double> Z;   // on the s-grid
  Vector VR;               // on the stretched grid, V − Zψ₀⁰
  double norm_Z2 = 0;      // ‖Z‖²
  double norm_VR2 = 0;     // ‖V^R‖²
  double grad_Z2 = 0;      // Σ k²|α_k|²
  double high_norm2 = 0;   // energy in blocks with |kλ| > h0
  double reconstruction = 0;  // max |Zψ₀⁰ + V^R − V|
  std::vector<ModalCoefficient> modal;
};

// x holds grid values of V(s, z) = √λ·û(s, λz) up to scale; normalized internally in ds dz.
DecompositionResult low_energy_decompose(const Setting2D& st, const BlockTable& table, const Vector& x);

// Finite-volume Laplacian on the strip with the metric α, periodic in s and Neumann in r.
class PoissonSolver {
 public:
  // flat: α ≡ 1 in the metric.
  explicit PoissonSolver(const TubularChart& chart, bool flat = false);
  ~PoissonSolver();
  PoissonSolver(PoissonSolver&&) noexcept;

  const SparseMatrix& stiffness() const { return S_; }  // ∫∇w·∇φ, symmetric, constants in the kernel
  const Vector& weights() const { return W_; }          // cell volumes
  // Δw = v for v with Σ W v = 0; returns w with Σ W w = 0.
  Vector solve(const Vector& v) const;
  double residual(const Vector& w, const Vector& v) const;  // ‖S w + W v‖ / ‖W v‖
  double dirichlet(const Vector& w) const { return w.dot(S_ * w); }

 private:
  SparseMatrix S_;
  Vector W_;
  struct Factor;
  std::unique_ptr<Factor> f_;
};

struct HMinusResult {
  double value = 0;    // min (1/λ)⟨v, Av⟩/‖∇w‖²
  Vector w;            // minimizer potential, Σ W w = 0
  Vector v;            // density −Δw, physical values
  double grad_w2 = 0;  // ‖∇w‖²
  double v_norm2 = 0;  // Σ W v²
};
// a_sym acts on √W-scaled coordinates (as build_full_A returns it); identity gives the Laplacian bound.
HMinusResult hminus_rayleigh_floor(const SparseMatrix& a_sym, const PoissonSolver& solver, double lambda, int nev = 2);

// Number of values strictly below the threshold.
int count_below(const Vector& values, double threshold);

// Hausdorff distance between two finite sets of reals.
double hausdorff(std::vector<double> a, std::vector<double> b);

}  // namespace nlspec
