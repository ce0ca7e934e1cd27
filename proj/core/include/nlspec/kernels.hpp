#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "nlspec/grid.hpp"

namespace nlspec {

// Spherically symmetric probability density on the plane, supported in the unit disc.
class RadialKernel {
 public:
  RadialKernel();

  static RadialKernel quartic_bump();
  // Tabulated radial profile, monotone-cubic interpolated and renormalized to unit mass.
  static RadialKernel from_samples(std::vector<double> radius, std::vector<double> value);

  double radial(double r) const;
  double radial_derivative(double r) const;
  double operator()(double x, double y) const;

  double norm_constant() const;
  double support_radius() const { return 1.0; }
  bool is_quartic() const;
  const std::string& family() const;
  std::uint64_t fingerprint() const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

RadialKernel make_default_kernel();
RadialKernel load_kernel_csv(const std::string& path);

// J̄^λ(x) = J̄(x/λ)/λ with J̄(x) = ∫ J(x, y) dy.
struct MarginalKernel {
  RadialKernel kernel;
  double lambda = 1.0;
  double operator()(double x) const;
  double support() const { return lambda; }
};

// Jʰ(z) = ∫ J(s, z) cos(h s) ds.
struct FourierSlice {
  RadialKernel kernel;
  double h = 0.0;
  double operator()(double z) const;
};

// ∫ J(ξ, z) ξ² dξ.
struct TangentialMoment {
  RadialKernel kernel;
  double operator()(double z) const;
};

MarginalKernel marginal(const RadialKernel& k, double lambda = 1.0);
FourierSlice fourier_slice(const RadialKernel& k, double h);
TangentialMoment tangential_moment(const RadialKernel& k);

// ∫ |∂_s J(s, z)| ds, which bounds |h|·|Jʰ(z)|.
double slice_decay_constant(const RadialKernel& k, double z);

// Weights w[j + half] for offsets j·spacing; row sums of a convolution matrix.
struct Stencil1D {
  double spacing = 0.0;
  std::vector<double> weights;

  int half() const { return static_cast<int>(weights.size() / 2); }
  double at(int offset) const {
    const int i = offset + half();
    return (i < 0 || i >= static_cast<int>(weights.size())) ? 0.0 : weights[i];
  }
  double mass() const;
};

// Sampled marginal h·J̄(jh), normalized to unit mass.
Stencil1D marginal_stencil(const RadialKernel& k, double h);
// Sampled slice h·Jʰ(jh) divided by the marginal stencil mass, so freq = 0 reproduces marginal_stencil.
Stencil1D slice_stencil(const RadialKernel& k, double h, double freq);

// Tangential lattice with spacing a (in units of λ) and normal spacing hz.
// The stencil is c·Σ_i a·hz·J(i·a, j·hz)·cos(freq·i·a) with c the inverse lattice mass.
double lattice_normalization(const RadialKernel& k, double a, double hz);
Stencil1D lattice_slice_stencil(const RadialKernel& k, double a, double hz, double freq);

// (J̄ ⋆_I f) at the grid nodes: truncated at the interval ends, never wrapped.
std::vector<double> restricted_convolve(const Stencil1D& st, const std::vector<double>& f);
// Midpoint-rule convolution of grid data with a continuous marginal, evaluated at x.
double restricted_convolve_at(const MarginalKernel& k, const Grid1D& g, const std::vector<double>& f, double x);
// Same on a rectangle with the planar kernel; f indexed by RectGrid::index.
double restricted_convolve_at(const RadialKernel& k, const RectGrid& g, const std::vector<double>& f, double x,
                              double y);

// Thread-safe memo of sampled stencils keyed by kernel fingerprint and grid parameters.
class StencilCache {
 public:
  const Stencil1D& marginal(const RadialKernel& k, double h);
  const Stencil1D& slice(const RadialKernel& k, double h, double freq);
  const Stencil1D& lattice(const RadialKernel& k, double a, double hz, double freq);
  std::size_t size() const;

 private:
  using Key = std::tuple<std::uint64_t, int, double, double, double>;
  mutable std::mutex mu_;
  std::map<Key, std::unique_ptr<Stencil1D>> memo_;
};

}  // namespace nlspec
