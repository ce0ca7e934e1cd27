#include "nlspec/kernels.hpp"

#include <algorithm>
#include <cmath>

// pchip.hpp in Boost 1.74 calls isnan unqualified.
using std::isnan;

#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "nlspec/errors.hpp"

namespace nlspec {

namespace {

using GL = boost::math::quadrature::gauss<double, 20>;

template <class F>
double panels(F&& f, double a, double b, int n) {
  if (b <= a) return 0.0;
  const double w = (b - a) / n;
  double s = 0.0;
  for (int p = 0; p < n; ++p) s += GL::integrate(f, a + p * w, a + (p + 1) * w);
  return s;
}

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h = 14695981039346656037ULL) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t mix(std::uint64_t h, double v) { return fnv1a(&v, sizeof v, h); }

}  // namespace

struct RadialKernel::Impl {
  std::string family = "quartic";
  bool quartic = true;
  double c = 3.0 / std::numbers::pi;
  std::uint64_t fp = 0x51a7c0ffee5eedULL;
  std::shared_ptr<boost::math::interpolators::pchip<std::vector<double>>> spline;

  // Unnormalized profile.
  double raw(double r) const {
    if (r >= 1.0) return 0.0;
    if (quartic) {
      const double u = 1.0 - r * r;
      return u * u;
    }
    return std::max(0.0, (*spline)(r));
  }
  double raw_prime(double r) const {
    if (r >= 1.0) return 0.0;
    if (quartic) return -4.0 * r * (1.0 - r * r);
    return spline->prime(r);
  }
};

RadialKernel::RadialKernel() : impl_(std::make_shared<const Impl>()) {}

RadialKernel RadialKernel::quartic_bump() { return RadialKernel(); }

RadialKernel RadialKernel::from_samples(std::vector<double> radius, std::vector<double> value) {
  if (radius.size() != value.size() || radius.size() < 4)
    throw ConfigError("kernel table needs at least 4 (radius, value) rows");
  for (std::size_t i = 0; i < radius.size(); ++i) {
    if (!std::isfinite(radius[i]) || !std::isfinite(value[i])) throw ConfigError("kernel table has non-finite entries");
    if (value[i] < 0) throw ConfigError("kernel values must be nonnegative");
    if (i > 0 && radius[i] <= radius[i - 1]) throw ConfigError("kernel radii must be strictly increasing");
  }
  if (radius.front() != 0.0) throw ConfigError("kernel table must start at radius 0");
  if (radius.back() > 1.0) throw ConfigError("kernel support must lie in the unit disc");
  if (radius.back() < 1.0) {
    radius.push_back(1.0);
    value.push_back(0.0);
  }
  for (std::size_t i = 1; i < value.size(); ++i)
    if (value[i] > value[i - 1] * (1 + 1e-12) + 1e-300) throw ConfigError("kernel profile must be nonincreasing");

  auto impl = std::make_shared<Impl>();
  impl->family = "tabulated";
  impl->quartic = false;
  std::uint64_t h = fnv1a("tab", 3);
  for (std::size_t i = 0; i < radius.size(); ++i) h = mix(mix(h, radius[i]), value[i]);
  impl->fp = h;
  impl->spline =
      std::make_shared<boost::math::interpolators::pchip<std::vector<double>>>(std::move(radius), std::move(value));
  impl->c = 1.0;
  const double mass =
      2.0 * std::numbers::pi * panels([&](double r) { return impl->raw(r) * r; }, 0.0, 1.0, 64);
  if (!(mass > 0)) throw ConfigError("kernel has zero mass");
  impl->c = 1.0 / mass;
  RadialKernel k;
  k.impl_ = impl;
  return k;
}

double RadialKernel::radial(double r) const { return impl_->c * impl_->raw(std::abs(r)); }
double RadialKernel::radial_derivative(double r) const { return impl_->c * impl_->raw_prime(std::abs(r)); }
double RadialKernel::operator()(double x, double y) const { return radial(std::sqrt(x * x + y * y)); }
double RadialKernel::norm_constant() const { return impl_->c; }
bool RadialKernel::is_quartic() const { return impl_->quartic; }
const std::string& RadialKernel::family() const { return impl_->family; }
std::uint64_t RadialKernel::fingerprint() const { return impl_->fp; }

RadialKernel make_default_kernel() { return RadialKernel::quartic_bump(); }

RadialKernel load_kernel_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open kernel file: " + path);
  std::vector<double> r, v;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double a, b;
    if (!(ls >> a >> b)) {
      if (r.empty()) continue;  // header
      throw ConfigError("malformed kernel row: " + line);
    }
    r.push_back(a);
    v.push_back(b);
  }
  return RadialKernel::from_samples(std::move(r), std::move(v));
}

double MarginalKernel::operator()(double x) const {
  const double u = std::abs(x) / lambda;
  if (u >= 1.0) return 0.0;
  if (kernel.is_quartic()) return 16.0 / (5.0 * std::numbers::pi) * std::pow(1.0 - u * u, 2.5) / lambda;
  const double a = std::sqrt(1.0 - u * u);
  return 2.0 * panels([&](double y) { return kernel(u, y); }, 0.0, a, 8) / lambda;
}

double FourierSlice::operator()(double z) const {
  const double u = std::abs(z);
  if (u >= 1.0) return 0.0;
  const double a = std::sqrt(1.0 - u * u);
  const int n = std::max(4, static_cast<int>(std::ceil(std::abs(h) * a / 2.0)));
  return 2.0 * panels([&](double s) { return kernel(s, u) * std::cos(h * s); }, 0.0, a, n);
}

double TangentialMoment::operator()(double z) const {
  const double u = std::abs(z);
  if (u >= 1.0) return 0.0;
  const double a = std::sqrt(1.0 - u * u);
  return 2.0 * panels([&](double s) { return kernel(s, u) * s * s; }, 0.0, a, 4);
}

MarginalKernel marginal(const RadialKernel& k, double lambda) { return MarginalKernel{k, lambda}; }
FourierSlice fourier_slice(const RadialKernel& k, double h) { return FourierSlice{k, h}; }
TangentialMoment tangential_moment(const RadialKernel& k) { return TangentialMoment{k}; }

double slice_decay_constant(const RadialKernel& k, double z) {
  const double u = std::abs(z);
  if (u >= 1.0) return 0.0;
  const double a = std::sqrt(1.0 - u * u);
  return 2.0 * panels(
                   [&](double s) {
                     const double r = std::sqrt(s * s + u * u);
                     return r > 0 ? std::abs(k.radial_derivative(r)) * s / r : 0.0;
                   },
                   0.0, a, 8);
}

double Stencil1D::mass() const {
  double m = 0;
  for (double w : weights) m += w;
  return m;
}

namespace {

int reach(double h) { return std::max(0, static_cast<int>(std::ceil(1.0 / h)) - 1); }

Stencil1D sample_marginal(const RadialKernel& k, double h) {
  Stencil1D st{h, {}};
  const int w = reach(h);
  const MarginalKernel m{k, 1.0};
  st.weights.resize(2 * w + 1);
  for (int j = -w; j <= w; ++j) st.weights[j + w] = h * m(j * h);
  return st;
}

}  // namespace

Stencil1D marginal_stencil(const RadialKernel& k, double h) {
  if (!(h > 0)) throw std::invalid_argument("stencil spacing must be positive");
  Stencil1D st = sample_marginal(k, h);
  const double m = st.mass();
  for (double& w : st.weights) w /= m;
  return st;
}

Stencil1D slice_stencil(const RadialKernel& k, double h, double freq) {
  if (!(h > 0)) throw std::invalid_argument("stencil spacing must be positive");
  if (freq == 0.0) return marginal_stencil(k, h);
  const double m = sample_marginal(k, h).mass();
  Stencil1D st{h, {}};
  const int w = reach(h);
  const FourierSlice f{k, freq};
  st.weights.resize(2 * w + 1);
  for (int j = -w; j <= w; ++j) st.weights[j + w] = h * f(j * h) / m;
  return st;
}

double lattice_normalization(const RadialKernel& k, double a, double hz) {
  const int ni = reach(a), nj = reach(hz);
  double s = 0;
  for (int i = -ni; i <= ni; ++i)
    for (int j = -nj; j <= nj; ++j) s += a * hz * k(i * a, j * hz);
  return 1.0 / s;
}

Stencil1D lattice_slice_stencil(const RadialKernel& k, double a, double hz, double freq) {
  const double c = lattice_normalization(k, a, hz);
  const int ni = reach(a), nj = reach(hz);
  Stencil1D st{hz, std::vector<double>(2 * nj + 1, 0.0)};
  for (int j = -nj; j <= nj; ++j) {
    double s = 0;
    for (int i = -ni; i <= ni; ++i) s += k(i * a, j * hz) * std::cos(freq * i * a);
    st.weights[j + nj] = c * a * hz * s;
  }
  return st;
}

std::vector<double> restricted_convolve(const Stencil1D& st, const std::vector<double>& f) {
  const int n = static_cast<int>(f.size()), w = st.half();
  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double s = 0;
    const int lo = std::max(0, i - w), hi = std::min(n - 1, i + w);
    for (int j = lo; j <= hi; ++j) s += st.weights[i - j + w] * f[j];
    out[i] = s;
  }
  return out;
}

double restricted_convolve_at(const MarginalKernel& k, const Grid1D& g, const std::vector<double>& f, double x) {
  if (g.h > k.support()) throw std::invalid_argument("grid spacing exceeds kernel support");
  if (static_cast<int>(f.size()) != g.size()) throw std::invalid_argument("data does not match grid");
  const int lo = std::max(0, static_cast<int>(std::floor((x - k.support()) / g.h)) + g.half);
  const int hi = std::min(g.size() - 1, static_cast<int>(std::ceil((x + k.support()) / g.h)) + g.half);
  double s = 0;
  for (int i = lo; i <= hi; ++i) s += g.h * k(x - g.node(i)) * f[i];
  return s;
}

double restricted_convolve_at(const RadialKernel& k, const RectGrid& g, const std::vector<double>& f, double x,
                              double y) {
  if (std::max(g.hx, g.hy) > k.support_radius()) throw std::invalid_argument("grid spacing exceeds kernel support");
  if (static_cast<int>(f.size()) != g.size()) throw std::invalid_argument("data does not match grid");
  double s = 0;
  const int i0 = std::max(0, static_cast<int>(std::floor((x - 1 - g.x0) / g.hx)));
  const int i1 = std::min(g.nx - 1, static_cast<int>(std::ceil((x + 1 - g.x0) / g.hx)));
  const int j0 = std::max(0, static_cast<int>(std::floor((y - 1 - g.y0) / g.hy)));
  const int j1 = std::min(g.ny - 1, static_cast<int>(std::ceil((y + 1 - g.y0) / g.hy)));
  for (int i = i0; i <= i1; ++i)
    for (int j = j0; j <= j1; ++j) s += g.cell_area() * k(x - g.x(i), y - g.y(j)) * f[g.index(i, j)];
  return s;
}

const Stencil1D& StencilCache::marginal(const RadialKernel& k, double h) {
  std::lock_guard lk(mu_);
  auto& p = memo_[Key{k.fingerprint(), 0, h, 0.0, 0.0}];
  if (!p) p = std::make_unique<Stencil1D>(marginal_stencil(k, h));
  return *p;
}

const Stencil1D& StencilCache::slice(const RadialKernel& k, double h, double freq) {
  std::lock_guard lk(mu_);
  auto& p = memo_[Key{k.fingerprint(), 1, h, freq, 0.0}];
  if (!p) p = std::make_unique<Stencil1D>(slice_stencil(k, h, freq));
  return *p;
}

const Stencil1D& StencilCache::lattice(const RadialKernel& k, double a, double hz, double freq) {
  std::lock_guard lk(mu_);
  auto& p = memo_[Key{k.fingerprint(), 2, a, hz, freq}];
  if (!p) p = std::make_unique<Stencil1D>(lattice_slice_stencil(k, a, hz, freq));
  return *p;
}

std::size_t StencilCache::size() const {
  std::lock_guard lk(mu_);
  return memo_.size();
}

}  // namespace nlspec
