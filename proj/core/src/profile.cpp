#include "nlspec/profile.hpp"

#include <algorithm>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nlspec/errors.hpp"
#include "nlspec/fit.hpp"

namespace nlspec {

Thermodynamics solve_mbeta(double beta) {
  if (!(beta > 1.0)) throw ConfigError("no positive root of m = tanh(beta m) for beta <= 1");
  auto f = [&](double m) { return m - std::tanh(beta * m); };
  double lo = 1e-6;
  while (f(lo) >= 0 && lo > 1e-300) lo *= 1e-3;
  boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits);
  std::uintmax_t it = 400;
  auto r = boost::math::tools::bisect(f, lo, 1.0, tol, it);
  double m = 0.5 * (r.first + r.second);
  // Polish with Newton; the root is simple.
  for (int k = 0; k < 3; ++k) {
    const double t = std::tanh(beta * m);
    m -= f(m) / (1.0 - beta * (1.0 - t * t));
  }
  return Thermodynamics{beta, m};
}

namespace {
double xlogx(double x) { return x > 0 ? x * std::log(x) : 0.0; }
}  // namespace

double potential(double m, const Thermodynamics& th) {
  if (!(std::abs(m) < 1.0)) throw NumericalError("potential evaluated at |m| >= 1");
  return -0.5 * m * m + (xlogx(0.5 * (1 + m)) + xlogx(0.5 * (1 - m))) / th.beta;
}

double potential_prime(double m, const Thermodynamics& th) {
  if (!(std::abs(m) < 1.0)) throw NumericalError("potential evaluated at |m| >= 1");
  return -m + std::atanh(m) / th.beta;
}

double mobility(double m, const Thermodynamics& th) {
  if (!(std::abs(m) <= 1.0)) throw NumericalError("mobility evaluated at |m| > 1");
  return th.beta * (1.0 - m * m);
}

double free_energy(const RectGrid& g, const std::vector<double>& m, const Thermodynamics& th, const RadialKernel& k) {
  if (static_cast<int>(m.size()) != g.size()) throw std::invalid_argument("data does not match grid");
  const double vb = potential(th.m_beta, th);
  const double a = g.cell_area();
  double bulk = 0, inter = 0;
  const int wi = static_cast<int>(std::ceil(1.0 / g.hx)), wj = static_cast<int>(std::ceil(1.0 / g.hy));
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      const double mi = m[g.index(i, j)];
      bulk += a * (potential(mi, th) - vb);
      for (int i2 = std::max(0, i - wi); i2 <= std::min(g.nx - 1, i + wi); ++i2)
        for (int j2 = std::max(0, j - wj); j2 <= std::min(g.ny - 1, j + wj); ++j2) {
          const double d = mi - m[g.index(i2, j2)];
          if (d == 0) continue;
          inter += a * a * k((i - i2) * g.hx, (j - j2) * g.hy) * d * d;
        }
    }
  return bulk + 0.25 * inter;
}

double FrontProfile::value(int j) const {
  const int i = center() + j;
  if (i < 0) return -th.m_beta;
  if (i >= grid.size()) return th.m_beta;
  return m[i];
}

double FrontProfile::derivative(int j) const {
  const int i = center() + j;
  if (i < 0 || i >= grid.size()) return 0.0;
  return dm[i];
}

namespace {

// J̄⋆m on the whole line with m extended by ±m_β.
std::vector<double> extended_convolve(const Stencil1D& st, const std::vector<double>& m, double mb) {
  const int n = static_cast<int>(m.size()), w = st.half();
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    double s = 0;
    for (int o = -w; o <= w; ++o) {
      const int j = i - o;
      const double v = j < 0 ? -mb : (j >= n ? mb : m[j]);
      s += st.weights[o + w] * v;
    }
    out[i] = s;
  }
  return out;
}

std::vector<double> centred_derivative(const std::vector<double>& m, double h, double mb) {
  const int n = static_cast<int>(m.size());
  auto at = [&](int j) { return j < 0 ? -mb : (j >= n ? mb : m[j]); };
  std::vector<double> d(n);
  for (int i = 0; i < n; ++i)
    d[i] = (0.75 * (at(i + 1) - at(i - 1)) - 0.15 * (at(i + 2) - at(i - 2)) + (at(i + 3) - at(i - 3)) / 60.0) / h;
  return d;
}

}  // namespace

FrontProfile solve_front(const Thermodynamics& th, const Stencil1D& st, double z_max, const FrontSolveOptions& opt) {
  if (!(th.beta > 1.0)) throw ConfigError("front profile requires beta > 1");
  const double h = st.spacing;
  if (!(h > 0) || h >= 1.0) throw ConfigError("profile grid spacing must lie in (0, 1)");
  if (z_max < 10.0 - 1e-9) throw ConfigError("profile half-width Z_max must be >= 10");
  const int half = static_cast<int>(std::ceil(z_max / h - 1e-9));
  const Grid1D g{h, half};
  const int n = g.size();
  const double mb = th.m_beta, Z = half * h;
  std::vector<double> m(n), nxt(n);
  std::vector<char> clamp(n);
  for (int i = 0; i < n; ++i) {
    const double z = g.node(i);
    m[i] = std::tanh(th.beta * mb * z);
    clamp[i] = std::abs(z) > Z - 1.0;
    if (clamp[i]) m[i] = z > 0 ? mb : -mb;
  }
  const double th_ = opt.damping;
  double upd = 0;
  int it = 0;
  for (; it < opt.max_iters; ++it) {
    const auto c = extended_convolve(st, m, mb);
    for (int i = 0; i < n; ++i) nxt[i] = (1 - th_) * m[i] + th_ * std::tanh(th.beta * c[i]);
    upd = 0;
    for (int i = 0; i < n; ++i) {
      double v = 0.5 * (nxt[i] - nxt[n - 1 - i]);
      if (clamp[i]) v = g.node(i) > 0 ? mb : -mb;
      upd = std::max(upd, std::abs(v - m[i]));
      m[i] = v;
    }
    m[half] = 0.0;
    if (upd < opt.tol) break;
  }
  if (!(upd < opt.tol)) {
    std::ostringstream os;
    os << "front iteration did not converge in " << opt.max_iters << " steps, last update " << upd;
    throw NumericalError(os.str());
  }
  FrontProfile p;
  p.th = th;
  p.grid = g;
  p.m = std::move(m);
  p.dm = centred_derivative(p.m, h, mb);
  p.stencil = st;
  p.iterations = it + 1;
  p.last_update = upd;
  return p;
}

FrontProfile solve_front(const Thermodynamics& th, const MarginalKernel& marginal, double z_max, int n,
                         const FrontSolveOptions& opt) {
  if (n < 3 || n % 2 == 0) throw ConfigError("profile grid size must be odd");
  const double h = 2.0 * z_max / (n - 1);
  if (h > 0.05 + 1e-15) throw ConfigError("profile grid must resolve the kernel support with >= 20 points");
  return solve_front(th, marginal_stencil(marginal.kernel, h), z_max, opt);
}

double fixed_point_residual(const FrontProfile& p, double margin) {
  const auto c = extended_convolve(p.stencil, p.m, p.th.m_beta);
  double r = 0;
  const double lim = p.z_max() - margin + 1e-12;
  for (int i = 0; i < p.grid.size(); ++i)
    if (std::abs(p.grid.node(i)) <= lim) r = std::max(r, std::abs(p.m[i] - std::tanh(p.th.beta * c[i])));
  return r;
}

double refined_fixed_point_residual(const FrontProfile& p, const RadialKernel& k, int refine, double margin) {
  const double h = p.grid.h, hf = h / refine;
  const int n = p.grid.size();
  boost::math::interpolators::cardinal_cubic_b_spline<double> sp(p.m.data(), n, p.grid.node(0), h);
  const Grid1D fine{hf, p.grid.half * refine};
  std::vector<double> mf(fine.size());
  for (int i = 0; i < fine.size(); ++i) mf[i] = sp(fine.node(i));
  const auto conv = extended_convolve(marginal_stencil(k, hf), mf, p.th.m_beta);
  double r = 0;
  const double lim = p.z_max() - margin + 1e-12;
  for (int i = 0; i < n; ++i) {
    if (std::abs(p.grid.node(i)) > lim) continue;
    const double c = conv[i * refine];
    r = std::max(r, std::abs(p.m[i] - std::tanh(p.th.beta * c)));
  }
  return r;
}

DecayFit decay_fit_window(const FrontProfile& p, double z_lo, double z_hi, double floor) {
  std::vector<double> x, y;
  const double mb2 = p.th.m_beta * p.th.m_beta;
  for (int i = p.center(); i < p.grid.size(); ++i) {
    const double z = p.grid.node(i);
    if (z < z_lo - 1e-12 || z > z_hi + 1e-12) continue;
    const double d = mb2 - p.m[i] * p.m[i];
    if (d > floor) {
      x.push_back(z);
      y.push_back(d);
    }
  }
  DecayFit f;
  f.z_lo = z_lo;
  f.z_hi = z_hi;
  f.points = static_cast<int>(x.size());
  if (x.size() < 2) return f;
  const LineFit lf = fit_semilog(x, y);
  f.alpha = -lf.slope;
  f.c = std::exp(lf.intercept);
  f.r2 = lf.r2;
  return f;
}

DecayFit decay_fit(const FrontProfile& p, double floor, int min_points) {
  double lo = p.z_max() / 3.0, hi = 2.0 * p.z_max() / 3.0;
  while (hi >= 1.0) {
    DecayFit f = decay_fit_window(p, lo, hi, floor);
    if (f.points >= min_points) {
      if (!(f.alpha > 0)) throw NumericalError("front decay fit produced a nonpositive rate");
      return f;
    }
    lo *= 0.5;
    hi *= 0.5;
  }
  throw NumericalError("profile saturated, reduce Z_max");
}

ApproxSolutionParams ApproxSolutionParams::zero(double lambda) {
  ApproxSolutionParams a;
  a.lambda = lambda;
  a.h1_scale = 0;
  a.g_amplitude = 0;
  a.phi_amplitude = 0;
  a.q_amplitude = 0;
  return a;
}

double approx_solution(const ApproxSolutionParams& a, const FrontProfile& p, double L, double s, int j) {
  const double z = j * p.grid.h;
  const double w = 2.0 * std::numbers::pi * s / L;
  const double bump = std::exp(-z * z);
  const double g = a.g_amplitude * std::cos(a.g_mode * w);
  const double phi = a.phi_amplitude * std::cos(a.phi_mode * w) * bump;
  const double q = a.q_amplitude * std::cos(w) * bump;
  return p.value(j) + a.lambda * (a.h1_scale * p.derivative(j) * g + phi) + a.lambda * a.lambda * q;
}

ApproxField build_mA(const ApproxSolutionParams& a, const FrontProfile& p, const TubularChart& chart,
                     double sigma_floor) {
  if (std::abs(chart.r.h - a.lambda * p.grid.h) > 1e-12 * chart.r.h)
    throw std::invalid_argument("chart normal grid is not the scaled profile grid");
  ApproxField f;
  f.m.resize(chart.size());
  f.min_sigma = p.th.beta;
  const double L = chart.curve.length();
  for (int i = 0; i < chart.n_s; ++i)
    for (int j = 0; j < chart.n_r(); ++j) {
      const double v = approx_solution(a, p, L, chart.s(i), j - chart.r.half);
      f.m[chart.index(i, j)] = v;
      f.max_abs = std::max(f.max_abs, std::abs(v));
      if (std::abs(v) < 1.0) f.min_sigma = std::min(f.min_sigma, mobility(v, p.th));
    }
  if (f.max_abs >= 1.0 || f.min_sigma < sigma_floor) {
    std::ostringstream os;
    os << "mobility floor violated at lambda = " << a.lambda << ": max|m_A| = " << f.max_abs
       << ", min sigma = " << (f.max_abs >= 1.0 ? 0.0 : f.min_sigma);
    throw NumericalError(os.str());
  }
  const double ds = chart.ds();
  for (int i = 0; i < chart.n_s; ++i) {
    const int ip = (i + 1) % chart.n_s, im = (i + chart.n_s - 1) % chart.n_s;
    for (int j = 0; j < chart.n_r(); ++j)
      f.max_tangential_gradient = std::max(
          f.max_tangential_gradient, std::abs(f.m[chart.index(ip, j)] - f.m[chart.index(im, j)]) / (2 * ds));
  }
  double orth = 0;
  for (int i = 0; i < p.grid.size(); ++i) {
    const double mm = p.m[i], sg = mobility(mm, p.th), d = p.dm[i];
    orth += p.grid.h * mm / (sg * sg) * (a.h1_scale * d) * d * d;
  }
  f.orthogonality = orth;
  return f;
}

}  // namespace nlspec
