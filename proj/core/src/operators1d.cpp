#include "nlspec/operators1d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nlspec/errors.hpp"
#include "nlspec/fit.hpp"

namespace nlspec {

double aligned_spacing(double lambda, double d0, double target_h) {
  return Grid1D::fitted(d0 / lambda, target_h).h;
}

Grid1D interval_grid(const FrontProfile& p, double lambda, double d0) {
  const double Z = d0 / lambda, h = p.grid.h;
  const int J = static_cast<int>(std::lround(Z / h - 0.5));
  if (J < 1 || std::abs((J + 0.5) * h - Z) > 1e-9 * Z) {
    std::ostringstream os;
    os << "profile spacing " << h << " is not aligned with the interval half-width " << Z;
    throw std::invalid_argument(os.str());
  }
  if (J > p.grid.half) throw std::invalid_argument("profile grid shorter than the interval");
  return Grid1D{h, J};
}

namespace {

DiscreteOperator assemble(const std::string& label, const Grid1D& g, const Vector& mult, const Stencil1D& st,
                          double lambda) {
  const int n = g.size(), w = st.half();
  DiscreteOperator op;
  op.label = label;
  op.grid = g;
  op.multiplier = mult;
  op.lambda = lambda;
  op.matrix = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    op.matrix(i, i) = mult[i];
    for (int j = std::max(0, i - w); j <= std::min(n - 1, i + w); ++j) op.matrix(i, j) -= st.at(i - j);
  }
  return op;
}

Vector front_multiplier(const FrontProfile& p, const Grid1D& g) {
  Vector d(g.size());
  for (int i = 0; i < g.size(); ++i) d[i] = 1.0 / mobility(p.value(i - g.half), p.th);
  return d;
}

Vector approx_multiplier(const FrontProfile& p, const ApproxSolutionParams& a, double L, double s, const Grid1D& g,
                         double floor) {
  Vector d(g.size());
  for (int i = 0; i < g.size(); ++i) {
    const double m = approx_solution(a, p, L, s, i - g.half);
    const double sg = std::abs(m) < 1 ? mobility(m, p.th) : 0.0;
    if (sg < floor) {
      std::ostringstream os;
      os << "mobility floor violated at lambda = " << a.lambda << ", s = " << s << ": sigma = " << sg;
      throw NumericalError(os.str());
    }
    d[i] = 1.0 / sg;
  }
  return d;
}

}  // namespace

DiscreteOperator build_L_whole(const FrontProfile& p) {
  if (p.z_max() < 10.0 - 1e-9) throw ConfigError("whole-line proxy needs Z_max >= 10");
  return assemble("L", p.grid, front_multiplier(p, p.grid), p.stencil, 1.0);
}

DiscreteOperator build_interval_operator(const std::string& label, const FrontProfile& p, const Stencil1D& st,
                                         double lambda, double d0) {
  const Grid1D g = interval_grid(p, lambda, d0);
  if (std::abs(st.spacing - g.h) > 1e-14 * g.h) throw std::invalid_argument("stencil spacing differs from the grid");
  return assemble(label, g, front_multiplier(p, g), st, lambda);
}

DiscreteOperator build_L0(const FrontProfile& p, double lambda, double d0) {
  return build_interval_operator("L0", p, p.stencil, lambda, d0);
}

DiscreteOperator build_Ls(const FrontProfile& p, const ApproxSolutionParams& a, double L, double s, double d0,
                          double sigma_floor) {
  const Grid1D g = interval_grid(p, a.lambda, d0);
  return assemble("Ls", g, approx_multiplier(p, a, L, s, g, sigma_floor), p.stencil, a.lambda);
}

DiscreteOperator build_L1s(const FrontProfile& p, const RadialKernel& k, const ApproxSolutionParams& a, double L,
                           double s, double d0, double sigma_floor) {
  const Grid1D gz = interval_grid(p, a.lambda, d0);
  const Grid1D gr{a.lambda * gz.h, gz.half};
  const MarginalKernel mk{k, a.lambda};
  const int w = static_cast<int>(std::ceil(a.lambda / gr.h));
  double mass = 0;
  for (int j = -w; j <= w; ++j) mass += gr.h * mk(j * gr.h);
  const int n = gr.size();
  DiscreteOperator op;
  op.label = "L1s";
  op.grid = gr;
  op.lambda = a.lambda;
  op.multiplier = approx_multiplier(p, a, L, s, gz, sigma_floor);
  op.matrix = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    op.matrix(i, i) = op.multiplier[i];
    for (int j = std::max(0, i - w); j <= std::min(n - 1, i + w); ++j)
      op.matrix(i, j) -= gr.h * mk(gr.node(i) - gr.node(j)) / mass;
  }
  return op;
}

DiscreteOperator build_Lh(const FrontProfile& p, const RadialKernel& k, double h, double lambda, double d0) {
  DiscreteOperator op = build_interval_operator("Lh", p, slice_stencil(k, p.grid.h, h), lambda, d0);
  return op;
}

double mobility_expansion_defect(const FrontProfile& p, const ApproxSolutionParams& a, double L, double s, double d0) {
  const Grid1D g = interval_grid(p, a.lambda, d0);
  const double w = 2.0 * std::numbers::pi * s / L;
  double mx = 0;
  for (int i = 0; i < g.size(); ++i) {
    const int j = i - g.half;
    const double z = j * g.h, mb = p.value(j), b = p.th.beta;
    const double corr = a.h1_scale * p.derivative(j) * a.g_amplitude * std::cos(a.g_mode * w) +
                        a.phi_amplitude * std::cos(a.phi_mode * w) * std::exp(-z * z);
    const double base = 1.0 / (b * (1 - mb * mb));
    const double approx = base * (1.0 + a.lambda * 2.0 * mb / (1 - mb * mb) * corr);
    const double exact = 1.0 / mobility(approx_solution(a, p, L, s, j), p.th);
    mx = std::max(mx, std::abs(exact - approx));
  }
  return mx;
}

Principal principal_pair(const DiscreteOperator& op) {
  const Spectrum sp = lowest_dense(op.matrix, 2);
  Principal pr;
  pr.value = sp.values[0];
  pr.second = sp.values.size() > 1 ? sp.values[1] : 0.0;
  pr.vector = sp.vectors.col(0) / std::sqrt(op.grid.h);
  const int c = op.grid.half;
  if (pr.vector[c] < 0) pr.vector = -pr.vector;
  return pr;
}

std::vector<DecayReport> eigenfunction_decay_check(const DiscreteOperator& op, const Spectrum& sp, double threshold,
                                                   double z0, double floor) {
  std::vector<DecayReport> out;
  const Grid1D& g = op.grid;
  for (int k = 0; k < sp.size(); ++k) {
    if (!(sp.values[k] < threshold)) continue;
    DecayReport r;
    r.index = k;
    r.eigenvalue = sp.values[k];
    const Vector v = sp.vectors.col(k);
    const double vmax = v.cwiseAbs().maxCoeff();
    // Pool both tails, using the side-maximum envelope so sign changes do not spoil the fit.
    std::vector<double> x, y;
    for (int j = g.half; j >= 0; --j) {
      const double z = j * g.h;
      if (z < z0 - 1e-12) break;
      const double env = std::max(std::abs(v[g.half + j]), std::abs(v[g.half - j]));
      if (env > floor * vmax) {
        x.push_back(z);
        y.push_back(env);
      }
    }
    r.points = static_cast<int>(x.size());
    if (r.points < 5) {
      r.note = "window too small";
      out.push_back(r);
      continue;
    }
    const LineFit f = fit_semilog(x, y);
    r.rate = -f.slope;
    r.r2 = f.r2;
    r.usable = true;
    out.push_back(r);
  }
  return out;
}

}  // namespace nlspec
