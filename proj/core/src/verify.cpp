#include "nlspec/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "nlspec/errors.hpp"
#include "nlspec/fit.hpp"
#include "quadrature.hpp"

namespace nlspec {

// ---------------------------------------------------------------- workspace

Workspace::Workspace(ExperimentConfig cfg)
    : cfg_(std::move(cfg)), th_(solve_mbeta(cfg_.beta)), kernel_(make_kernel(cfg_.kernel)), curve_(make_curve(cfg_.curve)) {}

FrontSolveOptions Workspace::solve_options() const {
  FrontSolveOptions o;
  o.damping = cfg_.profile_damping;
  o.tol = cfg_.profile_tol;
  o.max_iters = cfg_.profile_max_iters;
  return o;
}

const FrontProfile& Workspace::whole_profile() {
  std::lock_guard lk(mu_);
  if (!whole_) whole_ = std::make_unique<FrontProfile>(whole_profile(cfg_.grid.profile_n));
  return *whole_;
}

FrontProfile Workspace::whole_profile(int n) const {
  return solve_front(th_, marginal(kernel_), cfg_.grid.z_max, n, solve_options());
}

const FrontProfile& Workspace::aligned_profile(double lambda) {
  std::lock_guard lk(mu_);
  auto it = aligned_.find(lambda);
  if (it != aligned_.end()) return it->second;
  const double h = aligned_spacing(lambda, cfg_.d0, cfg_.grid.h_1d);
  return aligned_.emplace(lambda, solve_front(th_, marginal_stencil(kernel_, h), cfg_.grid.z_max, solve_options()))
      .first->second;
}

const DecayFit& Workspace::front_decay() {
  std::lock_guard lk(mu_);
  if (!decay_) decay_ = std::make_unique<DecayFit>(decay_fit(whole_profile(), cfg_.decay_floor));
  return *decay_;
}

ApproxSolutionParams Workspace::params(double lambda) const {
  ApproxSolutionParams p = cfg_.correction;
  p.lambda = lambda;
  return p;
}

double Workspace::gap_D() {
  std::lock_guard lk(mu_);
  if (gap_ < 0) {
    double s = 0;
    for (double lam : cfg_.lambda_1d) s += principal_pair(build_L0(aligned_profile(lam), lam, cfg_.d0)).second;
    gap_ = s / cfg_.lambda_1d.size();
  }
  return gap_;
}

double Workspace::fourier_C0() {
  std::lock_guard lk(mu_);
  if (c0_ < 0) {
    const double h0v = h0();
    double c0 = 1e300;
    for (double lam : cfg_.lambda_h) {
      const FrontProfile& p = aligned_profile(lam);
      const double mu0 = principal_pair(build_L0(p, lam, cfg_.d0)).value;
      for (double h : cfg_.h_small) {
        if (h > h0v) continue;
        const double mu = principal_pair(build_Lh(p, kernel_, h, lam, cfg_.d0)).value;
        c0 = std::min(c0, (mu - mu0) / (h * h));
      }
    }
    c0_ = c0;
  }
  return c0_;
}

const Setting2D& Workspace::setting(double lambda) {
  std::lock_guard lk(mu_);
  auto it = settings_.find(lambda);
  if (it != settings_.end()) return it->second;
  Resolution2D res{cfg_.grid.per_lambda, cfg_.grid.per_unit, cfg_.grid.z_max};
  return settings_.emplace(lambda, make_setting(th_, kernel_, curve_, params(lambda), cfg_.d0, res)).first->second;
}

const Workspace::APrincipal& Workspace::a_cal(double lambda) {
  std::lock_guard lk(mu_);
  auto it = acal_.find(lambda);
  if (it != acal_.end()) return it->second;
  const DiscreteOperator2D A = build_A_cal(setting(lambda));
  SparseEigenOptions o;
  o.nev = 4;
  APrincipal ap;
  ap.spectrum = lowest_eigenpairs(A.matrix, o);
  ap.phi = ap.spectrum.vectors.col(0);
  orient_positive(ap.phi);
  return acal_.emplace(lambda, std::move(ap)).first->second;
}

const StripOperator& Workspace::full_A(double lambda) {
  std::lock_guard lk(mu_);
  auto it = strips_.find(lambda);
  if (it != strips_.end()) return it->second;
  return strips_.emplace(lambda, build_full_A(setting(lambda), cfg_.D0_factor)).first->second;
}

const Spectrum& Workspace::full_A_spectrum(double lambda) {
  std::lock_guard lk(mu_);
  auto it = strip_spectra_.find(lambda);
  if (it != strip_spectra_.end()) return it->second;
  SparseEigenOptions o;
  o.nev = 3;
  return strip_spectra_.emplace(lambda, lowest_eigenpairs(full_A(lambda).op.matrix, o)).first->second;
}

// ---------------------------------------------------------------- helpers

namespace {

using Series = std::vector<double>;

CheckResult make(int crit, const std::string& name, const std::string& ref) {
  CheckResult c;
  c.criterion = crit;
  c.name = name;
  c.ref = ref;
  return c;
}

double rel_spread(const Series& v) {
  double m = 0;
  for (double x : v) m += x;
  m /= v.size();
  double d = 0;
  for (double x : v) d = std::max(d, std::abs(x - m));
  return d / std::abs(m);
}

double max_of(const Series& v) { return *std::max_element(v.begin(), v.end()); }
double min_of(const Series& v) { return *std::min_element(v.begin(), v.end()); }
double loglog_slope(const Series& x, const Series& y) { return fit_loglog(x, y).slope; }

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(4);
  os << x;
  return os.str();
}

// m̄′ on the I_λ grid, unit in Σ h v².
Vector normalized_derivative(const FrontProfile& p, const Grid1D& g) {
  Vector d(g.size());
  for (int i = 0; i < g.size(); ++i) d[i] = p.derivative(i - g.half);
  return d / std::sqrt(g.h * d.squaredNorm());
}

double weighted_distance(const Vector& a, const Vector& b, double h) { return std::sqrt(h * (a - b).squaredNorm()); }

// Nonpositive off-diagonal entries and a connected adjacency graph.
bool perron_structure(const SparseMatrix& m) {
  const int n = static_cast<int>(m.rows());
  std::vector<std::vector<int>> adj(n);
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      if (it.row() == it.col()) continue;
      if (it.value() > 0) return false;
      if (it.value() < 0) adj[it.row()].push_back(static_cast<int>(it.col()));
    }
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int q = stack.back();
    stack.pop_back();
    for (int r : adj[q])
      if (!seen[r]) {
        seen[r] = 1;
        ++count;
        stack.push_back(r);
      }
  }
  return count == n;
}

// ---------------------------------------------------------------- criterion 1

std::vector<CheckResult> c1_profile(Workspace& ws) {
  const auto& cfg = ws.config();
  const FrontProfile& p = ws.whole_profile();
  const Thermodynamics& th = ws.thermo();
  std::vector<CheckResult> out;
  {
    CheckResult c = make(1, "profile.fixed_point", "m = tanh(beta Jbar * m), m(0) = 0");
    const double r = fixed_point_residual(p);
    c.values["residual"] = r;
    c.values["refined_residual"] = refined_fixed_point_residual(p, ws.kernel(), 2);
    c.values["iterations"] = p.iterations;
    c.values["m_beta"] = th.m_beta;
    c.values["m_beta_residual"] = std::abs(th.m_beta - std::tanh(th.beta * th.m_beta));
    c.pass = r < cfg.tolerance("profile_residual") && c.values["m_beta_residual"] < 1e-12;
    out.push_back(c);
  }
  {
    CheckResult c = make(1, "profile.antisymmetry", "m(-z) = -m(z)");
    const int n = p.grid.size();
    double d = 0;
    for (int i = 0; i < n; ++i) d = std::max(d, std::abs(p.m[i] + p.m[n - 1 - i]));
    c.values["max_defect"] = d;
    c.values["center"] = p.m[p.center()];
    c.pass = d == 0.0 && p.m[p.center()] == 0.0;
    out.push_back(c);
  }
  {
    CheckResult c = make(1, "profile.monotone", "m strictly increasing");
    double strict = 1e300, any = 1e300;
    for (int i = 0; i + 1 < p.grid.size(); ++i) {
      const double inc = p.m[i + 1] - p.m[i];
      any = std::min(any, inc);
      const bool moving = std::abs(p.m[i]) < th.m_beta - 1e-9 && std::abs(p.m[i + 1]) < th.m_beta - 1e-9;
      if (moving) strict = std::min(strict, inc);
    }
    c.values["min_increment_front"] = strict;
    c.values["min_increment_all"] = any;
    // On the plateau consecutive values agree to rounding.
    c.pass = strict > 0 && any >= -2 * std::numeric_limits<double>::epsilon() * th.m_beta;
    out.push_back(c);
  }
  {
    CheckResult c = make(1, "profile.decay", "0 < m_beta^2 - m^2 <= c exp(-alpha |z|)");
    const DecayFit& f = ws.front_decay();
    const double mb2 = th.m_beta * th.m_beta;
    // Largest node of the fit window where m_beta^2 - m^2 clears the floor.
    double z_top = f.z_lo;
    for (int i = p.center(); i < p.grid.size(); ++i) {
      const double z = p.grid.node(i);
      if (z <= f.z_hi && mb2 - p.m[i] * p.m[i] > cfg.decay_floor) z_top = std::max(z_top, z);
    }
    const double mid = 0.5 * (f.z_lo + z_top);
    const DecayFit h1 = decay_fit_window(p, f.z_lo, mid, cfg.decay_floor);
    const DecayFit h2 = decay_fit_window(p, mid, z_top, cfg.decay_floor);
    // Beyond z_resolved the gap is below rounding of m_beta^2.
    const double eps = 16 * std::numeric_limits<double>::epsilon() * mb2;
    double min_resolved = 1e300, min_plateau = 1e300;
    for (int i = 0; i < p.grid.size(); ++i) {
      const double d = mb2 - p.m[i] * p.m[i];
      (std::abs(p.grid.node(i)) <= z_top ? min_resolved : min_plateau) =
          std::min(std::abs(p.grid.node(i)) <= z_top ? min_resolved : min_plateau, d);
    }
    const bool positive = min_resolved > 0 && min_plateau >= -eps;
    c.values["min_gap_resolved"] = min_resolved;
    c.values["min_gap_plateau"] = min_plateau;
    c.values["alpha"] = f.alpha;
    c.values["c"] = f.c;
    c.values["r2"] = f.r2;
    c.values["z_lo"] = f.z_lo;
    c.values["z_hi"] = f.z_hi;
    c.values["z_resolved"] = z_top;
    c.values["alpha_lower_half"] = h1.alpha;
    c.values["alpha_upper_half"] = h2.alpha;
    c.values["inverse_sigma_m_beta"] = 1.0 / mobility(th.m_beta, th);
    const double agree = std::abs(h1.alpha - h2.alpha) / f.alpha;
    c.values["window_agreement"] = agree;
    c.pass = f.alpha > 0 && f.r2 > cfg.tolerance("profile_decay_r2") && agree < cfg.tolerance("profile_window_agreement") &&
             positive;
    out.push_back(c);
  }
  return out;
}

// ---------------------------------------------------------------- criterion 2

std::vector<CheckResult> c2_kernel(Workspace& ws) {
  const auto& cfg = ws.config();
  const RadialKernel& k = ws.kernel();
  std::vector<CheckResult> out;
  {
    CheckResult c = make(2, "kernel.mass", "integral of J and of Jbar equal 1");
    const int n = 2000;
    const double h = 2.0 / n;
    double s = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += k(-1 + (i + 0.5) * h, -1 + (j + 0.5) * h);
    s *= h * h;
    const MarginalKernel mk = marginal(k);
    const auto q = detail::gauss_rule<20>(-1.0, 1.0, 16);
    double m = 0;
    for (std::size_t i = 0; i < q.x.size(); ++i) m += q.w[i] * mk(q.x[i]);
    c.values["planar_mass_minus_1"] = s - 1;
    c.values["marginal_mass_minus_1"] = m - 1;
    c.values["norm_constant"] = k.norm_constant();
    const double t = cfg.tolerance("kernel_mass");
    c.pass = std::abs(s - 1) < t && std::abs(m - 1) < t;
    out.push_back(c);
  }
  {
    CheckResult c = make(2, "kernel.slice_zero", "J^0 = Jbar");
    const Stencil1D a = slice_stencil(k, cfg.grid.h_1d, 0.0), b = marginal_stencil(k, cfg.grid.h_1d);
    const bool same = a.weights == b.weights;
    const FourierSlice f0 = fourier_slice(k, 0.0);
    const MarginalKernel mk = marginal(k);
    double d = 0;
    for (int j = -100; j <= 100; ++j) d = std::max(d, std::abs(f0(j * 0.01) - mk(j * 0.01)));
    c.values["stencil_identical"] = same;
    c.values["max_pointwise_difference"] = d;
    c.pass = same && d < cfg.tolerance("slice_zero");
    out.push_back(c);
  }
  {
    CheckResult c = make(2, "kernel.sandwich", "Jbar - h^2 Jtan/2 <= J^h <= Jbar - h^2 Jtan/4");
    const MarginalKernel mk = marginal(k);
    const TangentialMoment tm = tangential_moment(k);
    double lo = 1e300, hi = 1e300;
    for (double h : cfg.h_small) {
      const FourierSlice fh = fourier_slice(k, h);
      for (int j = -99; j <= 99; ++j) {
        const double z = j * 0.01, jb = mk(z), jt = tm(z), v = fh(z);
        lo = std::min(lo, v - (jb - 0.5 * h * h * jt));
        hi = std::min(hi, (jb - 0.25 * h * h * jt) - v);
      }
    }
    c.values["min_lower_margin"] = lo;
    c.values["min_upper_margin"] = hi;
    c.pass = lo >= -1e-14 && hi >= -1e-14;
    out.push_back(c);
  }
  {
    CheckResult c = make(2, "kernel.slice_decay", "|J^h(z)| <= C(z)/(1+|h|)");
    double worst = -1e300, margin = 1e300;
    const MarginalKernel mk = marginal(k);
    // |J^h| <= Jbar and |h||J^h| <= ∫|∂_s J| ds, so C(z) = Jbar(z) + ∫|∂_s J| ds.
    for (double h : {1.0, 2.0, 5.0, 10.0, 50.0}) {
      const FourierSlice fh = fourier_slice(k, h);
      for (int j = -99; j <= 99; ++j) {
        const double z = j * 0.01, v = std::abs(fh(z)), cz = mk(z) + slice_decay_constant(k, z);
        worst = std::max(worst, v * (1 + h) / cz);
      }
    }
    // Strict domination |J^h| < Jbar away from h = 0, on grid points inside the support.
    for (double h : cfg.h_list) {
      const FourierSlice fh = fourier_slice(k, h);
      for (int j = -95; j <= 95; ++j) {
        const double z = j * 0.01;
        margin = std::min(margin, 1.0 - std::abs(fh(z)) / mk(z));
      }
    }
    c.values["max_ratio_to_bound"] = worst;
    c.values["domination_margin_c1"] = margin;
    c.pass = worst <= 1.0 + 1e-12 && margin > 0;
    out.push_back(c);
  }
  return out;
}

// ---------------------------------------------------------------- criterion 3

std::vector<CheckResult> c3_zero_mode(Workspace& ws) {
  const auto& cfg = ws.config();
  std::vector<CheckResult> out;
  auto residual = [](const FrontProfile& p) {
    const DiscreteOperator L = build_L_whole(p);
    const Vector d = Eigen::Map<const Vector>(p.dm.data(), p.dm.size());
    return (L.matrix * d).norm() / d.norm();
  };
  const FrontProfile& p = ws.whole_profile();
  {
    CheckResult c = make(3, "zero_mode.residual", "L mbar' = 0");
    Series hs, rs;
    for (int n : cfg.refinement_n) {
      const FrontProfile q = n == cfg.grid.profile_n ? p : ws.whole_profile(n);
      hs.push_back(q.grid.h);
      rs.push_back(residual(q));
    }
    const double r = residual(p);
    const double order = loglog_slope(hs, rs);
    c.values["relative_residual"] = r;
    c.slopes["refinement_order"] = order;
    c.series["h"] = hs;
    c.series["residual"] = rs;
    c.pass = r < cfg.tolerance("zero_mode") && order >= cfg.tolerance("zero_mode_order");
    out.push_back(c);
  }
  {
    CheckResult c = make(3, "zero_mode.spectrum", "spectrum of L starts at 0 with a gap");
    const Spectrum sp = lowest_dense(build_L_whole(p).matrix, 2);
    const FrontProfile coarse = ws.whole_profile(cfg.refinement_n.front());
    const Spectrum sc = lowest_dense(build_L_whole(coarse).matrix, 2);
    c.values["mu_min"] = sp.values[0];
    c.values["mu_2"] = sp.values[1];
    c.values["mu_2_coarse"] = sc.values[1];
    const double stab = std::abs(sp.values[1] - sc.values[1]) / sp.values[1];
    c.values["gap_change"] = stab;
    c.pass = std::abs(sp.values[0]) < cfg.tolerance("whole_line_min") && sp.values[1] > 0 &&
             stab < cfg.tolerance("gap_stability");
    out.push_back(c);
  }
  return out;
}

// ---------------------------------------------------------------- criterion 4

std::vector<CheckResult> c4_interval(Workspace& ws) {
  const auto& cfg = ws.config();
  const double alpha = ws.front_decay().alpha;
  Series inv, mu, D, drift;
  for (double lam : cfg.lambda_1d) {
    const FrontProfile& p = ws.aligned_profile(lam);
    const DiscreteOperator L = build_L0(p, lam, cfg.d0);
    const Principal pr = principal_pair(L);
    inv.push_back(1.0 / lam);
    mu.push_back(pr.value);
    D.push_back(pr.second);
    drift.push_back(weighted_distance(pr.vector, normalized_derivative(p, L.grid), L.grid.h));
  }
  std::vector<CheckResult> out;
  {
    CheckResult c = make(4, "L0.principal", "0 <= mu_0 <= C exp(-2 alpha d0 / lambda)");
    bool positive = true;
    for (double m : mu) positive = positive && m >= -cfg.tolerance("mu0_lower");
    bool logable = min_of(mu) > 0;
    const LineFit f = logable ? fit_semilog(inv, mu) : LineFit{};
    const double target = -2 * alpha * cfg.d0;
    c.series["inverse_lambda"] = inv;
    c.series["mu0"] = mu;
    c.slopes["log_mu0_vs_inverse_lambda"] = f.slope;
    c.values["predicted_slope"] = target;
    c.values["fitted_C"] = std::exp(f.intercept);
    c.values["fit_r2"] = f.r2;
    const double rel = std::abs(f.slope - target) / std::abs(target);
    c.values["slope_relative_error"] = rel;
    c.pass = positive && logable && rel <= cfg.tolerance("mu0_slope_rel");
    if (!logable) c.message = "nonpositive principal eigenvalue, no log fit";
    out.push_back(c);
  }
  {
    CheckResult c = make(4, "L0.gap", "mu_2 >= D > 0");
    c.series["mu2"] = D;
    c.values["D"] = min_of(D);
    c.values["spread"] = rel_spread(D);
    c.pass = min_of(D) > 0 && rel_spread(D) <= cfg.tolerance("gap_stability");
    out.push_back(c);
  }
  {
    CheckResult c = make(4, "L0.eigenvector", "psi_0 -> mbar'/|mbar'| exponentially");
    bool dec = true;
    for (std::size_t i = 1; i < drift.size(); ++i) dec = dec && drift[i] < drift[i - 1];
    c.series["distance"] = drift;
    c.slopes["log_distance_vs_inverse_lambda"] = fit_semilog(inv, drift).slope;
    c.pass = dec;
    out.push_back(c);
  }
  return out;
}

// ---------------------------------------------------------------- criterion 5

struct LsSweep {
  double max_mu1 = 0, min_mu2 = 1e300, drift = 0, ds_psi = 0, ds_mA = 0;
};

LsSweep ls_sweep(Workspace& ws, double lam, const VerifyOptions& opt) {
  const auto& cfg = ws.config();
  const FrontProfile& p = ws.aligned_profile(lam);
  const ApproxSolutionParams a = ws.params(lam);
  const double L = ws.curve().length();
  const int S = cfg.s_samples;
  const Grid1D g = interval_grid(p, lam, cfg.d0);
  const Vector target = normalized_derivative(p, g);
  const std::vector<Principal> pr = parallel_map<Principal>(S, opt.jobs, [&](int m) {
    return principal_pair(build_Ls(p, a, L, m * L / S, cfg.d0));
  });
  LsSweep r;
  const double ds = L / S;
  for (int m = 0; m < S; ++m) {
    r.max_mu1 = std::max(r.max_mu1, std::abs(pr[m].value));
    r.min_mu2 = std::min(r.min_mu2, pr[m].second);
    r.drift = std::max(r.drift, weighted_distance(pr[m].vector, target, g.h));
    const Vector d = (pr[(m + 1) % S].vector - pr[(m + S - 1) % S].vector) / (2 * ds);
    r.ds_psi = std::max(r.ds_psi, std::sqrt(g.h * d.squaredNorm()));
    for (int i = 0; i < g.size(); ++i) {
      const int j = i - g.half;
      const double dm = (approx_solution(a, p, L, (m + 1) * ds, j) - approx_solution(a, p, L, (m - 1) * ds, j)) / (2 * ds);
      r.ds_mA = std::max(r.ds_mA, std::abs(dm));
    }
  }
  return r;
}

std::vector<CheckResult> c5_tangential(Workspace& ws, const VerifyOptions& opt) {
  const auto& cfg = ws.config();
  Series lams, mu1, mu2, drift, ratio;
  for (double lam : cfg.lambda_list) {
    const LsSweep r = ls_sweep(ws, lam, opt);
    lams.push_back(lam);
    mu1.push_back(r.max_mu1);
    mu2.push_back(r.min_mu2);
    drift.push_back(r.drift);
    ratio.push_back(r.ds_psi / r.ds_mA);
  }
  std::vector<CheckResult> out;
  {
    CheckResult c = make(5, "Ls.principal", "|mu_1(s)| <= C lambda^2");
    const double sl = loglog_slope(lams, mu1);
    c.series["lambda"] = lams;
    c.series["max_abs_mu1"] = mu1;
    c.slopes["max_abs_mu1"] = sl;
    c.values["fitted_C"] = max_of(mu1) / (lams.back() * lams.back());
    for (std::size_t i = 0; i < lams.size(); ++i)
      c.values["fitted_C"] = std::max(c.values["fitted_C"], mu1[i] / (lams[i] * lams[i]));
    c.pass = sl >= cfg.tolerance("ls_slope_lo") && sl <= cfg.tolerance("ls_slope_hi");
    out.push_back(c);
  }
  {
    CheckResult c = make(5, "Ls.gap", "mu_2(s) >= gamma > 0");
    c.series["min_mu2"] = mu2;
    c.values["gamma"] = min_of(mu2);
    c.values["spread"] = rel_spread(mu2);
    c.pass = min_of(mu2) > 0 && rel_spread(mu2) <= cfg.tolerance("gap_stability");
    out.push_back(c);
  }
  {
    CheckResult c = make(5, "Ls.eigenvector", "sup_s |Psi_1 - mbar'/|mbar'|| <= C lambda");
    const double sl = loglog_slope(lams, drift);
    c.series["sup_distance"] = drift;
    c.slopes["sup_distance"] = sl;
    c.pass = sl >= cfg.tolerance("psi_drift_slope");
    out.push_back(c);
  }
  {
    CheckResult c = make(5, "Ls.s_derivative", "sup_s |d_s Psi_1| <= C |d_s m_A|");
    const double sl = loglog_slope(lams, ratio);
    c.series["ratio"] = ratio;
    c.slopes["ratio"] = sl;
    c.values["max_ratio"] = max_of(ratio);
    c.pass = std::isfinite(max_of(ratio)) && sl >= cfg.tolerance("e9_slope");
    out.push_back(c);
  }
  {
    CheckResult c = make(5, "Ls.conjugacy", "L_1^{lambda,s} conjugate to L^s under r = lambda z");
    double ev = 0, vec = 0, zero = 0;
    const double L = ws.curve().length();
    for (double lam : cfg.lambda_list) {
      const FrontProfile& p = ws.aligned_profile(lam);
      const double s = 0.3 * L;
      const DiscreteOperator a = build_Ls(p, ws.params(lam), L, s, cfg.d0);
      const DiscreteOperator b = build_L1s(p, ws.kernel(), ws.params(lam), L, s, cfg.d0);
      const Spectrum sa = full_spectrum(a.matrix, false), sb = full_spectrum(b.matrix, false);
      ev = std::max(ev, (sa.values - sb.values).cwiseAbs().maxCoeff());
      const Principal pa = principal_pair(a), pb = principal_pair(b);
      vec = std::max(vec, weighted_distance(pb.vector, pa.vector / std::sqrt(lam), b.grid.h));
      const DiscreteOperator z = build_Ls(p, ApproxSolutionParams::zero(lam), L, s, cfg.d0);
      zero = std::max(zero, max_abs(z.matrix - build_L0(p, lam, cfg.d0).matrix));
    }
    c.values["max_eigenvalue_difference"] = ev;
    c.values["eigenfunction_distance"] = vec;
    c.values["zero_params_difference"] = zero;
    c.pass = ev < cfg.tolerance("conjugacy") && vec < 1e-6 && zero == 0.0;
    out.push_back(c);
  }
  return out;
}

// ---------------------------------------------------------------- criterion 6

std::vector<CheckResult> c6_fourier(Workspace& ws) {
  const auto& cfg = ws.config();
  const double h0 = ws.h0();
  std::vector<CheckResult> out;
  CheckResult lo = make(6, "Lh.small_h", "mu_0^0 + C0 h^2 <= mu_0^h <= mu_0^0 + h^2/2");
  CheckResult hi = make(6, "Lh.large_h", "<w, L^h w> >= nu |w|^2 for |h| > h0");
  CheckResult z = make(6, "Lh.h_zero", "L^0 equals the interval operator");
  double c0 = 1e300, qmax = -1e300;
  bool monotone = true, used = false, zero_ok = true;
  Series nus;
  for (double lam : cfg.lambda_h) {
    const FrontProfile& p = ws.aligned_profile(lam);
    const DiscreteOperator L0 = build_L0(p, lam, cfg.d0);
    const double mu0 = principal_pair(L0).value;
    zero_ok = zero_ok && build_Lh(p, ws.kernel(), 0.0, lam, cfg.d0).matrix == L0.matrix;
    double prev = mu0;
    for (double h : cfg.h_small) {
      if (h > h0) continue;
      used = true;
      const double mu = principal_pair(build_Lh(p, ws.kernel(), h, lam, cfg.d0)).value;
      const double q = (mu - mu0) / (h * h);
      c0 = std::min(c0, q);
      qmax = std::max(qmax, q);
      monotone = monotone && mu > prev;
      prev = mu;
      lo.series["q_lambda_" + fmt(lam)].push_back(q);
    }
    double nu = 1e300;
    for (double h : cfg.h_list) nu = std::min(nu, principal_pair(build_Lh(p, ws.kernel(), h, lam, cfg.d0)).value);
    nus.push_back(nu);
  }
  lo.values["h0"] = h0;
  lo.values["C0"] = c0;
  lo.values["max_quotient"] = qmax;
  lo.pass = used && c0 > 0 && qmax <= cfg.tolerance("fourier_upper") && monotone;
  if (!used) lo.message = "no h in h_small lies below h0";
  out.push_back(lo);
  hi.series["nu"] = nus;
  hi.values["nu"] = min_of(nus);
  hi.values["spread"] = rel_spread(nus);
  hi.pass = min_of(nus) > 0 && rel_spread(nus) <= cfg.tolerance("nu_stability");
  out.push_back(hi);
  z.values["identical"] = zero_ok;
  z.pass = zero_ok;
  out.push_back(z);
  return out;
}

// ---------------------------------------------------------------- criterion 7

std::vector<CheckResult> c7_union(Workspace& ws) {
  const auto& cfg = ws.config();
  std::vector<CheckResult> out;
  CheckResult u = make(7, "G.union_of_spectra", "spec(G) = union over k of spec(L^{lambda k})");
  CheckResult r0 = make(7, "G.k0_reduction", "s-independent V reduces to the k = 0 block");
  CheckResult sd = make(7, "G.sparse_dense", "sparse and dense eigensolvers agree");
  double hd = 0, red = 0, sdd = 0;
  for (double lam : cfg.union_lambda) {
    const Setting2D& st = ws.setting(lam);
    const DiscreteOperator2D G = build_G_lambda(st);
    const Matrix Gd(G.matrix);
    const Spectrum full = full_spectrum(Gd, false);
    std::vector<double> blocks;
    const double base = 2 * std::numbers::pi / st.grid.period;
    std::map<int, Vector> cache;
    for (int n = 0; n < st.grid.n_s; ++n) {
      const int a = std::min(n, st.grid.n_s - n);
      if (!cache.count(a)) cache[a] = full_spectrum(build_block(st, a * base).matrix, false).values;
      for (int i = 0; i < cache[a].size(); ++i) blocks.push_back(cache[a][i]);
    }
    hd = std::max(hd, hausdorff(std::vector<double>(full.values.data(), full.values.data() + full.size()), blocks));
    const DiscreteOperator B0 = build_block(st, 0.0);
    const FrontProfile& p = st.profile;
    Vector w(st.grid.n_z());
    for (int j = 0; j < w.size(); ++j) w[j] = p.derivative(j - st.grid.z.half) + 0.3 * std::cos(0.7 * j);
    Vector V(G.size());
    for (int i = 0; i < st.grid.n_s; ++i) V.segment(i * w.size(), w.size()) = w;
    const Vector GV = G.matrix * V, Lw = B0.matrix * w;
    for (int i = 0; i < st.grid.n_s; ++i) red = std::max(red, (GV.segment(i * w.size(), w.size()) - Lw).cwiseAbs().maxCoeff());
    SparseEigenOptions o;
    o.nev = 4;
    const Spectrum sp = lowest_eigenpairs(G.matrix, o);
    sdd = std::max(sdd, (sp.values - full.values.head(4)).cwiseAbs().maxCoeff());
    u.values["size_lambda_" + fmt(lam)] = G.size();
  }
  u.values["hausdorff"] = hd;
  u.pass = !cfg.union_lambda.empty() && hd < cfg.tolerance("union_hausdorff");
  if (cfg.union_lambda.empty()) u.message = "union_lambda is empty";
  r0.values["max_difference"] = red;
  r0.pass = red < cfg.tolerance("k0_reduction");
  sd.values["max_difference"] = sdd;
  sd.pass = sdd < cfg.tolerance("sparse_dense");
  out.push_back(u);
  out.push_back(r0);
  out.push_back(sd);

  CheckResult cb = make(7, "G.count_bracketing", "one low eigenvalue per block with |k lambda| <= h0");
  CheckResult disp = make(7, "G.dispersion", "mu_0^{k lambda} - mu_0^0 ~ c (k lambda)^2, c > 0");
  const double h0 = ws.h0();
  bool counts_ok = true;
  double cmin = 1e300;
  for (double lam : cfg.lambda_list) {
    const Setting2D& st = ws.setting(lam);
    const double base = 2 * std::numbers::pi / st.grid.period;
    const int nmax = static_cast<int>(std::floor(h0 / (base * lam) + 1e-12));
    const int blocks = 2 * nmax + 1;
    const double nu = principal_pair(build_block(st, h0 / lam)).value;
    SparseEigenOptions o;
    o.nev = blocks + 4;
    const Spectrum sp = lowest_eigenpairs(build_G_lambda(st).matrix, o);
    const int cnt = count_below(sp.values, nu);
    counts_ok = counts_ok && std::abs(cnt - blocks) <= cfg.tolerance("count_slack");
    cb.series["count"].push_back(cnt);
    cb.series["blocks"].push_back(blocks);
    if (nmax >= 1) {
      const double mu0 = principal_pair(build_block(st, 0.0)).value;
      Series x, y;
      for (int n = 1; n <= nmax; ++n) {
        x.push_back(std::pow(n * base * lam, 2));
        y.push_back(principal_pair(build_block(st, n * base)).value - mu0);
      }
      double c = 0;
      for (std::size_t i = 0; i < x.size(); ++i) c += y[i] * x[i];
      double xx = 0;
      for (double v : x) xx += v * v;
      c /= xx;  // least squares through the origin
      cmin = std::min(cmin, c);
      disp.series["c"].push_back(c);
    }
  }
  cb.values["h0"] = h0;
  cb.pass = counts_ok;
  disp.values["c_min"] = cmin;
  disp.pass = cmin > 0 && cmin < 1e300;
  if (!(cmin < 1e300)) disp.message = "no nonzero block below h0";
  out.push_back(cb);
  out.push_back(disp);
  return out;
}

// ---------------------------------------------------------------- criterion 8

std::vector<CheckResult> c8_curvilinear(Workspace& ws) {
  const auto& cfg = ws.config();
  Series lams, mu0, conjL, conjP, floor, gap, steps, inv;
  bool positive = true, simple = true, improving = true;
  for (double lam : cfg.lambda_list) {
    const Setting2D& st = ws.setting(lam);
    const auto& ap = ws.a_cal(lam);
    lams.push_back(lam);
    mu0.push_back(ap.spectrum.values[0]);
    SparseEigenOptions o;
    o.nev = 4;
    const Spectrum sl = lowest_eigenpairs(build_L_lambda(st).matrix, o);
    conjL.push_back((sl.values - ap.spectrum.values).cwiseAbs().maxCoeff());
    const WeightedOperatorP P = build_P_weighted(st);
    SparseMatrix I(P.p.size(), P.p.size());
    I.setIdentity();
    const Spectrum s1 = lowest_eigenpairs(SparseMatrix(I - P.symmetric_form()), o);
    SparseMatrix Binv(P.p.size(), P.p.size());
    Binv = SparseMatrix(P.p.cwiseInverse().asDiagonal());
    const DiscreteOperator2D A = build_A_cal(st);
    const Spectrum s2 = lowest_generalized(A.matrix, Binv, o);
    conjP.push_back((s1.values - s2.values).cwiseAbs().maxCoeff());
    gap.push_back(s1.values[1] - s1.values[0]);
    simple = simple && s1.values[1] - s1.values[0] > 0;
    Vector v0 = s1.vectors.col(0);
    orient_positive(v0);
    positive = positive && v0.minCoeff() > 0 && ap.phi.minCoeff() > 0;
    const int n = P.positivity_steps(0, 4 * st.grid.n_s + 4 * st.grid.n_z());
    steps.push_back(n);
    improving = improving && n > 0;
    // interior floor of Φ₀ normalized in ds dz on |z| <= 1
    const Vector phi = ap.phi / std::sqrt(st.grid.ds() * st.hz() * ap.phi.squaredNorm());
    double fl = 1e300;
    for (int i = 0; i < st.grid.n_s; ++i)
      for (int j = 0; j < st.grid.n_z(); ++j)
        if (std::abs(st.grid.z.node(j)) <= 1.0) fl = std::min(fl, phi[st.grid.index(i, j)]);
    floor.push_back(fl);
    const InverseIteration it = inverse_iteration(A.matrix, 0.0, Vector::Ones(A.size()), 1e-14, 2000);
    inv.push_back(std::abs(it.value - ap.spectrum.values[0]));
  }
  std::vector<CheckResult> out;
  {
    CheckResult c = make(8, "Acal.principal", "-C lambda^2 <= mu_0 <= C lambda^2");
    const double sl = loglog_slope(lams, mu0);
    c.series["lambda"] = lams;
    c.series["mu0"] = mu0;
    c.series["inverse_iteration_difference"] = inv;
    c.slopes["abs_mu0"] = sl;
    double C = 0;
    for (std::size_t i = 0; i < lams.size(); ++i) C = std::max(C, std::abs(mu0[i]) / (lams[i] * lams[i]));
    c.values["fitted_C"] = C;
    c.pass = sl >= cfg.tolerance("acal_slope") && max_of(inv) < cfg.tolerance("inverse_iteration");
    out.push_back(c);
  }
  {
    CheckResult c = make(8, "Acal.conjugacy", "spectrum of L^lambda = spectrum of A; 1 - P conjugate to A");
    c.series["L_lambda_difference"] = conjL;
    c.series["P_pencil_difference"] = conjP;
    c.values["max_difference"] = std::max(max_of(conjL), max_of(conjP));
    c.pass = max_of(conjL) < cfg.tolerance("conjugacy") && max_of(conjP) < cfg.tolerance("conjugacy");
    out.push_back(c);
  }
  {
    CheckResult c = make(8, "Acal.positivity", "Phi_0 > 0 with interior floor; nu_0 simple; P positivity improving");
    c.series["interior_floor"] = floor;
    c.series["principal_gap"] = gap;
    c.series["positivity_steps"] = steps;
    c.values["zeta_1"] = min_of(floor);
    c.pass = positive && simple && improving && min_of(floor) > 0;
    out.push_back(c);
  }
  return out;
}

// ---------------------------------------------------------------- criterion 9

std::vector<CheckResult> c9_full(Workspace& ws, const VerifyOptions& opt) {
  const auto& cfg = ws.config();
  Series lams, mins, cstar, kbar, away, bridge;
  bool found = true, geometric = true, away_ok = true;
  for (std::size_t n = 0; n < cfg.lambda_list.size(); ++n) {
    const double lam = cfg.lambda_list[n];
    const StripOperator& F = ws.full_A(lam);
    const Spectrum& sp = ws.full_A_spectrum(lam);
    lams.push_back(lam);
    mins.push_back(sp.values[0]);
    cstar.push_back(F.c_star);
    const CutoffScan sc = cutoff_cross_term_scan(F, sp.vectors.col(0), lam, cfg.d0);
    kbar.push_back(sc.k_bar);
    found = found && sc.k_bar >= 0;
    for (bool g : sc.geometric_ok) geometric = geometric && g;
    std::vector<int> idx;
    for (int q = 0; q < F.op.size(); ++q)
      if (std::abs(F.r[q]) >= 0.5 * cfg.d0) idx.push_back(q);
    std::vector<Eigen::Triplet<double>> t;
    std::vector<int> pos(F.op.size(), -1);
    for (std::size_t a = 0; a < idx.size(); ++a) pos[idx[a]] = static_cast<int>(a);
    for (int k = 0; k < F.op.matrix.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(F.op.matrix, k); it; ++it)
        if (pos[it.row()] >= 0 && pos[it.col()] >= 0) t.emplace_back(pos[it.row()], pos[it.col()], it.value());
    SparseMatrix sub(idx.size(), idx.size());
    sub.setFromTriplets(t.begin(), t.end());
    SparseEigenOptions o;
    o.nev = 1;
    const double amin = lowest_eigenpairs(sub, o).values[0];
    away.push_back(amin);
    away_ok = away_ok && amin >= F.c_star - 1.0;
    const auto bs = bridge_samples(F, build_L_lambda(ws.setting(lam)), cfg.bridge_samples,
                                   opt.seed + static_cast<unsigned>(n));
    double d = -1e300;
    for (const auto& b : bs) d = std::max(d, (b.rhs - b.lhs) / b.norm2);
    bridge.push_back(d);
  }
  std::vector<CheckResult> out;
  {
    CheckResult c = make(9, "fullA.floor", "int A v v >= -C lambda^2 int v^2");
    const double sl = loglog_slope(lams, mins);
    c.series["lambda"] = lams;
    c.series["min_eigenvalue"] = mins;
    c.series["C_star"] = cstar;
    c.slopes["abs_min_eigenvalue"] = sl;
    double C = 0;
    for (std::size_t i = 0; i < lams.size(); ++i) C = std::max(C, std::max(0.0, -mins[i]) / (lams[i] * lams[i]));
    c.values["fitted_C_negative_part"] = C;
    c.pass = sl >= cfg.tolerance("fullA_slope");
    out.push_back(c);
  }
  {
    CheckResult c = make(9, "fullA.cutoff", "some k_bar in {0..N} satisfies a stopping condition");
    c.series["k_bar"] = kbar;
    c.values["geometric_decay_holds"] = geometric;
    c.pass = found && geometric;
    out.push_back(c);
  }
  {
    CheckResult c = make(9, "fullA.away_coercivity", "form >= (C* - 1)|v|^2 for v outside N(d0/2)");
    c.series["restricted_min_eigenvalue"] = away;
    c.pass = away_ok;
    out.push_back(c);
  }
  {
    CheckResult c = make(9, "fullA.tube_bridge", "int A(eta u) eta u >= <u_hat, L^lambda u_hat> - C lambda^2 |u|^2");
    c.series["defect"] = bridge;
    bool ok = true;
    Series pl, pd;
    for (std::size_t i = 0; i < lams.size(); ++i)
      if (bridge[i] > 0) {
        pl.push_back(lams[i]);
        pd.push_back(bridge[i]);
      }
    if (pd.size() >= 2) {
      const double sl = loglog_slope(pl, pd);
      c.slopes["defect"] = sl;
      ok = sl >= cfg.tolerance("bridge_slope");
    }
    double C = 0;
    for (std::size_t i = 0; i < lams.size(); ++i) C = std::max(C, bridge[i] / (lams[i] * lams[i]));
    c.values["fitted_C"] = C;
    c.pass = ok;
    out.push_back(c);
  }
  return out;
}

// ---------------------------------------------------------------- criterion 10

std::vector<CheckResult> c10_decomposition(Workspace& ws) {
  const auto& cfg = ws.config();
  const double h0 = ws.h0(), C0 = ws.fourier_C0();
  Series lams, z2, vr2, grad2, energy, recon;
  bool bound = true;
  for (double lam : cfg.lambda_list) {
    const Setting2D& st = ws.setting(lam);
    const auto& ap = ws.a_cal(lam);
    const BlockTable tab = build_block_table(st, h0);
    const DecompositionResult d = low_energy_decompose(st, tab, ap.phi);
    const Vector V = ap.phi / std::sqrt(st.grid.ds() * st.hz() * ap.phi.squaredNorm());
    const DiscreteOperator2D G = build_G_lambda(st);
    const double mu00 = principal_pair(build_block(st, 0.0)).value;
    const double E = (st.grid.ds() * st.hz() * V.dot(G.matrix * V) - mu00) / (lam * lam);
    lams.push_back(lam);
    z2.push_back(d.norm_Z2);
    vr2.push_back(d.norm_VR2);
    grad2.push_back(d.grad_Z2);
    energy.push_back(E);
    recon.push_back(d.reconstruction);
    bound = bound && d.grad_Z2 <= E / C0;
  }
  std::vector<CheckResult> out;
  {
    CheckResult c = make(10, "decomposition.remainder", "|v^R|^2 <= C lambda^2");
    const double sl = loglog_slope(lams, vr2);
    c.series["lambda"] = lams;
    c.series["norm_vR2"] = vr2;
    c.slopes["norm_vR2"] = sl;
    c.values["max_reconstruction_error"] = max_of(recon);
    c.pass = sl >= cfg.tolerance("vR_slope") && max_of(recon) < 1e-12;
    out.push_back(c);
  }
  {
    CheckResult c = make(10, "decomposition.Z_norm", "1 - C lambda^2 <= |Z|^2 <= 1");
    Series defect;
    for (double v : z2) defect.push_back(1.0 - v);
    c.series["norm_Z2"] = z2;
    double C = 0;
    for (std::size_t i = 0; i < lams.size(); ++i) C = std::max(C, defect[i] / (lams[i] * lams[i]));
    c.values["fitted_C"] = C;
    const bool pos = min_of(defect) > 0;
    if (pos) c.slopes["one_minus_norm_Z2"] = loglog_slope(lams, defect);
    c.pass = max_of(z2) <= 1.0 + 1e-12 && (!pos || c.slopes["one_minus_norm_Z2"] >= cfg.tolerance("vR_slope"));
    out.push_back(c);
  }
  {
    CheckResult c = make(10, "decomposition.grad_Z", "|grad Z| <= C uniformly in lambda");
    Series g;
    for (double v : grad2) g.push_back(std::sqrt(v));
    c.series["grad_Z"] = g;
    c.series["energy"] = energy;
    c.values["C0"] = C0;
    c.values["energy_ratio"] = max_of(energy) / min_of(energy);
    c.values["energy_bound"] = std::sqrt(max_of(energy) / C0);
    c.pass = bound && min_of(energy) > 0 && max_of(energy) / min_of(energy) < cfg.tolerance("energy_ratio");
    out.push_back(c);
  }
  return out;
}

// ---------------------------------------------------------------- criterion 11

std::vector<CheckResult> c11_hminus(Workspace& ws, const VerifyOptions& opt) {
  const auto& cfg = ws.config();
  Series lams, val, ratio, ratio2, gw;
  double pres = 0, green = 0, ident = 0;
  for (std::size_t n = 0; n < cfg.lambda_list.size(); ++n) {
    const double lam = cfg.lambda_list[n];
    const StripOperator& F = ws.full_A(lam);
    const PoissonSolver ps(F.chart);
    const HMinusResult h = hminus_rayleigh_floor(F.op.matrix, ps, lam);
    lams.push_back(lam);
    val.push_back(h.value);
    ratio.push_back(h.grad_w2 / (lam * h.v_norm2));
    gw.push_back(h.grad_w2 / h.v_norm2);
    // second eigenvector of A, projected to mean zero
    const Spectrum& sp = ws.full_A_spectrum(lam);
    const Vector& W = ps.weights();
    Vector v = sp.vectors.col(1).cwiseQuotient(W.cwiseSqrt());
    v.array() -= W.dot(v) / W.sum();
    const Vector w = ps.solve(v);
    ratio2.push_back(ps.dirichlet(w) / (lam * W.dot(v.cwiseProduct(v))));
    std::mt19937_64 rng(opt.seed + n);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    Vector r(W.size());
    for (int i = 0; i < r.size(); ++i) r[i] = U(rng);
    r.array() -= W.dot(r) / W.sum();
    const Vector wr = ps.solve(r);
    pres = std::max(pres, ps.residual(wr, r));
    green = std::max(green, std::abs(ps.dirichlet(wr) + wr.dot(W.cwiseProduct(r))) / ps.dirichlet(wr));
    if (n == 0) {
      SparseMatrix I(F.op.size(), F.op.size());
      I.setIdentity();
      const double id = hminus_rayleigh_floor(I, ps, lam).value;
      SparseEigenOptions o;
      o.nev = 2;
      const Spectrum lap = lowest_generalized(ps.stiffness(), SparseMatrix(W.asDiagonal()), o);
      ident = std::abs(id - lap.values[1] / lam) / id;
    }
  }
  std::vector<CheckResult> out;
  {
    CheckResult c = make(11, "hminus.floor", "(1/lambda) int A v v / |grad w|^2 >= -C");
    const double sl = loglog_slope(lams, val);
    c.series["lambda"] = lams;
    c.series["minimum"] = val;
    c.slopes["minimum"] = sl;
    double rmax = 0;
    for (std::size_t i = 1; i < val.size(); ++i)
      rmax = std::max(rmax, std::max(val[i] / val[i - 1], val[i - 1] / val[i]));
    c.values["successive_ratio"] = rmax;
    c.values["identity_relative_difference"] = ident;
    c.pass = sl >= cfg.tolerance("hminus_slope") && rmax < cfg.tolerance("hminus_ratio") && ident < 1e-8;
    if (min_of(val) <= 0) c.message = "nonpositive minimum; slope taken on absolute values";
    out.push_back(c);
  }
  {
    CheckResult c = make(11, "hminus.low_energy", "|grad w|^2 >= C lambda |v|^2");
    c.series["ratio_minimizer"] = ratio;
    c.series["ratio_second_eigenvector"] = ratio2;
    const double sl = loglog_slope(lams, gw);
    c.slopes["grad_w2_over_v2"] = sl;
    c.values["C"] = std::min(min_of(ratio), min_of(ratio2));
    c.pass = c.values["C"] > 0 && std::abs(sl - 1.0) <= cfg.tolerance("hminus_w_slope_dev");
    out.push_back(c);
  }
  {
    CheckResult c = make(11, "poisson.solver", "Delta w = v with Neumann ends; Green identity");
    c.values["max_residual"] = pres;
    c.values["green_identity"] = green;
    c.pass = pres < cfg.tolerance("poisson_residual") && green < cfg.tolerance("green_identity");
    out.push_back(c);
  }
  return out;
}

// ---------------------------------------------------------------- criterion 12

std::vector<CheckResult> c12_structure(Workspace& ws) {
  const auto& cfg = ws.config();
  std::vector<CheckResult> out;
  const double L = ws.curve().length();
  {
    CheckResult c = make(12, "structure.symmetry", "all operators self-adjoint");
    double worst = 0;
    auto note = [&](const std::string& k, double v) {
      c.values[k] = v;
      worst = std::max(worst, v);
    };
    double s1 = 0;
    for (double lam : cfg.lambda_1d) s1 = std::max(s1, symmetry_defect(build_L0(ws.aligned_profile(lam), lam, cfg.d0).matrix));
    note("L0", s1);
    const double lam = cfg.lambda_list.front();
    const FrontProfile& p = ws.aligned_profile(lam);
    note("Ls", symmetry_defect(build_Ls(p, ws.params(lam), L, 0.1 * L, cfg.d0).matrix));
    note("L1s", symmetry_defect(build_L1s(p, ws.kernel(), ws.params(lam), L, 0.1 * L, cfg.d0).matrix));
    note("Lh", symmetry_defect(build_Lh(p, ws.kernel(), 1.0, lam, cfg.d0).matrix));
    note("L_whole", symmetry_defect(build_L_whole(ws.whole_profile()).matrix));
    const Setting2D& st = ws.setting(lam);
    note("G", symmetry_defect(build_G_lambda(st).matrix));
    note("Acal", symmetry_defect(build_A_cal(st).matrix));
    note("L_lambda", symmetry_defect(build_L_lambda(st).matrix));
    note("P_weighted", symmetry_defect(build_P_weighted(st).symmetric_form()));
    note("full_A", symmetry_defect(ws.full_A(lam).op.matrix));
    c.pass = worst < cfg.tolerance("symmetry");
    out.push_back(c);
  }
  {
    CheckResult c = make(12, "structure.perron_frobenius", "principal eigenvectors strictly positive; psi_0 even");
    double minratio = 1e300, even = 0;
    for (double lam : cfg.lambda_1d) {
      const Principal pr = principal_pair(build_L0(ws.aligned_profile(lam), lam, cfg.d0));
      minratio = std::min(minratio, pr.vector.minCoeff() / pr.vector.maxCoeff());
      even = std::max(even, (pr.vector - pr.vector.reverse()).cwiseAbs().maxCoeff());
    }
    double m2 = 1e300, resolved = 1e300;
    bool structural = true;
    for (double lam : cfg.lambda_list) {
      const Principal pr = principal_pair(build_Ls(ws.aligned_profile(lam), ws.params(lam), L, 0.25 * L, cfg.d0));
      m2 = std::min(m2, pr.vector.minCoeff() / pr.vector.maxCoeff());
      // Sparse operators: off-diagonal sign pattern and connectivity give positivity exactly;
      // the computed vector must agree wherever it exceeds the solver accuracy.
      const Spectrum& fs = ws.full_A_spectrum(lam);
      Vector f = fs.vectors.col(0);
      orient_positive(f);
      for (int which = 0; which < 2; ++which) {
        const SparseMatrix M = which == 0 ? build_A_cal(ws.setting(lam)).matrix : ws.full_A(lam).op.matrix;
        const Vector& v = which == 0 ? ws.a_cal(lam).phi : f;
        structural = structural && perron_structure(M);
        resolved = std::min(resolved, v.minCoeff() / v.maxCoeff());
      }
    }
    c.values["L0_min_over_max"] = minratio;
    c.values["Ls_min_over_max"] = m2;
    c.values["sparse_min_over_max"] = resolved;
    c.values["sparse_sign_pattern_irreducible"] = structural;
    c.values["L0_parity_defect"] = even;
    c.pass = minratio > 0 && m2 > 0 && structural && resolved > -1e-12 && even < 1e-10;
    out.push_back(c);
  }
  {
    CheckResult c = make(12, "structure.decay", "eigenfunctions decay exponentially in z");
    const double alpha = ws.front_decay().alpha;
    const Thermodynamics& th = ws.thermo();
    const double lam = *std::min_element(cfg.lambda_1d.begin(), cfg.lambda_1d.end());
    const DiscreteOperator L0 = build_L0(ws.aligned_profile(lam), lam, cfg.d0);
    const Spectrum sp = full_spectrum(L0.matrix);
    const double thr = 1.0 / mobility(th.m_beta, th) - 1.0;
    // Per eigenpair, z0 is where 1/sigma(mbar) - 1 - mu first reaches half of eps0 = thr - mu.
    std::vector<DecayReport> reps;
    for (int k = 0; k < sp.size() && sp.values[k] < thr; ++k) {
      const double mu = sp.values[k], eps0 = thr - mu;
      double z0 = 1e300;
      for (int j = 0; j <= L0.grid.half; ++j)
        if (L0.multiplier[L0.grid.half + j] - 1.0 - mu >= 0.5 * eps0) {
          z0 = j * L0.grid.h;
          break;
        }
      Spectrum one;
      one.values = sp.values.segment(k, 1);
      one.vectors = sp.vectors.col(k);
      DecayReport r = eigenfunction_decay_check(L0, one, thr, z0).front();
      r.index = k;
      reps.push_back(r);
    }
    bool ok = !reps.empty() && reps.front().usable;
    double min_rate = 1e300;
    int usable = 0;
    for (const auto& r : reps) {
      if (!r.usable) continue;
      ++usable;
      min_rate = std::min(min_rate, r.rate);
      c.series["rates"].push_back(r.rate);
      c.series["rate_eigenvalues"].push_back(r.eigenvalue);
      ok = ok && r.rate > 0;
      if (r.index == 0) {
        c.values["psi0_rate"] = r.rate;
        c.values["psi0_r2"] = r.r2;
        c.values["psi0_rate_over_alpha"] = r.rate / alpha;
        ok = ok && r.r2 > cfg.tolerance("decay_r2") && std::abs(r.rate / alpha - 1) <= cfg.tolerance("decay_rate_rel");
      }
    }
    c.values["excluded_above_threshold"] = sp.size() - static_cast<int>(reps.size());
    c.values["usable_eigenfunctions"] = usable;
    c.values["min_rate"] = min_rate;
    // s-integrated |Φ₀|² of 𝒜 at the smallest λ
    const double lm = *std::min_element(cfg.lambda_list.begin(), cfg.lambda_list.end());
    const Setting2D& st = ws.setting(lm);
    const Vector& phi = ws.a_cal(lm).phi;
    const int nz = st.grid.n_z(), J = st.grid.z.half;
    Series x, y;
    for (int j = 0; j <= J; ++j) {
      const double z = j * st.hz();
      if (z < st.grid.z.half_width() / 3.0) continue;
      double a = 0, b = 0;
      for (int i = 0; i < st.grid.n_s; ++i) {
        a += std::pow(phi[i * nz + J + j], 2);
        b += std::pow(phi[i * nz + J - j], 2);
      }
      x.push_back(z);
      y.push_back(std::max(a, b) * st.grid.ds());
    }
    const LineFit f = fit_semilog(x, y);
    c.values["A_integrated_rate"] = -f.slope;
    c.values["A_integrated_r2"] = f.r2;
    c.pass = ok && -f.slope > 0 && f.r2 > cfg.tolerance("decay_r2");
    out.push_back(c);
  }
  {
    CheckResult c = make(12, "structure.kernel_expansion", "curvilinear kernel remainder O(lambda^2)");
    const double width = cfg.D0_factor * cfg.d0;
    Series lams, rem, jac;
    for (double lam : cfg.lambda_list) {
      lams.push_back(lam);
      rem.push_back(expansion_remainder_scan(ws.curve(), ws.kernel(), lam, width, cfg.geometry_samples).max_value);
      jac.push_back(jacobian_mismatch_scan(ws.curve(), lam, cfg.d0, cfg.geometry_samples).max_value);
    }
    c.series["lambda"] = lams;
    c.series["remainder"] = rem;
    c.series["jacobian_mismatch"] = jac;
    c.slopes["remainder"] = loglog_slope(lams, rem);
    c.slopes["jacobian_mismatch"] = loglog_slope(lams, jac);
    c.pass = c.slopes["remainder"] >= cfg.tolerance("remainder_slope") &&
             c.slopes["jacobian_mismatch"] >= cfg.tolerance("remainder_slope");
    out.push_back(c);
  }
  {
    CheckResult c = make(12, "structure.correction", "row mass 1 + O(lambda^2); |Gamma v| <= C lambda^2 Jbar * |v|");
    const double width = cfg.D0_factor * cfg.d0;
    Series lams, mass, corr;
    for (double lam : cfg.lambda_list) {
      lams.push_back(lam);
      mass.push_back(row_mass_scan(ws.curve(), ws.kernel(), lam, width, cfg.geometry_samples).max_value);
      const FrontProfile& p = ws.whole_profile();
      const Grid1D rg = Grid1D::fitted(cfg.d0, lam / 10.0);
      std::vector<double> v(rg.size());
      // m̄′(r/λ)/√λ by linear interpolation of the whole-line profile derivative
      for (int i = 0; i < rg.size(); ++i) {
        const double z = rg.node(i) / lam, t = z / p.grid.h;
        const int j = static_cast<int>(std::floor(t));
        const double w = t - j;
        v[i] = ((1 - w) * p.derivative(j) + w * p.derivative(j + 1)) / std::sqrt(lam);
      }
      double worst = 0;
      for (int m = 0; m < cfg.geometry_samples; ++m) {
        const CorrectionProfile g = gamma_correction(ws.curve(), ws.kernel(), lam, rg, v, m * L / cfg.geometry_samples);
        double mc = 0, me = 0;
        for (std::size_t i = 0; i < v.size(); ++i) {
          mc = std::max(mc, std::abs(g.correction[i]));
          me = std::max(me, g.envelope[i]);
        }
        worst = std::max(worst, mc / me);
      }
      corr.push_back(worst);
    }
    c.series["lambda"] = lams;
    c.series["row_mass_defect"] = mass;
    c.series["correction_ratio"] = corr;
    c.slopes["row_mass_defect"] = loglog_slope(lams, mass);
    c.slopes["correction_ratio"] = loglog_slope(lams, corr);
    c.pass = c.slopes["row_mass_defect"] >= cfg.tolerance("correction_slope") &&
             c.slopes["correction_ratio"] >= cfg.tolerance("correction_slope");
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::string criterion_title(int c) {
  static const std::map<int, std::string> t{
      {1, "front profile"},
      {2, "kernel identities"},
      {3, "zero mode of the whole-line operator"},
      {4, "interval operator: principal eigenvalue, gap, eigenvector"},
      {5, "tangentially perturbed interval operator"},
      {6, "Fourier family"},
      {7, "union of block spectra"},
      {8, "curvilinear operator and conjugacies"},
      {9, "full operator floor and cut-off scan"},
      {10, "low-energy decomposition"},
      {11, "H^-1 quadratic form floor"},
      {12, "structural properties"},
      {13, "determinism"},
  };
  auto it = t.find(c);
  return it == t.end() ? "unknown" : it->second;
}

std::vector<CheckResult> run_criterion(int criterion, Workspace& ws, const VerifyOptions& opt) {
  try {
    switch (criterion) {
      case 1: return c1_profile(ws);
      case 2: return c2_kernel(ws);
      case 3: return c3_zero_mode(ws);
      case 4: return c4_interval(ws);
      case 5: return c5_tangential(ws, opt);
      case 6: return c6_fourier(ws);
      case 7: return c7_union(ws);
      case 8: return c8_curvilinear(ws);
      case 9: return c9_full(ws, opt);
      case 10: return c10_decomposition(ws);
      case 11: return c11_hminus(ws, opt);
      case 12: return c12_structure(ws);
      default: throw std::invalid_argument("no checks for criterion " + std::to_string(criterion));
    }
  } catch (const ConfigError& e) {
    throw ConfigError("criterion " + std::to_string(criterion) + " (" + criterion_title(criterion) + "): " + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError("criterion " + std::to_string(criterion) + " (" + criterion_title(criterion) + "): " + e.what());
  }
}

Report verify_all(const ExperimentConfig& cfg, const VerifyOptions& opt) {
  Workspace ws(cfg);
  Report r;
  r.config_hash = cfg.hash;
  for (int c = 1; c <= 12; ++c) {
    if (!cfg.wants(c)) continue;
    for (auto& x : run_criterion(c, ws, opt)) r.checks.push_back(std::move(x));
  }
  return r;
}

}  // namespace nlspec
