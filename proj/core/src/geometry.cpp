#include "nlspec/geometry.hpp"

#include <algorithm>
#include <Eigen/SparseLU>
#include <array>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include "nlspec/eigen.hpp"
#include "nlspec/errors.hpp"
#include "quadrature.hpp"

namespace nlspec {

using detail::gauss_rule;
using detail::QuadRule;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

Vec2 sub(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
}  // namespace

struct ClosedCurve::Impl {
  std::string family;
  double L = 0;
  double kmax = 0;
  virtual ~Impl() = default;
  virtual CurvePoint eval(double s) const = 0;  // s in [0, L)
  virtual Vec2 chord(const CurvePoint& a, double s, double r, const CurvePoint& b, double s2, double r2) const {
    return {a.p.x + a.n.x * r - b.p.x - b.n.x * r2, a.p.y + a.n.y * r - b.p.y - b.n.y * r2};
  }
};

namespace {

struct CircleImpl final : ClosedCurve::Impl {
  double R;
  explicit CircleImpl(double r) : R(r) {
    family = "circle";
    L = kTwoPi * R;
    kmax = 1.0 / R;
  }
  CurvePoint eval(double s) const override {
    const double th = s / R, c = std::cos(th), sn = std::sin(th);
    return CurvePoint{{R * c, R * sn}, {-sn, c}, {-c, -sn}, 1.0 / R};
  }
  Vec2 chord(const CurvePoint&, double s, double r, const CurvePoint&, double s2, double r2) const override {
    const double dth = periodic_diff(s, s2, L) / R;
    const double thm = s2 / R + 0.5 * dth;
    const double f = 2.0 * std::sin(0.5 * dth) * (R - r);
    const double t2 = s2 / R;
    // (R−r)(e(θ)−e(θ')) + (r'−r)e(θ')
    return {-f * std::sin(thm) + (r2 - r) * std::cos(t2), f * std::cos(thm) + (r2 - r) * std::sin(t2)};
  }
};

// Curve given by a periodic parameter t ∈ [0, T) with derivative available; arclength by a panel table.
struct ParamImpl : ClosedCurve::Impl {
  double T = kTwoPi;
  int panels = 4096;
  std::vector<double> S;  // arclength at panel starts, S.back() = L

  virtual Vec2 pos(double t) const = 0;
  virtual Vec2 vel(double t) const = 0;
  double speed(double t) const {
    const Vec2 v = vel(t);
    return std::hypot(v.x, v.y);
  }
  double seg(double a, double b) const {
    return boost::math::quadrature::gauss<double, 20>::integrate([&](double t) { return speed(t); }, a, b);
  }
  void tabulate() {
    S.assign(panels + 1, 0.0);
    const double dt = T / panels;
    for (int p = 0; p < panels; ++p) S[p + 1] = S[p] + seg(p * dt, (p + 1) * dt);
    L = S.back();
  }
  double param_of(double s) const {
    const double dt = T / panels;
    int p = static_cast<int>(std::upper_bound(S.begin(), S.end(), s) - S.begin()) - 1;
    p = std::clamp(p, 0, panels - 1);
    const double t0 = p * dt;
    double t = t0 + dt * (s - S[p]) / (S[p + 1] - S[p]);
    for (int it = 0; it < 8; ++it) {
      const double f = S[p] + seg(t0, t) - s;
      const double step = f / speed(t);
      t -= step;
      if (std::abs(step) < 1e-16 * T) break;
    }
    return t;
  }
};

struct EllipseImpl final : ParamImpl {
  double a, b;
  EllipseImpl(double A, double B) : a(A), b(B) {
    family = "ellipse";
    tabulate();
    kmax = std::max(a / (b * b), b / (a * a));
  }
  Vec2 pos(double t) const override { return {a * std::cos(t), b * std::sin(t)}; }
  Vec2 vel(double t) const override { return {-a * std::sin(t), b * std::cos(t)}; }
  CurvePoint eval(double s) const override {
    const double t = param_of(s);
    const Vec2 v = vel(t);
    const double sp = std::hypot(v.x, v.y);
    const Vec2 tg{v.x / sp, v.y / sp};
    return CurvePoint{pos(t), tg, {-tg.y, tg.x}, a * b / (sp * sp * sp)};
  }
};

// Periodic C² cubic spline in the chord-length parameter.
struct PeriodicCubic {
  std::vector<double> t, y, m;  // knots t[0..n], values, second derivatives; y[n] = y[0]

  PeriodicCubic(std::vector<double> knots, std::vector<double> values) : t(std::move(knots)), y(std::move(values)) {
    const int n = static_cast<int>(y.size());
    y.push_back(y.front());
    std::vector<Eigen::Triplet<double>> trip;
    Vector rhs(n);
    for (int i = 0; i < n; ++i) {
      const int im = (i + n - 1) % n, ip = (i + 1) % n;
      const double hm = t[i] - (i > 0 ? t[i - 1] : t[n - 1] - t[n]), hp = t[i + 1] - t[i];
      trip.emplace_back(i, im, hm / 6);
      trip.emplace_back(i, i, (hm + hp) / 3);
      trip.emplace_back(i, ip, hp / 6);
      const double ym = i > 0 ? y[i - 1] : y[n - 1];
      rhs[i] = (y[i + 1] - y[i]) / hp - (y[i] - ym) / hm;
    }
    SparseMatrix a(n, n);
    a.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<SparseMatrix> lu(a);
    const Vector sol = lu.solve(rhs);
    m.assign(sol.data(), sol.data() + n);
    m.push_back(m.front());
  }
  // Value and first two derivatives at t ∈ [t[0], t[n]).
  std::array<double, 3> operator()(double x) const {
    const int n = static_cast<int>(t.size()) - 1;
    int i = static_cast<int>(std::upper_bound(t.begin(), t.end(), x) - t.begin()) - 1;
    i = std::clamp(i, 0, n - 1);
    const double h = t[i + 1] - t[i], a = (t[i + 1] - x) / h, b = (x - t[i]) / h;
    const double v = a * y[i] + b * y[i + 1] + ((a * a * a - a) * m[i] + (b * b * b - b) * m[i + 1]) * h * h / 6;
    const double d = (y[i + 1] - y[i]) / h + ((1 - 3 * a * a) * m[i] + (3 * b * b - 1) * m[i + 1]) * h / 6;
    return {v, d, a * m[i] + b * m[i + 1]};
  }
};

struct SplineImpl final : ParamImpl {
  std::unique_ptr<PeriodicCubic> xs, ys;

  explicit SplineImpl(const std::vector<Vec2>& pts) {
    family = "spline";
    const int n = static_cast<int>(pts.size());
    std::vector<double> knots(n + 1, 0.0), x(n), y(n);
    for (int i = 0; i < n; ++i) {
      const Vec2 d = sub(pts[(i + 1) % n], pts[i]);
      knots[i + 1] = knots[i] + std::hypot(d.x, d.y);
      x[i] = pts[i].x;
      y[i] = pts[i].y;
    }
    xs = std::make_unique<PeriodicCubic>(knots, x);
    ys = std::make_unique<PeriodicCubic>(knots, y);
    T = knots.back();
    tabulate();
    double km = 0;
    for (int i = 0; i < 4096; ++i) km = std::max(km, std::abs(eval(i * L / 4096).k));
    kmax = km;
  }
  double wrap(double t) const { return std::fmod(std::fmod(t, T) + T, T); }
  Vec2 pos(double t) const override { return {(*xs)(wrap(t))[0], (*ys)(wrap(t))[0]}; }
  Vec2 vel(double t) const override { return {(*xs)(wrap(t))[1], (*ys)(wrap(t))[1]}; }
  CurvePoint eval(double s) const override {
    const double t = wrap(param_of(s));
    const auto X = (*xs)(t), Y = (*ys)(t);
    const double sp = std::hypot(X[1], Y[1]);
    const Vec2 tg{X[1] / sp, Y[1] / sp};
    return CurvePoint{{X[0], Y[0]}, tg, {-tg.y, tg.x}, (X[1] * Y[2] - Y[1] * X[2]) / (sp * sp * sp)};
  }
};

}  // namespace

double periodic_diff(double s, double s2, double L) {
  double d = std::fmod(s - s2, L);
  if (d < -0.5 * L) d += L;
  if (d >= 0.5 * L) d -= L;
  return d;
}

double ClosedCurve::length() const { return impl_->L; }
CurvePoint ClosedCurve::at(double s) const {
  const double L = impl_->L;
  s = std::fmod(s, L);
  if (s < 0) s += L;
  return impl_->eval(s);
}
double ClosedCurve::max_abs_curvature() const { return impl_->kmax; }
const std::string& ClosedCurve::family() const { return impl_->family; }
Vec2 ClosedCurve::chord(double s, double r, double s2, double r2) const {
  return impl_->chord(at(s), s, r, at(s2), s2, r2);
}
Vec2 ClosedCurve::chord(const CurvePoint& a, double s, double r, const CurvePoint& b, double s2, double r2) const {
  return impl_->chord(a, s, r, b, s2, r2);
}

ClosedCurve::ClosedCurve() : ClosedCurve(make_circle(1.0)) {}

ClosedCurve make_circle(double R) {
  if (!(R > 0)) throw ConfigError("circle radius must be positive");
  return ClosedCurve(std::make_shared<CircleImpl>(R));
}

ClosedCurve make_ellipse(double a, double b) {
  if (!(a > 0) || !(b > 0)) throw ConfigError("ellipse semi-axes must be positive");
  return ClosedCurve(std::make_shared<EllipseImpl>(a, b));
}

ClosedCurve make_spline_curve(std::vector<Vec2> pts) {
  if (pts.size() < 4) throw ConfigError("curve needs at least 4 points");
  const Vec2 d = sub(pts.front(), pts.back());
  if (std::hypot(d.x, d.y) < 1e-14) pts.pop_back();
  double area2 = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Vec2& p = pts[i];
    const Vec2& q = pts[(i + 1) % pts.size()];
    area2 += p.x * q.y - q.x * p.y;
  }
  if (area2 < 0) std::reverse(pts.begin(), pts.end());
  return ClosedCurve(std::make_shared<SplineImpl>(std::move(pts)));
}

ClosedCurve load_curve_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open curve file: " + path);
  std::vector<Vec2> pts;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double x, y;
    if (!(ls >> x >> y)) {
      if (pts.empty()) continue;
      throw ConfigError("malformed curve row: " + line);
    }
    pts.push_back({x, y});
  }
  return make_spline_curve(std::move(pts));
}

Vec2 TubularChart::map(int i, int j) const {
  const CurvePoint& c = frame[i];
  const double rr = r.node(j);
  return {c.p.x + c.n.x * rr, c.p.y + c.n.y * rr};
}

double TubularChart::area() const {
  double a = 0;
  for (int i = 0; i < n_s; ++i)
    for (int j = 0; j < n_r(); ++j) a += weight(i, j);
  return a;
}

TubularChart build_chart(const ClosedCurve& c, double d0, int n_s, int r_half, bool strict) {
  if (!(d0 > 0)) throw ConfigError("d0 must be positive");
  if (n_s < 8 || r_half < 1) throw ConfigError("chart grid too coarse");
  TubularChart ch{c, d0, n_s, Grid1D{d0 / (r_half + 0.5), r_half}, {}, {}, 0.0};
  ch.kappa.resize(n_s);
  ch.frame.resize(n_s);
  double km = c.max_abs_curvature();
  for (int i = 0; i < n_s; ++i) {
    ch.frame[i] = c.at(ch.s(i));
    ch.kappa[i] = ch.frame[i].k;
    km = std::max(km, std::abs(ch.kappa[i]));
  }
  ch.sup_k_d0 = km * d0;
  if (strict && ch.sup_k_d0 > 0.5) {
    std::ostringstream os;
    os << "chart condition sup|k|*d0 <= 1/2 violated: sup|k|*d0 = " << ch.sup_k_d0;
    throw ConfigError(os.str());
  }
  if (!strict && ch.sup_k_d0 >= 1.0) {
    std::ostringstream os;
    os << "strip half-width exceeds the curvature radius: sup|k|*d0 = " << ch.sup_k_d0;
    throw ConfigError(os.str());
  }

  // Injectivity: distinct grid nodes must map to well-separated points.
  const double sep = 0.5 * std::min((1.0 - ch.sup_k_d0) * ch.ds(), ch.r.h);
  const double cell = std::max(ch.ds(), ch.r.h);
  std::unordered_map<long long, std::vector<int>> buckets;
  auto key = [&](long long a, long long b) { return a * 2000003LL + b; };
  std::vector<Vec2> pts(ch.size());
  for (int i = 0; i < n_s; ++i)
    for (int j = 0; j < ch.n_r(); ++j) {
      const int id = ch.index(i, j);
      pts[id] = ch.map(i, j);
      buckets[key(std::llround(std::floor(pts[id].x / cell)), std::llround(std::floor(pts[id].y / cell)))].push_back(id);
    }
  for (int id = 0; id < ch.size(); ++id) {
    const long long bx = std::llround(std::floor(pts[id].x / cell)), by = std::llround(std::floor(pts[id].y / cell));
    for (long long dx = -1; dx <= 1; ++dx)
      for (long long dy = -1; dy <= 1; ++dy) {
        auto it = buckets.find(key(bx + dx, by + dy));
        if (it == buckets.end()) continue;
        for (int o : it->second)
          if (o > id && std::hypot(pts[o].x - pts[id].x, pts[o].y - pts[id].y) < sep)
            throw ConfigError("tubular chart is not injective on the grid");
      }
  }
  return ch;
}

double curvilinear_kernel(const ClosedCurve& c, const RadialKernel& k, double lambda, double s, double s2, double r,
                          double r2) {
  const double ds = periodic_diff(s, s2, c.length());
  const double dr = r - r2;
  // α* >= 1/2 on a valid chart, so the support reaches at most 2λ tangentially.
  if (std::abs(ds) > 2 * lambda || std::abs(dr) > lambda) return 0.0;
  const double sstar = s2 + 0.5 * ds, rstar = 0.5 * (r + r2);
  const double a = 1.0 - c.curvature(sstar) * rstar;
  return k(ds * a / lambda, dr / lambda) / (lambda * lambda);
}

double jacobian_mismatch(const ClosedCurve& c, double s, double s2, double r, double r2) {
  const double ds = periodic_diff(s, s2, c.length());
  const double a1 = 1.0 - c.curvature(s) * r, a2 = 1.0 - c.curvature(s2) * r2;
  const double as = 1.0 - c.curvature(s2 + 0.5 * ds) * 0.5 * (r + r2);
  return a1 * a2 / (as * as) - 1.0;
}

namespace {

std::vector<double> sample_r(double d0) { return {-0.5 * d0, 0.0, 0.5 * d0}; }

// Roots of (s'−s)·α(s*, r*) = ±w on either side of s.
std::pair<double, double> tangential_support(const ClosedCurve& c, double s, double rstar, double w, double reach) {
  auto g = [&](double sp) { return (sp - s) * (1.0 - c.curvature(0.5 * (s + sp)) * rstar); };
  boost::math::tools::eps_tolerance<double> tol(52);
  std::uintmax_t it = 200;
  auto hi = boost::math::tools::bisect([&](double sp) { return g(sp) - w; }, s, s + reach, tol, it);
  it = 200;
  auto lo = boost::math::tools::bisect([&](double sp) { return g(sp) + w; }, s - reach, s, tol, it);
  return {0.5 * (lo.first + lo.second), 0.5 * (hi.first + hi.second)};
}

// ∫ J^λ((s−s')α*, r−r') α* ds' over the natural tangential support.
double tangential_integral(const ClosedCurve& c, const RadialKernel& k, double lambda, double s, double r, double r2) {
  const double u = (r - r2) / lambda;
  if (std::abs(u) >= 1.0) return 0.0;
  const double rstar = 0.5 * (r + r2);
  const double w = lambda * std::sqrt(1.0 - u * u);
  auto [lo, hi] = tangential_support(c, s, rstar, w, 2.5 * lambda);
  const QuadRule q = gauss_rule<30>(lo, hi, 2);
  double acc = 0;
  for (std::size_t i = 0; i < q.x.size(); ++i) {
    const double sp = q.x[i];
    const double a = 1.0 - c.curvature(0.5 * (s + sp)) * rstar;
    acc += q.w[i] * k((s - sp) * a / lambda, u) * a;
  }
  return acc / (lambda * lambda);
}

}  // namespace

ScanResult expansion_remainder_scan(const ClosedCurve& c, const RadialKernel& k, double lambda, double d0, int samples,
                                    double s_offset) {
  ScanResult res;
  const double L = c.length();
  const QuadRule qs = gauss_rule<10>(-2 * lambda, 2 * lambda, 48);
  for (int m = 0; m < samples; ++m) {
    const double s = s_offset + m * L / samples;
    const CurvePoint P = c.at(s);
    std::vector<CurvePoint> F(qs.x.size());
    std::vector<double> kst(qs.x.size());
    for (std::size_t a = 0; a < qs.x.size(); ++a) {
      F[a] = c.at(s + qs.x[a]);
      kst[a] = c.curvature(s + 0.5 * qs.x[a]);
    }
    for (double r : sample_r(d0)) {
      const double rlo = std::max(-d0, r - lambda), rhi = std::min(d0, r + lambda);
      const QuadRule qr = gauss_rule<10>(rlo, rhi, 24);
      double row = 0;
      for (std::size_t a = 0; a < qs.x.size(); ++a) {
        const double sp = s + qs.x[a];
        for (std::size_t b = 0; b < qr.x.size(); ++b) {
          const double rp = qr.x[b];
          const Vec2 d = c.chord(P, s, r, F[a], sp, rp);
          const double full = k(d.x / lambda, d.y / lambda);
          const double as = 1.0 - kst[a] * 0.5 * (r + rp);
          const double lead = k(-qs.x[a] * as / lambda, (r - rp) / lambda);
          row += qs.w[a] * qr.w[b] * std::abs(full - lead) * (1.0 - F[a].k * rp);
        }
      }
      row /= lambda * lambda;
      res.values.push_back(row);
      res.max_value = std::max(res.max_value, row);
    }
  }
  return res;
}

ScanResult jacobian_mismatch_scan(const ClosedCurve& c, double lambda, double d0, int samples) {
  ScanResult res;
  const double L = c.length();
  const int nd = 8;
  for (int m = 0; m < samples; ++m) {
    const double s = m * L / samples;
    for (int jr = 0; jr <= 8; ++jr) {
      const double r = -d0 + jr * (2 * d0) / 8;
      double mx = 0;
      for (int a = -nd; a <= nd; ++a)
        for (int b = -nd; b <= nd; ++b) {
          const double s2 = s + a * lambda / nd;
          const double r2 = std::clamp(r + b * lambda / nd, -d0, d0);
          mx = std::max(mx, std::abs(jacobian_mismatch(c, s, s2, r, r2)));
        }
      res.values.push_back(mx);
      res.max_value = std::max(res.max_value, mx);
    }
  }
  return res;
}

ScanResult row_mass_scan(const ClosedCurve& c, const RadialKernel& k, double lambda, double d0, int samples) {
  if (lambda > 0.5 * d0) throw std::invalid_argument("row-mass scan needs lambda <= d0/2");
  ScanResult res;
  const double L = c.length();
  for (int m = 0; m < samples; ++m) {
    const double s = m * L / samples;
    for (double r : sample_r(d0)) {
      const QuadRule qr = gauss_rule<30>(r - lambda, r + lambda, 4);
      double mass = 0;
      for (std::size_t b = 0; b < qr.x.size(); ++b) mass += qr.w[b] * tangential_integral(c, k, lambda, s, r, qr.x[b]);
      const double defect = mass - 1.0;
      res.values.push_back(defect);
      res.max_value = std::max(res.max_value, std::abs(defect));
    }
  }
  return res;
}

CorrectionProfile gamma_correction(const ClosedCurve& c, const RadialKernel& k, double lambda, const Grid1D& rgrid,
                                   const std::vector<double>& v, double s) {
  const int n = rgrid.size();
  if (static_cast<int>(v.size()) != n) throw std::invalid_argument("data does not match grid");
  const MarginalKernel mk{k, lambda};
  CorrectionProfile out{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  const int w = static_cast<int>(std::ceil(lambda / rgrid.h));
  for (int i = 0; i < n; ++i) {
    const double r = rgrid.node(i);
    for (int j = std::max(0, i - w); j <= std::min(n - 1, i + w); ++j) {
      const double r2 = rgrid.node(j);
      const double jb = mk(r - r2);
      if (jb == 0.0) continue;
      const double b = tangential_integral(c, k, lambda, s, r, r2);
      out.correction[i] += rgrid.h * (b - jb) * v[j];
      out.envelope[i] += rgrid.h * jb * std::abs(v[j]);
    }
  }
  return out;
}

}  // namespace nlspec
