#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "nlspec/errors.hpp"
#include "nlspec/operators2d.hpp"

namespace nlspec {

namespace {

// Uniform bucket grid of cell size h over the node positions.
class BucketGrid {
 public:
  BucketGrid(const std::vector<Vec2>& pts, double h) : h_(h) {
    x0_ = y0_ = 1e300;
    double x1 = -1e300, y1 = -1e300;
    for (const Vec2& p : pts) {
      x0_ = std::min(x0_, p.x);
      y0_ = std::min(y0_, p.y);
      x1 = std::max(x1, p.x);
      y1 = std::max(y1, p.y);
    }
    nx_ = static_cast<int>((x1 - x0_) / h) + 1;
    ny_ = static_cast<int>((y1 - y0_) / h) + 1;
    cells_.resize(static_cast<std::size_t>(nx_) * ny_);
    for (int i = 0; i < static_cast<int>(pts.size()); ++i) cells_[cell(pts[i])].push_back(i);
  }

  template <class F>
  void neighbours(const Vec2& p, F&& f) const {
    const int cx = cx_of(p.x), cy = cy_of(p.y);
    for (int ix = std::max(0, cx - 1); ix <= std::min(nx_ - 1, cx + 1); ++ix)
      for (int iy = std::max(0, cy - 1); iy <= std::min(ny_ - 1, cy + 1); ++iy)
        for (int q : cells_[static_cast<std::size_t>(ix) * ny_ + iy]) f(q);
  }

 private:
  int cx_of(double x) const { return std::clamp(static_cast<int>((x - x0_) / h_), 0, nx_ - 1); }
  int cy_of(double y) const { return std::clamp(static_cast<int>((y - y0_) / h_), 0, ny_ - 1); }
  std::size_t cell(const Vec2& p) const { return static_cast<std::size_t>(cx_of(p.x)) * ny_ + cy_of(p.y); }

  double h_, x0_, y0_;
  int nx_ = 0, ny_ = 0;
  std::vector<std::vector<int>> cells_;
};

}  // namespace

StripOperator build_full_A(const Setting2D& st, double D0_factor) {
  if (D0_factor < 3.0 - 1e-12) throw ConfigError("strip half-width D0 must be at least 3 d0");
  if (std::abs(st.grid.period - st.curve.length()) > 1e-12 * st.grid.period)
    throw ConfigError("strip operator needs the curve length as the s-period");
  const double lam = st.lambda, hz = st.hz();
  const int J = st.grid.z.half;
  const int JD = static_cast<int>(std::lround(D0_factor * (J + 0.5) - 0.5));
  const double D0 = (JD + 0.5) * lam * hz;
  StripOperator out;
  out.chart = build_chart(st.curve, D0, st.grid.n_s, JD, false);
  const TubularChart& ch = out.chart;
  out.tube_half = J;
  const int n = ch.size();
  std::vector<Vec2> pos(n);
  Vector w(n), mult(n);
  out.r.resize(n);
  out.c_star = 1e300;
  for (int i = 0; i < ch.n_s; ++i)
    for (int j = 0; j < ch.n_r(); ++j) {
      const int q = ch.index(i, j);
      pos[q] = ch.map(i, j);
      w[q] = ch.weight(i, j);
      out.r[q] = ch.r.node(j);
      const double m = approx_solution(st.params, st.profile, ch.curve.length(), ch.s(i), j - JD);
      const double sg = std::abs(m) < 1 ? mobility(m, st.th) : 0.0;
      if (sg < 0.05) {
        std::ostringstream os;
        os << "mobility floor violated on the strip at lambda = " << lam << ": sigma(m_A) = " << sg;
        throw NumericalError(os.str());
      }
      mult[q] = 1.0 / sg;
      if (std::abs(out.r[q]) >= 0.5 * st.d0 - 1e-14) out.c_star = std::min(out.c_star, mult[q]);
    }
  if (!(out.c_star > 1.0)) {
    std::ostringstream os;
    os << "parameters violate the coercivity condition away from the interface: C* = " << out.c_star;
    throw NumericalError(os.str());
  }
  const BucketGrid buckets(pos, lam);
  const double c = st.lattice_c, il = 1.0 / lam;
  std::vector<Eigen::Triplet<double>> t;
  for (int q = 0; q < n; ++q) {
    t.emplace_back(q, q, mult[q]);
    buckets.neighbours(pos[q], [&](int p) {
      const double v = st.kernel((pos[q].x - pos[p].x) * il, (pos[q].y - pos[p].y) * il);
      if (v != 0.0) t.emplace_back(q, p, -c * std::sqrt(w[q] * w[p]) * v * il * il);
    });
  }
  DiscreteOperator2D& op = out.op;
  op.label = "full_A";
  op.lambda = lam;
  op.grid.period = ch.curve.length();
  op.grid.n_s = ch.n_s;
  op.grid.z = Grid1D{hz, JD};
  op.weights = w;
  op.multiplier = mult;
  op.matrix.resize(n, n);
  op.matrix.setFromTriplets(t.begin(), t.end());
  op.matrix.makeCompressed();
  return out;
}

CutoffScan cutoff_cross_term_scan(const StripOperator& A, const Vector& x, double lambda, double d0) {
  const int n = A.op.size();
  if (x.size() != n) throw std::invalid_argument("vector does not live on the strip grid");
  CutoffScan sc;
  sc.n = static_cast<int>(std::floor(1.0 / lambda + 1e-12));
  sc.delta_star = 0.5 * (A.c_star - 1.0);
  sc.delta = sc.delta_star / (2.0 + sc.delta_star);
  const double total = x.squaredNorm();
  double cumulative = 0;
  for (int k = 0; k <= sc.n; ++k) {
    const double rad = 0.5 * d0 * (1.0 + lambda * k);
    Vector x1 = Vector::Zero(n), x2 = Vector::Zero(n);
    for (int q = 0; q < n; ++q) (std::abs(A.r[q]) < rad ? x1 : x2)[q] = x[q];
    // x1ᵀ K x2 with K applied by difference so no second matrix is stored.
    const Vector Kx2 = A.op.multiplier.cwiseProduct(x2) - A.op.matrix * x2;
    const double sk = 2.0 * x1.dot(Kx2);
    const double outer = x2.squaredNorm();
    sc.s_values.push_back(sk);
    sc.outer_norm2.push_back(outer);
    cumulative += sk;
    int cond = 0;
    if (sk <= 0) cond = 1;
    else if (sk <= sc.delta_star * outer) cond = 2;
    else if (sk <= lambda * lambda * total) cond = 3;
    if (cond != 0) {
      sc.k_bar = k;
      sc.condition = cond;
      break;
    }
    sc.geometric_ok.push_back(sk <= std::pow(1.0 - sc.delta, k) * cumulative * (1 + 1e-12));
  }
  return sc;
}

std::vector<BridgeSample> bridge_samples(const StripOperator& A, const DiscreteOperator2D& L, int count,
                                         unsigned seed) {
  const TubularChart& ch = A.chart;
  const int J = A.tube_half, JD = ch.r.half, nz = 2 * J + 1;
  if (L.grid.n_s != ch.n_s || L.grid.n_z() != nz) throw std::invalid_argument("tube grid does not match the strip");
  const double ds = ch.ds(), dr = ch.r.h;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<BridgeSample> out;
  for (int c = 0; c < count; ++c) {
    Vector x = Vector::Zero(A.op.size()), uh(L.size());
    double norm2 = 0;
    for (int i = 0; i < ch.n_s; ++i)
      for (int jj = -J; jj <= J; ++jj) {
        const int q = ch.index(i, jj + JD);
        const double u = U(rng);
        x[q] = std::sqrt(A.op.weights[q]) * u;
        uh[L.grid.index(i, jj + J)] = std::sqrt(ch.alpha(i, jj + JD)) * u;
        norm2 += A.op.weights[q] * u * u;
      }
    BridgeSample b;
    b.lhs = x.dot(A.op.matrix * x);
    b.rhs = ds * dr * uh.dot(L.matrix * uh);
    b.norm2 = norm2;
    out.push_back(b);
  }
  return out;
}

}  // namespace nlspec
