#include "nlspec/operators2d.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nlspec/errors.hpp"

namespace nlspec {

namespace {

int kernel_reach(double h) { return static_cast<int>(std::ceil(1.0 / h)) - 1; }

using Triplets = std::vector<Eigen::Triplet<double>>;

SparseMatrix from_triplets(int n, Triplets& t) {
  SparseMatrix m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

Vector mA_multiplier(const Setting2D& st, double floor, Vector* sigma_out = nullptr) {
  const CylinderGrid& g = st.grid;
  Vector d(g.size());
  if (sigma_out) sigma_out->resize(g.size());
  for (int i = 0; i < g.n_s; ++i)
    for (int j = 0; j < g.n_z(); ++j) {
      const double m = approx_solution(st.params, st.profile, g.period, i * g.ds(), j - g.z.half);
      const double sg = std::abs(m) < 1 ? mobility(m, st.th) : 0.0;
      if (sg < floor) {
        std::ostringstream os;
        os << "mobility floor violated at lambda = " << st.lambda << ": sigma(m_A) = " << sg;
        throw NumericalError(os.str());
      }
      d[g.index(i, j)] = 1.0 / sg;
      if (sigma_out) (*sigma_out)[g.index(i, j)] = sg;
    }
  return d;
}

// Off-diagonal kernel part of 𝒜 (or 𝓖 when curved is false), including the self term.
SparseMatrix kernel_matrix(const Setting2D& st, bool curved) {
  const CylinderGrid& g = st.grid;
  const double a = st.a, hz = st.hz(), c = st.lattice_c, lam = st.lambda;
  const int nz = g.n_z(), nj = kernel_reach(hz);
  double amin = 1.0;
  if (curved) {
    double kmax = 0;
    for (double k : st.k_half) kmax = std::max(kmax, std::abs(k));
    amin = 1.0 - lam * kmax * g.z.half_width();
    if (!(amin > 0)) throw ConfigError("chart violation: 1 - lambda k z must stay positive");
  }
  const int ni = static_cast<int>(std::ceil(1.0 / (a * amin)));
  if (2 * ni + 1 > g.n_s) throw ConfigError("n_s too small for the tangential kernel width");
  Triplets t;
  t.reserve(static_cast<std::size_t>(g.size()) * (2 * ni + 1) * (2 * nj + 1));
  for (int i = 0; i < g.n_s; ++i)
    for (int di = -ni; di <= ni; ++di) {
      const int i2 = ((i + di) % g.n_s + g.n_s) % g.n_s;
      const double k = curved ? st.curvature_mid(i, di) : 0.0;
      for (int j = 0; j < nz; ++j)
        for (int j2 = std::max(0, j - nj); j2 <= std::min(nz - 1, j + nj); ++j2) {
          const double zs = 0.5 * (g.z.node(j) + g.z.node(j2));
          const double al = curved ? 1.0 - lam * k * zs : 1.0;
          const double v = st.kernel(di * a * al, (j - j2) * hz);
          if (v != 0.0) t.emplace_back(g.index(i, j), g.index(i2, j2), c * a * hz * v * al);
        }
    }
  return from_triplets(g.size(), t);
}

DiscreteOperator2D finish(const std::string& label, const Setting2D& st, const SparseMatrix& kernel,
                          const Vector& mult) {
  DiscreteOperator2D op;
  op.label = label;
  op.grid = st.grid;
  op.lambda = st.lambda;
  op.multiplier = mult;
  op.weights = Vector::Constant(st.grid.size(), st.grid.ds() * st.hz());
  SparseMatrix d(mult.size(), mult.size());
  d.setIdentity();
  d = d * mult.asDiagonal();
  op.matrix = d - kernel;
  op.matrix.makeCompressed();
  return op;
}

}  // namespace

double Setting2D::curvature_mid(int i, int di) const {
  const int n = static_cast<int>(k_half.size());
  return k_half[((2 * i + di) % n + n) % n];
}

Setting2D make_setting(const Thermodynamics& th, const RadialKernel& k, const ClosedCurve& curve,
                       const ApproxSolutionParams& params, double d0, const Resolution2D& res, double period) {
  const double lam = params.lambda;
  if (!(lam > 0) || !(d0 > 0)) throw ConfigError("lambda and d0 must be positive");
  Setting2D st;
  st.th = th;
  st.kernel = k;
  st.curve = curve;
  st.params = params;
  st.lambda = lam;
  st.d0 = d0;
  st.grid.period = period > 0 ? period : curve.length();
  st.grid.n_s = static_cast<int>(std::lround(res.per_lambda * st.grid.period / lam));
  const double Z = d0 / lam;
  int J = static_cast<int>(std::lround(res.per_unit * Z - 0.5));
  if (J < 1) J = 1;
  st.grid.z = Grid1D{Z / (J + 0.5), J};
  st.a = st.grid.ds() / lam;
  if (st.a >= 1.0 || st.grid.z.h >= 1.0) throw ConfigError("grid does not resolve the kernel support");
  if (2 * kernel_reach(st.a) + 1 > st.grid.n_s) throw ConfigError("n_s too small for lambda");
  st.lattice_c = lattice_normalization(k, st.a, st.grid.z.h);
  st.profile = solve_front(th, lattice_slice_stencil(k, st.a, st.grid.z.h, 0.0), res.z_max);
  const int nh = 2 * st.grid.n_s;
  st.k_half.resize(nh);
  for (int m = 0; m < nh; ++m) st.k_half[m] = curve.curvature(m * 0.5 * st.grid.ds());
  return st;
}

DiscreteOperator2D build_G_lambda(const Setting2D& st) {
  const CylinderGrid& g = st.grid;
  Vector d(g.size());
  for (int i = 0; i < g.n_s; ++i)
    for (int j = 0; j < g.n_z(); ++j) d[g.index(i, j)] = 1.0 / mobility(st.profile.value(j - g.z.half), st.th);
  return finish("G", st, kernel_matrix(st, false), d);
}

DiscreteOperator build_block(const Setting2D& st, double k) {
  DiscreteOperator op = build_interval_operator(
      "block", st.profile, lattice_slice_stencil(st.kernel, st.a, st.hz(), k * st.lambda), st.lambda, st.d0);
  return op;
}

DiscreteOperator2D build_A_cal(const Setting2D& st, bool curved) {
  return finish(curved ? "A" : "A_flat", st, kernel_matrix(st, curved), mA_multiplier(st, 0.05));
}

DiscreteOperator2D build_L_lambda(const Setting2D& st) {
  // Assembled in (s, r) with r = λz from the curvilinear kernel of the geometry module.
  const CylinderGrid& g = st.grid;
  const double lam = st.lambda, ds = g.ds(), dr = lam * st.hz(), P = g.period;
  const int nz = g.n_z();
  const int nj = static_cast<int>(std::ceil(lam / dr));
  const int ni = static_cast<int>(std::ceil(2 * lam / ds));
  if (2 * ni + 1 > g.n_s) throw ConfigError("n_s too small for the tangential kernel width");
  double mass = 0;
  for (int i = -ni; i <= ni; ++i)
    for (int j = -nj; j <= nj; ++j) mass += ds * dr * st.kernel(i * ds / lam, j * dr / lam) / (lam * lam);
  const double c = 1.0 / mass;
  Triplets t;
  for (int i = 0; i < g.n_s; ++i) {
    const double s = i * ds;
    for (int di = -ni; di <= ni; ++di) {
      const int i2 = ((i + di) % g.n_s + g.n_s) % g.n_s;
      const double sd = periodic_diff(s, i2 * ds, P);
      const double s2 = s - sd;  // unwrapped neighbour so the midpoint is local
      const double ks = st.curve.curvature(s2 + 0.5 * sd);
      for (int j = 0; j < nz; ++j) {
        const double r = lam * g.z.node(j);
        for (int j2 = std::max(0, j - nj); j2 <= std::min(nz - 1, j + nj); ++j2) {
          const double r2 = lam * g.z.node(j2);
          const double kv = curvilinear_kernel(st.curve, st.kernel, lam, s, s2, r, r2);
          if (kv == 0.0) continue;
          const double al = 1.0 - ks * 0.5 * (r + r2);
          t.emplace_back(g.index(i, j), g.index(i2, j2), c * kv * al * ds * dr);
        }
      }
    }
  }
  DiscreteOperator2D op = finish("L_lambda", st, from_triplets(g.size(), t), mA_multiplier(st, 0.05));
  op.weights = Vector::Constant(g.size(), ds * dr);
  return op;
}

SparseMatrix WeightedOperatorP::symmetric_form() const {
  const Vector sp = p.cwiseSqrt();
  SparseMatrix s = sp.asDiagonal() * kernel * sp.asDiagonal();
  s.makeCompressed();
  return s;
}

int WeightedOperatorP::positivity_steps(int cell, int max_steps) const {
  Vector v = Vector::Zero(p.size());
  v[cell] = 1.0;
  for (int k = 1; k <= max_steps; ++k) {
    v = apply(v);
    v /= v.maxCoeff();
    if (v.minCoeff() > 0.0) return k;
  }
  return -1;
}

WeightedOperatorP build_P_weighted(const Setting2D& st) {
  WeightedOperatorP P;
  P.kernel = kernel_matrix(st, true);
  mA_multiplier(st, 0.05, &P.p);
  return P;
}

}  // namespace nlspec
