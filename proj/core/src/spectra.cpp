#include "nlspec/spectra.hpp"

#include <Eigen/CholmodSupport>
#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "nlspec/errors.hpp"

namespace nlspec {

BlockTable build_block_table(const Setting2D& st, double h0) {
  BlockTable t;
  t.h0 = h0;
  const double P = st.grid.period, base = 2.0 * std::numbers::pi / P;
  const int nmax = std::min(static_cast<int>(std::floor(h0 / (base * st.lambda) + 1e-12)), (st.grid.n_s - 1) / 2);
  std::map<int, Principal> cache;
  for (int n = -nmax; n <= nmax; ++n) {
    const int a = std::abs(n);
    if (!cache.count(a)) cache[a] = principal_pair(build_block(st, a * base));
    t.modes.push_back(n);
    t.k.push_back(n * base);
    t.principal.push_back(cache[a]);
  }
  return t;
}

DecompositionResult low_energy_decompose(const Setting2D& st, const BlockTable& table, const Vector& x) {
  const CylinderGrid& g = st.grid;
  if (x.size() != g.size()) throw std::invalid_argument("vector does not live on the cylinder grid");
  if (table.modes.empty()) throw std::invalid_argument("block table is empty");
  const int nz = g.n_z();
  for (const Principal& p : table.principal)
    if (p.vector.size() != nz) throw std::invalid_argument("block table built for another grid");
  const double ds = g.ds(), hz = st.hz(), P = g.period, rootP = std::sqrt(P);
  const Vector V = x / std::sqrt(ds * hz * x.squaredNorm());
  DecompositionResult r;
  const Vector* psi0 = nullptr;
  double low_energy = 0;
  for (std::size_t m = 0; m < table.modes.size(); ++m) {
    const double k = table.k[m];
    std::vector<std::complex<double>> u(nz, 0.0);
    for (int i = 0; i < g.n_s; ++i) {
      const std::complex<double> e = std::polar(ds / rootP, -k * i * ds);
      for (int j = 0; j < nz; ++j) u[j] += e * V[g.index(i, j)];
    }
    const Vector& psi = table.principal[m].vector;
    if (table.modes[m] == 0) psi0 = &psi;
    std::complex<double> al = 0;
    for (int j = 0; j < nz; ++j) al += hz * u[j] * psi[j];
    double perp = 0, un = 0;
    for (int j = 0; j < nz; ++j) {
      perp += hz * std::norm(u[j] - al * psi[j]);
      un += hz * std::norm(u[j]);
    }
    low_energy += un;
    r.modal.push_back({table.modes[m], k, al, perp});
    r.norm_Z2 += std::norm(al);
    r.grad_Z2 += k * k * std::norm(al);
  }
  if (!psi0) throw std::invalid_argument("block table lacks the k = 0 block");
  r.high_norm2 = std::max(0.0, 1.0 - low_energy);
  r.Z.assign(g.n_s, 0.0);
  for (int i = 0; i < g.n_s; ++i) {
    std::complex<double> z = 0;
    for (const auto& c : r.modal) z += c.alpha * std::polar(1.0 / rootP, c.k * i * ds);
    r.Z[i] = z.real();
  }
  r.VR.resize(g.size());
  for (int i = 0; i < g.n_s; ++i)
    for (int j = 0; j < nz; ++j) {
      const int q = g.index(i, j);
      r.VR[q] = V[q] - r.Z[i] * (*psi0)[j];
      r.norm_VR2 += ds * hz * r.VR[q] * r.VR[q];
      r.reconstruction = std::max(r.reconstruction, std::abs(r.Z[i] * (*psi0)[j] + r.VR[q] - V[q]));
    }
  return r;
}

struct PoissonSolver::Factor {
  Eigen::CholmodSupernodalLLT<SparseMatrix, Eigen::Lower> llt;
  SparseMatrix grounded;  // S without the first row and column
};

PoissonSolver::~PoissonSolver() = default;
PoissonSolver::PoissonSolver(PoissonSolver&&) noexcept = default;

PoissonSolver::PoissonSolver(const TubularChart& ch, bool flat) : f_(std::make_unique<Factor>()) {
  const int n = ch.size(), nr = ch.n_r();
  const double ds = ch.ds(), dr = ch.r.h;
  W_.resize(n);
  std::vector<Eigen::Triplet<double>> t;
  auto edge = [&](int a, int b, double c) {
    t.emplace_back(a, a, c);
    t.emplace_back(b, b, c);
    t.emplace_back(a, b, -c);
    t.emplace_back(b, a, -c);
  };
  for (int i = 0; i < ch.n_s; ++i) {
    const int ip = (i + 1) % ch.n_s;
    const double kh = flat ? 0.0 : ch.curve.curvature((i + 0.5) * ds);
    const double ki = flat ? 0.0 : ch.kappa[i];
    for (int j = 0; j < nr; ++j) {
      const double r = ch.r.node(j);
      W_[ch.index(i, j)] = (1.0 - ki * r) * ds * dr;
      edge(ch.index(i, j), ch.index(ip, j), (dr / ds) / (1.0 - kh * r));
      if (j + 1 < nr) edge(ch.index(i, j), ch.index(i, j + 1), (ds / dr) * (1.0 - ki * (r + 0.5 * dr)));
    }
  }
  S_.resize(n, n);
  S_.setFromTriplets(t.begin(), t.end());
  S_.makeCompressed();
  f_->grounded = S_.bottomRightCorner(n - 1, n - 1);
  f_->llt.compute(f_->grounded);
  if (f_->llt.info() != Eigen::Success) throw NumericalError("Neumann Laplacian factorization failed");
}

Vector PoissonSolver::solve(const Vector& v) const {
  const int n = static_cast<int>(W_.size());
  if (v.size() != n) throw std::invalid_argument("vector does not live on the strip grid");
  const Vector Wv = W_.cwiseProduct(v);
  if (std::abs(Wv.sum()) > 1e-10 * std::max(1.0, Wv.cwiseAbs().sum()))
    throw std::invalid_argument("right-hand side has nonzero mean; project v first");
  Vector w = Vector::Zero(n);
  const SparseMatrix& Sg = f_->grounded;
  const Vector b = -Wv.tail(n - 1);
  Vector x = f_->llt.solve(b);
  for (int it = 0; it < 2; ++it) x += f_->llt.solve(Vector(b - Sg * x));  // iterative refinement
  w.tail(n - 1) = x;
  w.array() -= W_.dot(w) / W_.sum();
  return w;
}

double PoissonSolver::residual(const Vector& w, const Vector& v) const {
  const Vector Wv = W_.cwiseProduct(v);
  return (S_ * w + Wv).norm() / std::max(Wv.norm(), 1e-300);
}

HMinusResult hminus_rayleigh_floor(const SparseMatrix& a_sym, const PoissonSolver& solver, double lambda, int nev) {
  const SparseMatrix& S = solver.stiffness();
  const Vector& W = solver.weights();
  const int n = static_cast<int>(S.rows());
  if (a_sym.rows() != n) throw std::invalid_argument("operator and Laplacian grids differ");
  // In the potential w the density is v = −S w / W, automatically of zero mean.
  const SparseMatrix B = S * W.cwiseSqrt().cwiseInverse().asDiagonal();
  SparseMatrix T = B * a_sym * SparseMatrix(B.transpose());
  T = 0.5 * (T + SparseMatrix(T.transpose()));
  const SparseMatrix Tp = T.bottomRightCorner(n - 1, n - 1);
  const SparseMatrix Sp = S.bottomRightCorner(n - 1, n - 1);
  SparseEigenOptions opt;
  opt.nev = nev;
  opt.tol = 1e-12;
  const Spectrum sp = lowest_generalized(Tp, Sp, opt);
  HMinusResult r;
  r.value = sp.values[0] / lambda;
  r.w = Vector::Zero(n);
  r.w.tail(n - 1) = sp.vectors.col(0);
  r.w.array() -= W.dot(r.w) / W.sum();
  r.v = -(S * r.w).cwiseQuotient(W);
  r.grad_w2 = r.w.dot(S * r.w);
  r.v_norm2 = W.dot(r.v.cwiseProduct(r.v));
  if (!(r.grad_w2 > 0)) throw NumericalError("H^-1 Gram matrix is not positive on the mean-zero subspace");
  return r;
}

int count_below(const Vector& values, double threshold) {
  return static_cast<int>((values.array() < threshold).count());
}

double hausdorff(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("hausdorff distance of an empty set");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  auto one_way = [](const std::vector<double>& x, const std::vector<double>& y) {
    double d = 0;
    for (double v : x) {
      auto it = std::lower_bound(y.begin(), y.end(), v);
      double best = 1e300;
      if (it != y.end()) best = *it - v;
      if (it != y.begin()) best = std::min(best, v - *std::prev(it));
      d = std::max(d, best);
    }
    return d;
  };
  return std::max(one_way(a, b), one_way(b, a));
}

}  // namespace nlspec
