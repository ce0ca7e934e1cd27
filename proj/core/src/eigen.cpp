#include "nlspec/eigen.hpp"

#include <lapacke.h>
#include <arpack.h>

#include <Eigen/CholmodSupport>
#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <sstream>

#include "nlspec/errors.hpp"

namespace nlspec {

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

double symmetry_defect(const Matrix& m) {
  const double s = max_abs(m);
  return s > 0 ? (m - m.transpose()).cwiseAbs().maxCoeff() / s : 0.0;
}

double symmetry_defect(const SparseMatrix& m) {
  SparseMatrix d = m - SparseMatrix(m.transpose());
  double mx = 0, dm = 0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) mx = std::max(mx, std::abs(it.value()));
  for (int k = 0; k < d.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(d, k); it; ++it) dm = std::max(dm, std::abs(it.value()));
  return mx > 0 ? dm / mx : 0.0;
}

namespace {

template <class M>
double norm_inf(const M& m) {
  return Matrix(m.cwiseAbs()).rowwise().sum().maxCoeff();
}

double norm_inf_sparse(const SparseMatrix& m) {
  Vector rs = Vector::Zero(m.rows());
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) rs[it.row()] += std::abs(it.value());
  return m.rows() ? rs.maxCoeff() : 0.0;
}

void check_residuals(Spectrum& sp, const auto& apply, const auto& applyB, double scale) {
  double res = 0;
  for (int j = 0; j < sp.vectors.cols(); ++j) {
    const Vector v = sp.vectors.col(j);
    res = std::max(res, (apply(v) - sp.values[j] * applyB(v)).norm());
  }
  sp.max_residual = scale > 0 ? res / scale : res;
  if (sp.vectors.cols() > 0) {
    Matrix bv(sp.vectors.rows(), sp.vectors.cols());
    for (int j = 0; j < sp.vectors.cols(); ++j) bv.col(j) = applyB(Vector(sp.vectors.col(j)));
    const Matrix g = sp.vectors.transpose() * bv - Matrix::Identity(sp.vectors.cols(), sp.vectors.cols());
    sp.orthogonality = max_abs(g);
  }
}

void require_symmetric(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix is not square");
  const double d = symmetry_defect(m);
  if (d > tol) {
    std::ostringstream os;
    os << "matrix is not symmetric (relative defect " << d << ")";
    throw NumericalError(os.str());
  }
}

}  // namespace

Spectrum full_spectrum(const Matrix& m, bool vectors, double sym_tol) {
  require_symmetric(m, sym_tol);
  const int n = static_cast<int>(m.rows());
  Spectrum sp;
  Matrix a = 0.5 * (m + m.transpose());
  sp.values.resize(n);
  if (n == 0) return sp;
  const int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'L', n, a.data(), n, sp.values.data());
  if (info != 0) throw NumericalError("dense symmetric eigensolver failed");
  if (vectors) {
    sp.vectors = std::move(a);
    check_residuals(
        sp, [&](const Vector& v) { return Vector(m * v); }, [](const Vector& v) { return v; }, norm_inf(m));
  }
  return sp;
}

Spectrum lowest_dense(const Matrix& m, int k) {
  require_symmetric(m, 1e-12);
  const int n = static_cast<int>(m.rows());
  k = std::clamp(k, 1, n);
  Matrix a = 0.5 * (m + m.transpose());
  Spectrum sp;
  Vector w(n);
  Matrix z(n, k);
  std::vector<lapack_int> supp(2 * k);
  lapack_int found = 0;
  const int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n, a.data(), n, 0.0, 0.0, 1, k, 0.0, &found,
                                  w.data(), z.data(), n, supp.data());
  if (info != 0 || found != k) throw NumericalError("partial dense eigensolver failed");
  sp.values = w.head(k);
  sp.vectors = std::move(z);
  check_residuals(
      sp, [&](const Vector& v) { return Vector(m * v); }, [](const Vector& v) { return v; }, norm_inf(m));
  return sp;
}

Spectrum generalized_dense(const Matrix& am, const Matrix& bm) {
  require_symmetric(am, 1e-12);
  require_symmetric(bm, 1e-12);
  const int n = static_cast<int>(am.rows());
  Matrix a = 0.5 * (am + am.transpose()), b = 0.5 * (bm + bm.transpose());
  Spectrum sp;
  sp.values.resize(n);
  const int info = LAPACKE_dsygvd(LAPACK_COL_MAJOR, 1, 'V', 'L', n, a.data(), n, b.data(), n, sp.values.data());
  if (info != 0) throw NumericalError("generalized dense eigensolver failed (B not positive definite?)");
  sp.vectors = std::move(a);
  check_residuals(
      sp, [&](const Vector& v) { return Vector(am * v); }, [&](const Vector& v) { return Vector(bm * v); },
      norm_inf(am));
  return sp;
}

namespace {

// ARPACK keeps state in Fortran SAVE variables.
std::mutex& arpack_mutex() {
  static std::mutex mu;
  return mu;
}

using Cholmod = Eigen::CholmodSupernodalLLT<SparseMatrix, Eigen::Lower>;

SparseMatrix identity_like(const SparseMatrix& a) {
  SparseMatrix i(a.rows(), a.cols());
  i.setIdentity();
  return i;
}

Spectrum shift_invert(const SparseMatrix& a, const SparseMatrix* b, const SparseEigenOptions& opt) {
  const int n = static_cast<int>(a.rows());
  if (a.rows() != a.cols()) throw std::invalid_argument("matrix is not square");
  const int nev = std::clamp(opt.nev, 1, std::max(1, n - 2));
  if (n < 16) {
    // Too small for Lanczos; fall back to dense.
    Spectrum d = b ? generalized_dense(Matrix(a), Matrix(*b)) : full_spectrum(Matrix(a));
    Spectrum out;
    out.values = d.values.head(nev);
    out.vectors = d.vectors.leftCols(nev);
    out.max_residual = d.max_residual;
    out.orthogonality = d.orthogonality;
    return out;
  }
  const SparseMatrix bb = b ? *b : identity_like(a);
  double sigma = opt.shift;
  if (!(sigma < 0)) sigma = -1e-3;
  Cholmod llt;
  bool ok = false;
  for (int t = 0; t < 80; ++t) {
    SparseMatrix shifted = a - sigma * bb;
    llt.compute(shifted);
    if (llt.info() == Eigen::Success) {
      ok = true;
      break;
    }
    sigma *= 2.0;
  }
  if (!ok) throw NumericalError("could not find a shift below the spectrum");

  const int ncv = std::min(n, opt.ncv > 0 ? opt.ncv : std::max(2 * nev + 1, 30));
  std::vector<double> resid(n), v(static_cast<std::size_t>(n) * ncv), workd(3 * static_cast<std::size_t>(n));
  const int lworkl = ncv * (ncv + 8);
  std::vector<double> workl(lworkl);
  for (int i = 0; i < n; ++i) resid[i] = 1.0 + 0.25 * std::sin(0.7 * i + 0.3);
  a_int iparam[11] = {0}, ipntr[14] = {0};
  iparam[0] = 1;
  iparam[2] = opt.max_iterations;
  iparam[6] = 3;
  a_int ido = 0, info = 1;
  const char* bmat = b ? "G" : "I";

  Spectrum sp;
  sp.shift = sigma;
  std::lock_guard lk(arpack_mutex());
  for (;;) {
    dsaupd_c(&ido, bmat, n, "LM", nev, opt.tol, resid.data(), ncv, v.data(), n, iparam, ipntr, workd.data(),
             workl.data(), lworkl, &info);
    if (ido == -1 || ido == 1) {
      Eigen::Map<const Vector> x(&workd[ipntr[0] - 1], n);
      Eigen::Map<Vector> y(&workd[ipntr[1] - 1], n);
      if (!b) {
        y = llt.solve(Vector(x));
      } else if (ido == -1) {
        y = llt.solve(Vector(bb * x));
      } else {
        Eigen::Map<const Vector> bx(&workd[ipntr[2] - 1], n);
        y = llt.solve(Vector(bx));
      }
    } else if (ido == 2) {
      Eigen::Map<const Vector> x(&workd[ipntr[0] - 1], n);
      Eigen::Map<Vector> y(&workd[ipntr[1] - 1], n);
      y = bb * x;
    } else {
      break;
    }
  }
  if (info < 0) {
    std::ostringstream os;
    os << "Lanczos iteration failed (info " << info << ")";
    throw NumericalError(os.str());
  }
  if (info == 1) throw NumericalError("Lanczos iteration hit the iteration limit");
  std::vector<a_int> select(ncv);
  std::vector<double> d(nev);
  std::vector<double> z(static_cast<std::size_t>(n) * nev);
  a_int info2 = 0;
  dseupd_c(1, "A", select.data(), d.data(), z.data(), n, sigma, bmat, n, "LM", nev, opt.tol, resid.data(), ncv,
           v.data(), n, iparam, ipntr, workd.data(), workl.data(), lworkl, &info2);
  if (info2 != 0) throw NumericalError("Lanczos eigenvector extraction failed");
  std::vector<int> order(nev);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return d[i] < d[j]; });
  sp.values.resize(nev);
  sp.vectors.resize(n, nev);
  for (int c = 0; c < nev; ++c) {
    sp.values[c] = d[order[c]];
    sp.vectors.col(c) = Eigen::Map<const Vector>(&z[static_cast<std::size_t>(order[c]) * n], n);
  }
  check_residuals(
      sp, [&](const Vector& x) { return Vector(a * x); }, [&](const Vector& x) { return Vector(bb * x); },
      norm_inf_sparse(a));
  return sp;
}

}  // namespace

Spectrum lowest_eigenpairs(const SparseMatrix& a, const SparseEigenOptions& opt) { return shift_invert(a, nullptr, opt); }

Spectrum lowest_generalized(const SparseMatrix& a, const SparseMatrix& b, const SparseEigenOptions& opt) {
  return shift_invert(a, &b, opt);
}

namespace {

template <class Solve, class Apply>
InverseIteration run_inverse(const Solve& solve, const Apply& apply, const Vector& start, double tol, int maxit) {
  InverseIteration r;
  Vector x = start.normalized();
  double mu = x.dot(apply(x));
  for (int it = 1; it <= maxit; ++it) {
    Vector y = solve(x);
    y.normalize();
    if (y.dot(x) < 0) y = -y;
    const double mu2 = y.dot(apply(y));
    const double dx = (y - x).norm();
    x = std::move(y);
    r.iterations = it;
    if (std::abs(mu2 - mu) <= tol * std::max(1.0, std::abs(mu2)) && dx < 1e-10) {
      mu = mu2;
      break;
    }
    mu = mu2;
  }
  r.value = mu;
  r.vector = x;
  return r;
}

}  // namespace

InverseIteration inverse_iteration(const SparseMatrix& a, double shift, const Vector& start, double tol,
                                   int max_iterations) {
  SparseMatrix m = a - shift * identity_like(a);
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(m);
  if (ldlt.info() != Eigen::Success) throw NumericalError("inverse iteration factorization failed");
  return run_inverse([&](const Vector& x) { return Vector(ldlt.solve(x)); },
                     [&](const Vector& x) { return Vector(a * x); }, start, tol, max_iterations);
}

InverseIteration inverse_iteration(const Matrix& a, double shift, const Vector& start, double tol,
                                   int max_iterations) {
  Eigen::PartialPivLU<Matrix> lu(a - shift * Matrix::Identity(a.rows(), a.cols()));
  return run_inverse([&](const Vector& x) { return Vector(lu.solve(x)); },
                     [&](const Vector& x) { return Vector(a * x); }, start, tol, max_iterations);
}

void orient_positive(Eigen::Ref<Vector> v) {
  if (v.sum() < 0) v = -v;
}

}  // namespace nlspec
