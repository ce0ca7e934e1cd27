#include <gtest/gtest.h>

#include <random>

#include "nlspec/eigen.hpp"
#include "nlspec/fit.hpp"
#include "nlspec/spectra.hpp"
#include "support.hpp"

namespace nlspec {
namespace {

using test::kPi;

Matrix random_symmetric(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N;
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = N(rng);
  return a;
}

// 1D Dirichlet Laplacian with n interior nodes on (0, 1).
SparseMatrix dirichlet_laplacian(int n) {
  const double h = 1.0 / (n + 1);
  std::vector<Eigen::Triplet<double>> t;
  for (int i = 0; i < n; ++i) {
    t.emplace_back(i, i, 2 / (h * h));
    if (i > 0) t.emplace_back(i, i - 1, -1 / (h * h));
    if (i + 1 < n) t.emplace_back(i, i + 1, -1 / (h * h));
  }
  SparseMatrix a(n, n);
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

double dirichlet_eigenvalue(int k, int n) {
  const double h = 1.0 / (n + 1);
  return 4 / (h * h) * std::pow(std::sin(k * kPi * h / 2), 2);
}

TEST(Dense, DiagonalSpectrumIsSorted) {
  Matrix d = Vector::LinSpaced(6, 5.0, 0.0).asDiagonal();
  const Spectrum sp = full_spectrum(d);
  for (int i = 0; i < 6; ++i) EXPECT_DOUBLE_EQ(sp.values[i], i);
}

TEST(Dense, TwoByTwo) {
  Matrix a(2, 2);
  a << 2, 1, 1, 2;
  const Spectrum sp = full_spectrum(a);
  EXPECT_NEAR(sp.values[0], 1.0, 1e-14);
  EXPECT_NEAR(sp.values[1], 3.0, 1e-14);
  EXPECT_NEAR(std::abs(sp.vectors(0, 0)), 1 / std::sqrt(2.0), 1e-14);
}

TEST(Dense, RandomReconstruction) {
  const Matrix a = random_symmetric(50, 3);
  const Spectrum sp = full_spectrum(a);
  const Matrix r = sp.vectors * sp.values.asDiagonal() * sp.vectors.transpose();
  EXPECT_LT(max_abs(r - a), 1e-12 * max_abs(a));
  EXPECT_LT(sp.orthogonality, 1e-13);
  EXPECT_LT(sp.max_residual, 1e-13);
  for (int i = 1; i < sp.size(); ++i) EXPECT_LE(sp.values[i - 1], sp.values[i]);
}

TEST(Dense, RejectsNonsymmetric) {
  Matrix a(2, 2);
  a << 1, 2, 0, 1;
  EXPECT_THROW(full_spectrum(a), std::exception);
}

TEST(Dense, LowestMatchesFull) {
  const Matrix a = random_symmetric(40, 4);
  const Spectrum f = full_spectrum(a, false), l = lowest_dense(a, 5);
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(l.values[i], f.values[i], 1e-12);
}

TEST(Dense, GeneralizedPencil) {
  const Matrix a = random_symmetric(20, 5);
  Matrix b = Matrix::Identity(20, 20);
  for (int i = 0; i < 20; ++i) b(i, i) = 1.0 + i;
  const Spectrum sp = generalized_dense(a, b);
  for (int k = 0; k < sp.size(); ++k)
    EXPECT_LT((a * sp.vectors.col(k) - sp.values[k] * b * sp.vectors.col(k)).norm(), 1e-11);
  EXPECT_LT(max_abs(sp.vectors.transpose() * b * sp.vectors - Matrix::Identity(20, 20)), 1e-12);
}

TEST(Sparse, DirichletLaplacian) {
  const int n = 400;
  SparseEigenOptions o;
  o.nev = 5;
  const Spectrum sp = lowest_eigenpairs(dirichlet_laplacian(n), o);
  for (int k = 0; k < 5; ++k) EXPECT_NEAR(sp.values[k], dirichlet_eigenvalue(k + 1, n), 1e-9 * sp.values[k]);
  EXPECT_NEAR(sp.values[0], kPi * kPi, 1e-4);
}

TEST(Sparse, MatchesDense) {
  const SparseMatrix a = dirichlet_laplacian(60);
  SparseEigenOptions o;
  o.nev = 6;
  const Spectrum s = lowest_eigenpairs(a, o), d = lowest_dense(Matrix(a), 6);
  for (int k = 0; k < 6; ++k) EXPECT_NEAR(s.values[k], d.values[k], 1e-9 * d.values[k]);
}

TEST(Sparse, IndefiniteShiftIsFound) {
  SparseMatrix a = dirichlet_laplacian(100);
  SparseMatrix I(100, 100);
  I.setIdentity();
  a = a - 50.0 * I;
  SparseEigenOptions o;
  o.nev = 2;
  const Spectrum sp = lowest_eigenpairs(a, o);
  EXPECT_NEAR(sp.values[0], dirichlet_eigenvalue(1, 100) - 50, 1e-8);
}

TEST(Sparse, GeneralizedMatchesDense) {
  const int n = 80;
  const SparseMatrix a = dirichlet_laplacian(n);
  Vector w(n);
  for (int i = 0; i < n; ++i) w[i] = 1.0 + 0.5 * std::sin(i);
  const SparseMatrix b = SparseMatrix(w.asDiagonal());
  SparseEigenOptions o;
  o.nev = 3;
  const Spectrum s = lowest_generalized(a, b, o);
  const Spectrum d = generalized_dense(Matrix(a), Matrix(b));
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(s.values[k], d.values[k], 1e-9 * d.values[k]);
}

TEST(InverseIteration, ConvergesToNearestEigenvalue) {
  const SparseMatrix a = dirichlet_laplacian(200);
  const InverseIteration it = inverse_iteration(a, 0.0, Vector::Ones(200));
  EXPECT_NEAR(it.value, dirichlet_eigenvalue(1, 200), 1e-9 * it.value);
  const InverseIteration dense = inverse_iteration(Matrix(a), 0.0, Vector::Ones(200));
  EXPECT_NEAR(dense.value, it.value, 1e-9 * it.value);
}

TEST(Orientation, NonnegativeSum) {
  Vector v(3);
  v << -1, -2, 0.5;
  orient_positive(v);
  EXPECT_GT(v.sum(), 0);
  EXPECT_EQ(v[0], 1);
}

TEST(Symmetry, DefectIsRelative) {
  Matrix a(2, 2);
  a << 1, 2, 2.5, 1;
  EXPECT_NEAR(symmetry_defect(a), 0.5 / 2.5, 1e-15);
  EXPECT_EQ(symmetry_defect(SparseMatrix(Matrix::Identity(3, 3).sparseView())), 0.0);
}

TEST(SetDistances, Hausdorff) {
  EXPECT_EQ(hausdorff({1, 2, 3}, {3, 2, 1}), 0.0);
  EXPECT_DOUBLE_EQ(hausdorff({0, 1}, {0, 1, 4}), 3.0);
  EXPECT_DOUBLE_EQ(hausdorff({0.5}, {0, 1}), 0.5);
}

TEST(SetDistances, CountBelowIsStrict) {
  Vector v(5);
  v << -1, 0, 0.5, 1, 2;
  EXPECT_EQ(count_below(v, 1.0), 3);
  EXPECT_EQ(count_below(v, -1.0), 0);
}

TEST(Fit, ExactLine) {
  const LineFit f = fit_line({0, 1, 2, 3}, {1, 3, 5, 7});
  EXPECT_NEAR(f.slope, 2, 1e-14);
  EXPECT_NEAR(f.intercept, 1, 1e-14);
  EXPECT_NEAR(f.r2, 1, 1e-14);
  EXPECT_EQ(f.points, 4);
}

TEST(Fit, PowerLaw) {
  std::vector<double> x{0.2, 0.1, 0.05}, y;
  for (double v : x) y.push_back(-3 * v * v);
  EXPECT_NEAR(fit_loglog(x, y).slope, 2.0, 1e-12);
}

TEST(Fit, Exponential) {
  std::vector<double> x, y;
  for (int i = 0; i < 10; ++i) {
    x.push_back(i);
    y.push_back(4 * std::exp(-0.7 * i));
  }
  const LineFit f = fit_semilog(x, y);
  EXPECT_NEAR(f.slope, -0.7, 1e-12);
  EXPECT_NEAR(std::exp(f.intercept), 4, 1e-11);
}

}  // namespace
}  // namespace nlspec
