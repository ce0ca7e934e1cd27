#include <gtest/gtest.h>

#include <random>

#include "nlspec/spectra.hpp"
#include "support.hpp"

namespace nlspec {
namespace {

using test::ellipse;
using test::kD0;
using test::kPi;
using test::setting;

const BlockTable& table(double lambda) {
  static std::map<double, BlockTable> memo;
  auto it = memo.find(lambda);
  if (it == memo.end()) it = memo.emplace(lambda, build_block_table(setting(lambda), 0.2)).first;
  return it->second;
}

// ψ₀⁰(z) on every s-row, times f(s).
Vector separable(const Setting2D& st, const Vector& psi, const std::function<double(double)>& f) {
  Vector x(st.grid.size());
  for (int i = 0; i < st.grid.n_s; ++i)
    for (int j = 0; j < st.grid.n_z(); ++j) x[st.grid.index(i, j)] = f(i * st.grid.ds()) * psi[j];
  return x;
}

const Vector& psi00(double lambda) {
  const BlockTable& t = table(lambda);
  for (std::size_t q = 0; q < t.modes.size(); ++q)
    if (t.modes[q] == 0) return t.principal[q].vector;
  throw std::logic_error("no zero mode");
}

TEST(BlockTableTest, ModesWithinCutoff) {
  const Setting2D& st = setting(0.2);
  const BlockTable& t = table(0.2);
  EXPECT_FALSE(t.modes.empty());
  for (std::size_t q = 0; q < t.modes.size(); ++q) {
    EXPECT_LE(std::abs(t.k[q] * 0.2), 0.2 + 1e-12);
    EXPECT_NEAR(t.k[q], 2 * kPi * t.modes[q] / st.grid.period, 1e-12);
    EXPECT_NEAR(st.hz() * t.principal[q].vector.squaredNorm(), 1.0, 1e-10);
  }
}

TEST(Decomposition, ConstantProfileIsPureZ) {
  const Setting2D& st = setting(0.2);
  const Vector x = separable(st, psi00(0.2), [](double) { return 1.0; });
  const DecompositionResult d = low_energy_decompose(st, table(0.2), x);
  EXPECT_NEAR(d.norm_Z2, 1.0, 1e-12);
  EXPECT_LT(d.norm_VR2, 1e-20);
  EXPECT_LT(d.grad_Z2, 1e-20);
  EXPECT_LT(d.reconstruction, 1e-12);
  for (double z : d.Z) EXPECT_NEAR(z, 1.0 / std::sqrt(st.grid.period), 1e-10);
}

TEST(Decomposition, HighFrequencyLandsInRemainder) {
  const Setting2D& st = setting(0.2);
  const int n = st.grid.n_s / 2 - 1;
  const double P = st.grid.period;
  const Vector x = separable(st, psi00(0.2), [&](double s) { return std::cos(2 * kPi * n * s / P); });
  const DecompositionResult d = low_energy_decompose(st, table(0.2), x);
  EXPECT_LT(d.norm_Z2, 1e-20);
  EXPECT_NEAR(d.norm_VR2, 1.0, 1e-10);
  EXPECT_NEAR(d.high_norm2, 1.0, 1e-10);
}

TEST(Decomposition, LowModeGradient) {
  const Setting2D& st = setting(0.2);
  const double P = st.grid.period, k = 2 * kPi / P;
  const Vector x = separable(st, psi00(0.2), [&](double s) { return std::cos(k * s); });
  const DecompositionResult d = low_energy_decompose(st, table(0.2), x);
  EXPECT_GT(d.norm_Z2, 0.99);
  EXPECT_NEAR(d.grad_Z2 / d.norm_Z2, k * k, 1e-6 * k * k);
  EXPECT_LT(d.reconstruction, 1e-12);
}

TEST(Poisson, CosineOracle) {
  const TubularChart ch = build_chart(ellipse(), 0.2, 256, 12, true);
  const PoissonSolver ps(ch, true);
  const double P = ch.curve.length();
  Vector v(ch.size());
  for (int i = 0; i < ch.n_s; ++i)
    for (int j = 0; j < ch.n_r(); ++j) v[ch.index(i, j)] = std::cos(2 * kPi * 3 * ch.s(i) / P);
  const Vector w = ps.solve(v);
  const double c = -std::pow(P / (2 * kPi * 3), 2);
  double err = 0;
  for (int q = 0; q < v.size(); ++q) err = std::max(err, std::abs(w[q] - c * v[q]));
  EXPECT_LT(err / std::abs(c), 1e-3);
  EXPECT_LT(ps.residual(w, v), 1e-10);
}

TEST(Poisson, ZeroDataZeroPotential) {
  const TubularChart ch = build_chart(ellipse(), 0.2, 64, 6, true);
  const PoissonSolver ps(ch);
  const Vector w = ps.solve(Vector::Zero(ch.size()));
  EXPECT_EQ(w.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Poisson, GreenIdentityAndMeanZero) {
  const TubularChart ch = build_chart(ellipse(), 0.2, 128, 8, true);
  const PoissonSolver ps(ch);
  const Vector& W = ps.weights();
  EXPECT_NEAR(W.sum(), ch.area(), 1e-12);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(-1, 1);
  Vector v(ch.size());
  for (int i = 0; i < v.size(); ++i) v[i] = U(rng);
  v.array() -= W.dot(v) / W.sum();
  const Vector w = ps.solve(v);
  EXPECT_NEAR(W.dot(w), 0.0, 1e-10 * w.cwiseAbs().maxCoeff());
  EXPECT_NEAR(ps.dirichlet(w), -w.dot(W.cwiseProduct(v)), 1e-10 * ps.dirichlet(w));
  EXPECT_LT(ps.residual(w, v), 1e-10);
  EXPECT_LT(symmetry_defect(ps.stiffness()), 1e-14);
  EXPECT_LT((ps.stiffness() * Vector::Ones(ch.size())).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(HMinus, IdentityGivesLaplacianBound) {
  const TubularChart ch = build_chart(ellipse(), 0.2, 96, 8, true);
  const PoissonSolver ps(ch);
  SparseMatrix I(ch.size(), ch.size());
  I.setIdentity();
  const double lam = 0.1;
  const HMinusResult h = hminus_rayleigh_floor(I, ps, lam);
  SparseEigenOptions o;
  o.nev = 2;
  const Spectrum lap = lowest_generalized(ps.stiffness(), SparseMatrix(ps.weights().asDiagonal()), o);
  EXPECT_NEAR(h.value, lap.values[1] / lam, 1e-8 * h.value);
  EXPECT_NEAR(ps.weights().dot(h.w), 0.0, 1e-10);
}

}  // namespace
}  // namespace nlspec
