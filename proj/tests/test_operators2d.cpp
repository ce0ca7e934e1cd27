#include <gtest/gtest.h>

#include <random>

#include "nlspec/eigen.hpp"
#include "nlspec/operators2d.hpp"
#include "nlspec/spectra.hpp"
#include "support.hpp"

namespace nlspec {
namespace {

using test::ellipse;
using test::kD0;
using test::kernel;
using test::setting;
using test::thermo;

const Setting2D& flat_setting(double lambda) {
  static std::map<double, Setting2D> memo;
  auto it = memo.find(lambda);
  if (it == memo.end())
    it = memo.emplace(lambda, make_setting(thermo(), kernel(), make_circle(1e6), ApproxSolutionParams::zero(lambda),
                                           kD0, {}, ellipse().length()))
             .first;
  return it->second;
}

std::vector<double> block_union(const Setting2D& st) {
  std::vector<double> u;
  for (int n = -st.grid.n_s / 2; n < st.grid.n_s - st.grid.n_s / 2; ++n) {
    const double k = 2 * test::kPi * n / st.grid.period;
    const Spectrum sp = full_spectrum(build_block(st, k).matrix, false);
    u.insert(u.end(), sp.values.data(), sp.values.data() + sp.size());
  }
  return u;
}

TEST(Setting, GridShape) {
  const Setting2D& st = setting(0.2);
  EXPECT_NEAR(st.grid.period, ellipse().length(), 1e-12);
  EXPECT_NEAR(st.grid.z.half_width(), kD0 / 0.2, 1e-12);
  EXPECT_NEAR(st.a, st.grid.ds() / 0.2, 1e-12);
  EXPECT_GT(st.lattice_c, 0.0);
}

TEST(Separable, SpectrumIsUnionOfBlocks) {
  const Setting2D& st = setting(0.2);
  const DiscreteOperator2D G = build_G_lambda(st);
  EXPECT_EQ(symmetry_defect(G.matrix), 0.0);
  const Spectrum sp = full_spectrum(Matrix(G.matrix), false);
  const std::vector<double> u = block_union(st);
  EXPECT_EQ(static_cast<int>(u.size()), sp.size());
  EXPECT_LT(hausdorff(std::vector<double>(sp.values.data(), sp.values.data() + sp.size()), u), 1e-11);
}

TEST(Separable, ZeroFrequencyBlockIsLowest) {
  const Setting2D& st = setting(0.2);
  const double p0 = principal_pair(build_block(st, 0.0)).value;
  for (double k : {0.5, 2.0, 10.0}) EXPECT_GT(principal_pair(build_block(st, k)).value, p0);
  SparseEigenOptions o;
  o.nev = 1;
  EXPECT_NEAR(lowest_eigenpairs(build_G_lambda(st).matrix, o).values[0], p0, 1e-10);
}

TEST(Curvilinear, FlatProxyIsSeparable) {
  const Setting2D& st = flat_setting(0.2);
  SparseEigenOptions o;
  o.nev = 4;
  const Spectrum a = lowest_eigenpairs(build_A_cal(st).matrix, o);
  const Spectrum g = lowest_eigenpairs(build_G_lambda(st).matrix, o);
  EXPECT_LT((a.values - g.values).cwiseAbs().maxCoeff(), 1e-5);
  const DiscreteOperator2D s = build_A_cal(st, false);
  EXPECT_LT(max_abs(Matrix(s.matrix - build_G_lambda(st).matrix)), 1e-12);
}

TEST(Curvilinear, FlatProxyLambdaOperatorMatchesBlocks) {
  const Setting2D& st = flat_setting(0.2);
  SparseEigenOptions o;
  o.nev = 1;
  const double a = lowest_eigenpairs(build_L_lambda(st).matrix, o).values[0];
  EXPECT_NEAR(a, principal_pair(build_block(st, 0.0)).value, 1e-6);
}

TEST(Curvilinear, ConjugateToLambdaOperator) {
  const Setting2D& st = setting(0.2);
  SparseEigenOptions o;
  o.nev = 3;
  const Spectrum a = lowest_eigenpairs(build_A_cal(st).matrix, o);
  const Spectrum l = lowest_eigenpairs(build_L_lambda(st).matrix, o);
  EXPECT_LT((a.values - l.values).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Curvilinear, PrincipalVectorPositive) {
  const Setting2D& st = setting(0.2);
  SparseEigenOptions o;
  o.nev = 2;
  const Spectrum a = lowest_eigenpairs(build_A_cal(st).matrix, o);
  Vector v = a.vectors.col(0);
  orient_positive(v);
  EXPECT_GT(v.minCoeff(), 0.0);
  EXPECT_GT(a.values[1] - a.values[0], 0.0);
  EXPECT_LT(std::abs(a.values[0]), 0.2);
}

TEST(WeightedP, ConjugateToCurvilinearPencil) {
  const Setting2D& st = setting(0.2);
  const WeightedOperatorP P = build_P_weighted(st);
  EXPECT_LT(symmetry_defect(P.symmetric_form()), 1e-14);
  SparseMatrix I(P.p.size(), P.p.size());
  I.setIdentity();
  SparseEigenOptions o;
  o.nev = 3;
  const Spectrum s1 = lowest_eigenpairs(SparseMatrix(I - P.symmetric_form()), o);
  const Spectrum s2 = lowest_generalized(build_A_cal(st).matrix, SparseMatrix(P.p.cwiseInverse().asDiagonal()), o);
  EXPECT_LT((s1.values - s2.values).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(WeightedP, PositivityImproving) {
  const Setting2D& st = setting(0.2);
  const WeightedOperatorP P = build_P_weighted(st);
  const int n = P.positivity_steps(0, 4 * st.grid.n_s + 4 * st.grid.n_z());
  EXPECT_GT(n, 1);
  const Vector x = P.apply(Vector::Ones(P.p.size()));
  EXPECT_GT(x.minCoeff(), 0.0);
}

TEST(Strip, SymmetricAndAboveFloor) {
  const StripOperator& F = [] {
    static const StripOperator f = build_full_A(setting(0.2));
    return std::cref(f);
  }();
  EXPECT_LT(symmetry_defect(F.op.matrix), 1e-14);
  // c* = inf 1/σ(m_A) over |r| >= d0/2 lies between 1 and 1/σ(m_β).
  EXPECT_GT(F.c_star, 1.0);
  EXPECT_LT(F.c_star, 1.0 / mobility(thermo().m_beta, thermo()));
  // Bracket from |m̄(z_b)| ∓ λ(sup|m̄′|·g + φ) at the first node z_b >= d0/(2λ).
  const Setting2D& st = setting(0.2);
  const FrontProfile& p = st.profile;
  const int jb = static_cast<int>(std::ceil(0.5 * kD0 / 0.2 / p.grid.h - 1e-12));
  const double mb = std::abs(p.value(jb));
  double dmax = 0;
  for (double d : p.dm) dmax = std::max(dmax, std::abs(d));
  const double shift = 0.2 * (dmax * st.params.g_amplitude + st.params.phi_amplitude);
  EXPECT_GE(F.c_star, 1.0 / mobility(mb - shift, thermo()) - 1e-12);
  EXPECT_LE(F.c_star, 1.0 / mobility(mb, thermo()) + 1e-12);
  SparseEigenOptions o;
  o.nev = 1;
  const Spectrum sp = lowest_eigenpairs(F.op.matrix, o);
  EXPECT_GT(sp.values[0], -0.2);
  EXPECT_NEAR(F.chart.r.h, 0.2 * setting(0.2).hz(), 1e-14);
  EXPECT_NEAR(F.chart.r.half_width(), 3 * kD0, 0.2 * setting(0.2).hz());
}

TEST(Strip, CutoffScanStopsImmediatelyInsideTube) {
  static const StripOperator F = build_full_A(setting(0.2));
  Vector x = Vector::Zero(F.op.size());
  for (int q = 0; q < F.op.size(); ++q)
    if (std::abs(F.r[q]) < kD0 / 4) x[q] = 1.0;
  const CutoffScan sc = cutoff_cross_term_scan(F, x, 0.2, kD0);
  EXPECT_EQ(sc.k_bar, 0);
}

TEST(Strip, BridgeSamplesAreDeterministic) {
  static const StripOperator F = build_full_A(setting(0.2));
  const DiscreteOperator2D L = build_L_lambda(setting(0.2));
  const auto a = bridge_samples(F, L, 3, 7), b = bridge_samples(F, L, 3, 7), c = bridge_samples(F, L, 3, 8);
  ASSERT_EQ(a.size(), 3u);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(a[i].lhs, b[i].lhs);
    EXPECT_EQ(a[i].rhs, b[i].rhs);
    EXPECT_GT(a[i].norm2, 0.0);
  }
  EXPECT_NE(a[0].lhs, c[0].lhs);
}

}  // namespace
}  // namespace nlspec
