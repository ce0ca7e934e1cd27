#include <gtest/gtest.h>

#include "nlspec/eigen.hpp"
#include "nlspec/operators1d.hpp"
#include "support.hpp"

namespace nlspec {
namespace {

using test::aligned;
using test::ellipse;
using test::kD0;
using test::kernel;
using test::thermo;
using test::whole;

Vector as_vector(const std::vector<double>& v) { return Eigen::Map<const Vector>(v.data(), v.size()); }

TEST(WholeLine, DerivativeIsZeroMode) {
  const FrontProfile& p = whole();
  const DiscreteOperator L = build_L_whole(p);
  const Vector d = as_vector(p.dm);
  EXPECT_LT((L.matrix * d).norm() / d.norm(), 1e-4);
}

TEST(WholeLine, ZeroModeResidualShrinksWithRefinement) {
  auto residual = [](const FrontProfile& p) {
    const Vector d = as_vector(p.dm);
    return (build_L_whole(p).matrix * d).norm() / d.norm();
  };
  const double coarse = residual(whole(801)), fine = residual(whole(1601));
  EXPECT_GT(std::log2(coarse / fine), 3.0);
}

TEST(WholeLine, SpectrumStartsAtZero) {
  const Spectrum sp = lowest_dense(build_L_whole(whole()).matrix, 2);
  EXPECT_LT(std::abs(sp.values[0]), 1e-8);
  EXPECT_GT(sp.values[1], 0.1);
}

TEST(WholeLine, SymmetricWithMultiplier) {
  const FrontProfile& p = whole();
  const DiscreteOperator L = build_L_whole(p);
  EXPECT_EQ(symmetry_defect(L.matrix), 0.0);
  for (int i = 0; i < L.size(); i += 97)
    EXPECT_NEAR(L.multiplier[i], 1.0 / mobility(p.m[i], thermo()), 1e-12);
}

TEST(Interval, AlignedSpacingMakesCellEdges) {
  for (double lam : {0.25, 0.2, 0.15, 0.1}) {
    const double h = aligned_spacing(lam, kD0, 0.025);
    const double ratio = kD0 / lam / h;
    EXPECT_NEAR(ratio - std::floor(ratio), 0.5, 1e-9);
    EXPECT_NEAR(h, 0.025, 0.0125);
  }
  EXPECT_THROW(interval_grid(whole(), 0.1, kD0), std::exception);
}

TEST(Interval, PrincipalPairOfL0) {
  for (double lam : {0.2, 0.1}) {
    const DiscreteOperator L = build_L0(aligned(lam), lam, kD0);
    const Principal pr = principal_pair(L);
    EXPECT_GT(pr.value, 0.0);
    EXPECT_LT(pr.value, 0.1);
    EXPECT_GT(pr.second - pr.value, 0.2);
    EXPECT_GT(pr.vector.minCoeff(), 0.0);
    EXPECT_NEAR(L.grid.h * pr.vector.squaredNorm(), 1.0, 1e-12);
  }
}

TEST(Interval, PrincipalValueDecreasesWithLambda) {
  const double a = principal_pair(build_L0(aligned(0.2), 0.2, kD0)).value;
  const double b = principal_pair(build_L0(aligned(0.1), 0.1, kD0)).value;
  EXPECT_LT(b, a);
}

TEST(Interval, EvenParity) {
  const DiscreteOperator L = build_L0(aligned(0.1), 0.1, kD0);
  const Principal pr = principal_pair(L);
  const int n = L.size();
  for (int i = 0; i < n; ++i) EXPECT_NEAR(pr.vector[i], pr.vector[n - 1 - i], 1e-10);
}

TEST(Interval, ZeroParametersReproduceL0) {
  const double lam = 0.1, L = ellipse().length();
  const DiscreteOperator a = build_Ls(aligned(lam), ApproxSolutionParams::zero(lam), L, 1.3, kD0);
  EXPECT_EQ(max_abs(a.matrix - build_L0(aligned(lam), lam, kD0).matrix), 0.0);
  EXPECT_EQ(mobility_expansion_defect(aligned(lam), ApproxSolutionParams::zero(lam), L, 1.3, kD0), 0.0);
}

TEST(Interval, ZeroFrequencySliceIsL0) {
  const double lam = 0.2;
  const DiscreteOperator a = build_Lh(aligned(lam), kernel(), 0.0, lam, kD0);
  EXPECT_EQ(max_abs(a.matrix - build_L0(aligned(lam), lam, kD0).matrix), 0.0);
}

TEST(Interval, StretchConjugacy) {
  const double lam = 0.1, L = ellipse().length(), s = 0.3 * L;
  ApproxSolutionParams par;
  par.lambda = lam;
  const DiscreteOperator a = build_Ls(aligned(lam), par, L, s, kD0);
  const DiscreteOperator b = build_L1s(aligned(lam), kernel(), par, L, s, kD0);
  const Spectrum sa = full_spectrum(a.matrix, false), sb = full_spectrum(b.matrix, false);
  EXPECT_LT((sa.values - sb.values).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_NEAR(b.grid.h, lam * a.grid.h, 1e-15);
}

TEST(Interval, MobilityExpansionIsSecondOrder) {
  const double L = ellipse().length();
  std::vector<double> d;
  for (double lam : {0.2, 0.1}) {
    ApproxSolutionParams par;
    par.lambda = lam;
    d.push_back(mobility_expansion_defect(aligned(lam), par, L, 0.7, kD0));
  }
  EXPECT_GT(std::log2(d[0] / d[1]), 1.7);
}

TEST(Interval, HighFrequencyRaisesSpectrum) {
  const double lam = 0.2;
  double prev = principal_pair(build_L0(aligned(lam), lam, kD0)).value;
  for (double h : {0.5, 2.0, 20.0}) {
    const double v = principal_pair(build_Lh(aligned(lam), kernel(), h, lam, kD0)).value;
    EXPECT_GT(v, prev);
    prev = v;
  }
  // Jʰ → 0, leaving the multiplier 1/σ(m̄) whose minimum 1/β sits at the interface.
  const double v = principal_pair(build_Lh(aligned(lam), kernel(), 100.0, lam, kD0)).value;
  EXPECT_GT(v, 1.0 / thermo().beta - 0.02);
  EXPECT_LT(v, 1.0 / thermo().beta + 0.05);
}

TEST(Interval, EigenfunctionsDecay) {
  const DiscreteOperator L = build_L0(aligned(0.1), 0.1, kD0);
  const Spectrum sp = lowest_dense(L.matrix, 1);
  const double thr = 1.0 / mobility(thermo().m_beta, thermo()) - 1.0;
  const auto rep = eigenfunction_decay_check(L, sp, thr, 0.3);
  ASSERT_EQ(rep.size(), 1u);
  EXPECT_TRUE(rep[0].usable);
  EXPECT_GT(rep[0].rate, 0.0);
}

}  // namespace
}  // namespace nlspec
