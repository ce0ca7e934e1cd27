#include <gtest/gtest.h>

#include <limits>
#include <random>

#include "nlspec/errors.hpp"
#include "nlspec/profile.hpp"
#include "support.hpp"

namespace nlspec {
namespace {

using test::thermo;
using test::whole;

TEST(Thermodynamics, MbetaMatchesBisection) {
  EXPECT_NEAR(thermo().m_beta, test::bisect_mbeta(2.0), 1e-13);
  EXPECT_NEAR(thermo().m_beta, 0.95750, 1e-5);
}

TEST(Thermodynamics, MbetaNearCriticalFollowsSeries) {
  const double beta = 1.001;
  const double series = std::sqrt(3 * (beta - 1) / (beta * beta * beta));
  EXPECT_NEAR(solve_mbeta(beta).m_beta / series, 1.0, 0.05);
}

TEST(Thermodynamics, RejectsBetaAtMostOne) {
  EXPECT_THROW(solve_mbeta(1.0), ConfigError);
  EXPECT_THROW(solve_mbeta(0.5), ConfigError);
}

TEST(Thermodynamics, MobilityValues) {
  EXPECT_EQ(mobility(1.0, thermo()), 0.0);
  EXPECT_EQ(mobility(-1.0, thermo()), 0.0);
  EXPECT_EQ(mobility(0.0, thermo()), 2.0);
  EXPECT_NEAR(1.0 / mobility(thermo().m_beta, thermo()), 6.01, 0.01);
  EXPECT_GT(1.0 / mobility(thermo().m_beta, thermo()), 1.0);
}

TEST(Thermodynamics, DoubleWellMinimaAtMbeta) {
  const Thermodynamics& th = thermo();
  EXPECT_NEAR(potential_prime(th.m_beta, th), 0.0, 1e-13);
  EXPECT_NEAR(potential_prime(-th.m_beta, th), 0.0, 1e-13);
  const double vb = potential(th.m_beta, th);
  for (double m = -0.999; m <= 0.999; m += 0.001) {
    if (std::abs(std::abs(m) - th.m_beta) < 1e-3) continue;
    EXPECT_GT(potential(m, th) - vb, 0.0) << m;
  }
  // -m + atanh(m)/β
  for (double m : {-0.7, 0.1, 0.5}) EXPECT_NEAR(potential_prime(m, th), -m + std::atanh(m) / th.beta, 1e-14);
}

TEST(FreeEnergy, VanishesAtPureStatesAndMatchesClosedFormAtZero) {
  const RectGrid g{0, 0, 0.1, 0.1, 20, 15};
  const Thermodynamics& th = thermo();
  EXPECT_NEAR(free_energy(g, std::vector<double>(g.size(), th.m_beta), th, test::kernel()), 0.0, 1e-14);
  EXPECT_NEAR(free_energy(g, std::vector<double>(g.size(), -th.m_beta), th, test::kernel()), 0.0, 1e-14);
  const double f0 = free_energy(g, std::vector<double>(g.size(), 0.0), th, test::kernel());
  EXPECT_NEAR(f0, g.area() * (potential(0.0, th) - potential(th.m_beta, th)), 1e-13);
  EXPECT_GT(f0, 0.0);
}

TEST(Front, FixedPointResidualAndRefinedCheck) {
  const FrontProfile& p = whole();
  EXPECT_LT(fixed_point_residual(p), 1e-10);
  // Both routes: cubic interpolation onto a grid twice as fine.
  EXPECT_LT(refined_fixed_point_residual(p, test::kernel(), 2), 1e-6);
}

TEST(Front, AntisymmetricMonotoneWithLimits) {
  const FrontProfile& p = whole();
  const int n = p.grid.size();
  for (int i = 0; i < n; ++i) EXPECT_EQ(p.m[i], -p.m[n - 1 - i]);
  EXPECT_EQ(p.m[p.center()], 0.0);
  for (int i = 1; i + 1 < n; ++i)
    if (std::abs(p.m[i]) < thermo().m_beta - 1e-9) EXPECT_GT(p.dm[i], 0.0) << i;
  EXPECT_NEAR(p.m.back(), thermo().m_beta, 1e-12);
  EXPECT_NEAR(p.m.front(), -thermo().m_beta, 1e-12);
  EXPECT_EQ(p.value(p.grid.half + 10), thermo().m_beta);
  EXPECT_EQ(p.value(-p.grid.half - 10), -thermo().m_beta);
}

TEST(Front, DecayRateMatchesLinearization) {
  // Tail δ = m_β − m̄ solves δ = σ(m_β)J̄⋆δ, so e^{−αz} needs σ(m_β)∫J̄(x)cosh(αx)dx = 1.
  const double sig = mobility(thermo().m_beta, thermo());
  auto F = [&](double a) {
    const int n = 20000;
    const double h = 2.0 / n;
    double s = 0;
    for (int i = 0; i <= n; ++i) {
      const double x = -1 + i * h;
      s += (i == 0 || i == n ? 1 : (i % 2 ? 4 : 2)) * test::marginal_closed_form(x) * std::cosh(a * x);
    }
    return sig * s * h / 3 - 1;
  };
  double lo = 0.1, hi = 20;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (F(mid) < 0 ? lo : hi) = mid;
  }
  const DecayFit f = decay_fit(whole());
  EXPECT_GT(f.alpha, 0.0);
  EXPECT_GT(f.r2, 0.999);
  EXPECT_NEAR(f.alpha / lo, 1.0, 0.01);
}

TEST(Front, DecayFitStableOnHalfWindows) {
  const FrontProfile& p = whole();
  const DecayFit f = decay_fit(p);
  const DecayFit a = decay_fit_window(p, f.z_lo, f.z_lo + 0.4);
  const DecayFit b = decay_fit_window(p, f.z_lo + 0.4, f.z_lo + 0.8);
  EXPECT_NEAR(a.alpha / f.alpha, 1.0, 0.05);
  EXPECT_NEAR(b.alpha / f.alpha, 1.0, 0.05);
}

TEST(Front, RefinementConvergesToSameProfile) {
  const FrontProfile& a = whole(801);
  const FrontProfile& b = whole(1601);
  double d = 0;
  for (int j = -a.grid.half; j <= a.grid.half; ++j) d = std::max(d, std::abs(a.value(j) - b.value(2 * j)));
  EXPECT_LT(d, 1e-4);
}

TEST(Front, NonConvergenceIsNumericalError) {
  FrontSolveOptions o;
  o.max_iters = 3;
  EXPECT_THROW(solve_front(thermo(), marginal(test::kernel()), 20.0, 801, o), NumericalError);
}

TEST(ApproxSolution, ZeroParametersGiveProfile) {
  const FrontProfile& p = test::aligned(0.1);
  const ApproxSolutionParams z = ApproxSolutionParams::zero(0.1);
  EXPECT_TRUE(z.is_zero());
  for (int j = -40; j <= 40; ++j)
    for (double s : {0.0, 1.3, 5.0}) EXPECT_EQ(approx_solution(z, p, 9.0, s, j), p.value(j));
}

TEST(ApproxSolution, OrthogonalityOfFirstCorrection) {
  const double lam = 0.1;
  const FrontProfile& p = test::aligned(lam);
  const TubularChart ch = build_chart(test::ellipse(), 60.5 * p.grid.h * lam, 64, 60, true);
  const ApproxField f = build_mA(test::default_params(lam), p, ch);
  EXPECT_LT(std::abs(f.orthogonality), 1e-12);
  EXPECT_GT(f.min_sigma, 0.05);
}

TEST(ApproxSolution, FarFieldDeviationIsOrderLambda) {
  std::vector<double> lams{0.2, 0.1, 0.05}, dev;
  for (double lam : lams) {
    const FrontProfile& p = test::aligned(lam);
    const int j = static_cast<int>(std::lround(test::kD0 / lam / p.grid.h));
    double d = 0;
    for (double s = 0; s < 9.68; s += 0.1)
      d = std::max(d, std::abs(std::abs(approx_solution(test::default_params(lam), p, 9.688448, s, j)) - thermo().m_beta));
    dev.push_back(d);
  }
  const double slope = std::log(dev[0] / dev[2]) / std::log(lams[0] / lams[2]);
  EXPECT_GT(slope, 0.8);
}

TEST(FrontProperty, ResidualSmallForRandomBeta) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> B(1.5, 4.0);
  for (int i = 0; i < 4; ++i) {
    const Thermodynamics th = solve_mbeta(B(rng));
    EXPECT_NEAR(th.m_beta, test::bisect_mbeta(th.beta), 1e-12);
    const FrontProfile p = solve_front(th, marginal(test::kernel()), 20.0, 801);
    EXPECT_LT(fixed_point_residual(p), 1e-10);
    for (std::size_t k = 1; k < p.m.size(); ++k)
      EXPECT_GE(p.m[k] - p.m[k - 1], -4 * std::numeric_limits<double>::epsilon());
  }
}

}  // namespace
}  // namespace nlspec
