#include <benchmark/benchmark.h>

#include "nlspec/operators1d.hpp"
#include "nlspec/operators2d.hpp"
#include "nlspec/profile.hpp"
#include "nlspec/spectra.hpp"

namespace {

using namespace nlspec;

const Thermodynamics& thermo() {
  static const Thermodynamics th = solve_mbeta(2.0);
  return th;
}

const FrontProfile& front() {
  static const FrontProfile p = solve_front(thermo(), marginal(make_default_kernel()), 20.0, 1601);
  return p;
}

const Setting2D& setting(double lambda) {
  static const Setting2D st = [&] {
    ApproxSolutionParams a;
    a.lambda = lambda;
    return make_setting(thermo(), make_default_kernel(), make_ellipse(2, 1), a, 0.15);
  }();
  return st;
}

void BM_SolveFront(benchmark::State& state) {
  const MarginalKernel mk = marginal(make_default_kernel());
  for (auto _ : state) benchmark::DoNotOptimize(solve_front(thermo(), mk, 20.0, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_SolveFront)->Arg(801)->Arg(1601)->Unit(benchmark::kMillisecond);

void BM_L0Principal(benchmark::State& state) {
  const double lambda = 1.0 / static_cast<double>(state.range(0));
  const FrontProfile p = solve_front(thermo(), marginal_stencil(make_default_kernel(), aligned_spacing(lambda, 0.15, 0.025)), 20.0);
  for (auto _ : state) benchmark::DoNotOptimize(principal_pair(build_L0(p, lambda, 0.15)));
}
BENCHMARK(BM_L0Principal)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_LWhole(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_L_whole(front()));
}
BENCHMARK(BM_LWhole)->Unit(benchmark::kMillisecond);

void BM_ACalLowest(benchmark::State& state) {
  const Setting2D& st = setting(0.2);
  for (auto _ : state) {
    const DiscreteOperator2D a = build_A_cal(st);
    SparseEigenOptions opt;
    opt.nev = 4;
    benchmark::DoNotOptimize(lowest_eigenpairs(a.matrix, opt));
  }
}
BENCHMARK(BM_ACalLowest)->Unit(benchmark::kMillisecond);

void BM_Poisson(benchmark::State& state) {
  const TubularChart ch = build_chart(make_ellipse(2, 1), 0.25, static_cast<int>(state.range(0)), 20, true);
  const PoissonSolver solver(ch);
  Vector v(ch.size());
  for (int i = 0; i < ch.n_s; ++i)
    for (int j = 0; j < ch.n_r(); ++j) v[ch.index(i, j)] = std::cos(2 * ch.s(i)) * ch.r.node(j);
  v.array() -= v.dot(solver.weights()) / solver.weights().sum();
  for (auto _ : state) benchmark::DoNotOptimize(solver.solve(v));
}
BENCHMARK(BM_Poisson)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
