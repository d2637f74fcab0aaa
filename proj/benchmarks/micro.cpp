#include <benchmark/benchmark.h>

#include "prodform/catalog.hpp"
#include "prodform/error_benchmark.hpp"
#include "prodform/fermions.hpp"
#include "prodform/solver.hpp"
#include "prodform/word_series.hpp"

using namespace prodform;

static void BM_FormulaSeries(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const auto seq = catalog_entry("KL8s15").sequence<double>();
  for (auto _ : state) benchmark::DoNotOptimize(formula_series(seq, k));
}
BENCHMARK(BM_FormulaSeries)->Arg(6)->Arg(8)->Arg(10);

static void BM_FormulaSeriesQuad(benchmark::State& state) {
  const auto seq = catalog_entry("KL8s15").sequence<Quad>();
  for (auto _ : state) benchmark::DoNotOptimize(formula_series(seq, 8));
}
BENCHMARK(BM_FormulaSeriesQuad);

static void BM_RecursionResidual(benchmark::State& state) {
  const auto w = catalog_entry("Y10m16").kernel().values<double>();
  const std::vector<double> tail(w.begin() + 1, w.end());
  for (auto _ : state) benchmark::DoNotOptimize(recursion_residual(tail, 10));
}
BENCHMARK(BM_RecursionResidual);

static void BM_SearchRestart(benchmark::State& state) {
  SearchConfig cfg;
  cfg.order = 8;
  cfg.m = 7;
  cfg.restarts = 1;
  cfg.init_sigma = 2.5;
  std::uint64_t seed = 1;
  for (auto _ : state) {
    cfg.seed = seed++;
    benchmark::DoNotOptimize(search(cfg));
  }
}
BENCHMARK(BM_SearchRestart);

template <class T>
static void BM_PairApply(benchmark::State& state) {
  const auto p = random_pair<T>({6, 1, 1}, 0);
  const PairSystem<T> sys(p.a, p.b);
  const auto seq = catalog_entry("YP8m8").sequence<T>();
  for (auto _ : state) benchmark::DoNotOptimize(sys.apply(seq, T(0.05)));
}
BENCHMARK(BM_PairApply<double>);
BENCHMARK(BM_PairApply<Quad>);

static void BM_EigenAnalysis(benchmark::State& state) {
  const auto p = random_pair<Quad>({6, 1, 1}, 0);
  const PairSystem<Quad> sys(p.a, p.b);
  const auto seq = catalog_entry("YP8m8").sequence<Quad>();
  for (auto _ : state) benchmark::DoNotOptimize(sys.eigen_analysis(seq, Quad(0.05)));
}
BENCHMARK(BM_EigenAnalysis);

static void BM_SectorBuild(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const auto h = FermionicHamiltonian::random(d, d / 2, 1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(build_matrices<double>(h));
}
BENCHMARK(BM_SectorBuild)->Arg(4)->Arg(6)->Arg(8);
BENCHMARK_MAIN();
