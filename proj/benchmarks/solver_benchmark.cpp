#include <benchmark/benchmark.h>

#include <vector>

#include "test_scenarios.hpp"
#include "tprice/market_sim.hpp"
#include "tprice/tradeoff.hpp"
#include "tprice/verifier.hpp"

namespace {

using namespace tprice;

void BM_SolveMenu(benchmark::State& state) {
  const auto sc = testing::log_budget_menu(2.2, 1.0, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_menu(sc));
}
BENCHMARK(BM_SolveMenu)->Arg(3)->Arg(10)->Arg(50);

void BM_BuildProfile(benchmark::State& state) {
  const auto sc = testing::worked_profile();
  for (auto _ : state) benchmark::DoNotOptimize(build_profile(sc));
}
BENCHMARK(BM_BuildProfile);

void BM_BuildProfileSeparable(benchmark::State& state) {
  const DomainBox box{1.0, 3.0, 0.5, 3.0};
  ProfileScenario sc{{1.0, 1.75, 2.5},
                     TariffFunction::separable(ScalarFunction::power(2.0, 0.5),
                                               ScalarFunction::linear(1.5), box),
                     ScalarFunction::linear(0.05),
                     MarginSpec{{0.01, 0.02, 0.03}, {0.001, 0.002, 0.003}, {}}};
  for (auto _ : state) benchmark::DoNotOptimize(build_profile(sc));
}
BENCHMARK(BM_BuildProfileSeparable);

void BM_VerifyProfile(benchmark::State& state) {
  const auto sc = testing::worked_profile();
  const auto p = build_profile(sc);
  const auto probes = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(verify_profile(p, sc, probes));
}
BENCHMARK(BM_VerifyProfile)->Arg(9)->Arg(101);

void BM_CrosscheckWindows(benchmark::State& state) {
  const auto sc = testing::worked_profile();
  const auto p = build_profile(sc);
  for (auto _ : state) benchmark::DoNotOptimize(crosscheck_windows(sc, p, 256));
}
BENCHMARK(BM_CrosscheckWindows);

void BM_SimulateMarket(benchmark::State& state) {
  const auto sc = testing::worked_profile();
  const auto p = build_profile(sc);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_market(p, sc, n, 42));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * sc.size()));
}
BENCHMARK(BM_SimulateMarket)->Arg(1000)->Arg(100000);

void BM_EmpiricalRegion(benchmark::State& state) {
  const auto tmpl =
      testing::bilinear_profile(4.0, 0.1, DomainBox{1.0 / 3.0, 1.0, 0.5, 1.5}, 3, 0.5, 0, 0);
  std::vector<double> bg, mg;
  for (int i = 0; i < 10; ++i) bg.push_back(0.05 * i);
  for (int j = 0; j < 10; ++j) mg.push_back(0.002 * j);
  for (auto _ : state) benchmark::DoNotOptimize(empirical_region(tmpl, bg, mg));
}
BENCHMARK(BM_EmpiricalRegion);

}  // namespace

BENCHMARK_MAIN();
