#include <benchmark/benchmark.h>

#include "bernsup/chaining.hpp"
#include "bernsup/inequalities.hpp"
#include "bernsup/montecarlo.hpp"
#include "bernsup/oracle.hpp"

using namespace bernsup;

namespace {

ProcessFamily bench_family(uint32_t n) { return gen_family(FamilyKind::Random, n, 99); }

void BM_EnumerateExact(benchmark::State& state) {
  const auto fam = bench_family(uint32_t(state.range(0)));
  double y_max = 0.0;
  for (double w : fam.terminal()) y_max += w;
  const double thresholds[] = {0.25 * y_max, 0.5 * y_max};
  for (auto _ : state) {
    auto rep = enumerate_exact(fam, thresholds, {});
    benchmark::DoNotOptimize(rep.ex);
  }
  state.SetItemsProcessed(int64_t(state.iterations()) * (1ll << state.range(0)));
}
BENCHMARK(BM_EnumerateExact)->Arg(12)->Arg(16)->Arg(20);

void BM_MonteCarlo(benchmark::State& state) {
  const auto fam = bench_family(24);
  double y_max = 0.0;
  for (double w : fam.terminal()) y_max += w;
  const double thresholds[] = {0.5 * y_max};
  for (auto _ : state) {
    auto rep = estimate_tails(fam, thresholds, uint64_t(state.range(0)), 7);
    benchmark::DoNotOptimize(rep.ex.mean);
  }
  state.SetItemsProcessed(int64_t(state.iterations()) * state.range(0));
}
BENCHMARK(BM_MonteCarlo)->Arg(10000)->Arg(100000);

void BM_PaperPlan(benchmark::State& state) {
  for (auto _ : state) {
    auto plan = paper_plan(int(state.range(0)));
    benchmark::DoNotOptimize(plan.total);
  }
}
BENCHMARK(BM_PaperPlan)->Arg(4)->Arg(12)->Arg(40);

void BM_FamilySuite(benchmark::State& state) {
  const auto fam = bench_family(uint32_t(state.range(0)));
  for (auto _ : state) {
    SuiteReport rep;
    run_family_suite(rep, fam, {}, Mode::Exact);
    benchmark::DoNotOptimize(rep.summary.total);
  }
}
BENCHMARK(BM_FamilySuite)->Arg(8)->Arg(12);

}  // namespace

BENCHMARK_MAIN();
