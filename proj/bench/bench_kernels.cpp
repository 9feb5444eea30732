// Serial reference against the OpenMP kernel for each parallel code path.
#include "migsched/experiments.hpp"
#include "migsched/generator.hpp"
#include "migsched/laminar.hpp"
#include "migsched/minr.hpp"
#include "migsched/rng.hpp"

#include <benchmark/benchmark.h>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace migsched;

namespace {

std::vector<PricingProblem> pricing_problems(int slots, int items) {
  Rng rng(3);
  std::vector<PricingProblem> problems;
  for (int t = 1; t <= slots; ++t) {
    PricingProblem p;
    p.slot = t;
    p.gamma = Rational(rng.uniform_int(0, 5));
    for (int i = 0; i < items; ++i) {
      Rational s(rng.uniform_int(1, 10), 10);
      Rational u(rng.uniform_int(1, 10), 10);
      s.canonicalize();
      u.canonicalize();
      p.items.push_back({i + 1, Rational(rng.uniform_int(1, 9)), {s, u}});
    }
    problems.push_back(std::move(p));
  }
  return problems;
}

void BM_price_all(benchmark::State& state) {
  const auto problems = pricing_problems(64, static_cast<int>(state.range(1)));
  const auto mode = state.range(0) ? Execution::Parallel : Execution::Serial;
  for (auto _ : state) benchmark::DoNotOptimize(price_all(problems, mode));
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}
BENCHMARK(BM_price_all)->ArgsProduct({{0, 1}, {12, 20}})->Unit(benchmark::kMillisecond);

void BM_residual_area(benchmark::State& state) {
  GenSpec spec;
  spec.n = 60;
  spec.horizon = static_cast<int>(state.range(1));
  spec.lambda = Rational(1, 5);
  spec.seed = 12;
  const Instance inst = generate(spec);
  const auto residuals = build_residual(inst, {}, build_tree(spec.horizon));
  const auto mode = state.range(0) ? Execution::Parallel : Execution::Serial;
  for (auto _ : state) {
    benchmark::DoNotOptimize(residual_area_report(residuals, spec.horizon, Rational(1, 10), 2, mode));
  }
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}
BENCHMARK(BM_residual_area)->ArgsProduct({{0, 1}, {64, 512}})->Unit(benchmark::kMillisecond);

void BM_batch(benchmark::State& state) {
  const json config = {{"seed", 4},
                       {"cells",
                        {{{"name", "bench"},
                          {"seeds", 16},
                          {"oracle", false},
                          {"gen", {{"n", 8}, {"horizon", 12}}},
                          {"solvers", {"maxt-general", "minr"}}}}}};
#ifdef _OPENMP
  const int before = omp_get_max_threads();
  omp_set_num_threads(state.range(0) ? before : 1);
#endif
  for (auto _ : state) benchmark::DoNotOptimize(run_batch(config));
#ifdef _OPENMP
  omp_set_num_threads(before);
#endif
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}
BENCHMARK(BM_batch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
