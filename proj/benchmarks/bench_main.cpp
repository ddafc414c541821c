#include <benchmark/benchmark.h>

#include <random>

#include "ifszeta/measure.hpp"
#include "ifszeta/zeta.hpp"

namespace {

using namespace ifszeta;

IfsParams golden() {
  return IfsParams::make(AlgebraicContext::make({-1, 1, 1}, Rational(3, 5), Rational(7, 10)), {0, 1},
                         {Rational(1, 2), Rational(1, 2)});
}

void BM_EnumerateGolden(benchmark::State& state) {
  const auto p = golden();
  EnumerationOptions opts;
  opts.threads = static_cast<unsigned>(state.range(1));
  for (auto _ : state) {
    auto level = enumerate_level(p, static_cast<unsigned>(state.range(0)), opts);
    benchmark::DoNotOptimize(level.cylinders.data());
  }
}
BENCHMARK(BM_EnumerateGolden)->Args({12, 1})->Args({16, 1})->Args({16, 4})->Unit(benchmark::kMillisecond);

void BM_CylinderMeasures(benchmark::State& state) {
  const auto p = golden();
  const auto level = enumerate_level(p, static_cast<unsigned>(state.range(0)));
  for (auto _ : state) {
    auto m = cylinder_measures(level, level.n + 20);
    benchmark::DoNotOptimize(m.data());
  }
}
BENCHMARK(BM_CylinderMeasures)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_ZetaEvaluate(benchmark::State& state) {
  const auto p = golden();
  const auto levels = filtered_levels(p, 14, 14, WeightSource::word_weight, 1.0, FilterSpec::none());
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(levels.front(), {1.5, 3.0}));
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * levels.front().passed()));
}
BENCHMARK(BM_ZetaEvaluate);

void BM_StripScan(benchmark::State& state) {
  const auto p = golden();
  const auto levels = filtered_levels(p, 9, 12, WeightSource::word_weight, 1.0, FilterSpec::none());
  const StripGrid grid{range_by_step(0.25, 2.0, 0.25), range_by_count(-10, 10, 64)};
  for (auto _ : state) {
    auto points = strip_scan(levels, grid);
    benchmark::DoNotOptimize(points.data());
  }
}
BENCHMARK(BM_StripScan)->Unit(benchmark::kMillisecond);

void BM_SignCompare(benchmark::State& state) {
  const auto p = golden();
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> coef(-1000, 1000);
  std::vector<FieldElement> xs;
  for (int i = 0; i < 256; ++i) xs.push_back(p.ctx.from_coeffs({Rational(coef(rng), 7), Rational(coef(rng), 11)}));
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(compare(xs[k % xs.size()], xs[(k + 1) % xs.size()]));
    ++k;
  }
}
BENCHMARK(BM_SignCompare);

}  // namespace

BENCHMARK_MAIN();
