#include <benchmark/benchmark.h>

#include "mpf/fusion.hpp"
#include "mpf/kernels.hpp"
#include "mpf/random.hpp"
#include "mpf/stats.hpp"
#include "mpf/synth.hpp"

namespace {

using namespace mpf;

Matrix points(std::size_t n, std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(n, d);
  for (auto& v : m.data()) v = rng.normal();
  return m;
}

std::vector<double> sample(std::size_t n) {
  Rng rng(3);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal();
  return v;
}

template <typename Fn>
void nearest_other(benchmark::State& state, Fn fn) {
  const auto m = points(static_cast<std::size_t>(state.range(0)), 10, 1);
  for (auto _ : state) benchmark::DoNotOptimize(fn(m));
  state.SetComplexityN(state.range(0));
}

template <typename Fn>
void nearest(benchmark::State& state, Fn fn) {
  const auto support = points(1350, 10, 1);
  const auto query = points(static_cast<std::size_t>(state.range(0)), 10, 2);
  for (auto _ : state) benchmark::DoNotOptimize(fn(query, support));
}

template <typename Fn>
void bootstrap(benchmark::State& state, Fn fn) {
  const auto s = sample(338);
  const auto replicates = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fn(s, mean_of, replicates, 11));
}

template <typename Fn>
void sign_flips(benchmark::State& state, Fn fn) {
  // Only discordant pairs reach the kernel.
  std::vector<int> diffs(80);
  Rng rng(5);
  for (auto& d : diffs) d = rng.coin() ? 1 : -1;
  const auto iterations = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fn(diffs, 4, iterations, 13));
}

void predict(benchmark::State& state, Execution exec) {
  const auto train = generate_cohort(CohortSpec{});
  CohortSpec probe_spec;
  probe_spec.seed = 9;
  probe_spec.n_total = static_cast<std::size_t>(state.range(0));
  const auto probe = generate_cohort(probe_spec);
  const auto model = fit_fusion(train, PipelineConfig{});
  const auto prepared = model.prepare(probe);
  for (auto _ : state) benchmark::DoNotOptimize(predict_batch(model, prepared, exec));
}

void BM_NearestOther_Serial(benchmark::State& s) { nearest_other(s, kernels::serial::nearest_other_distances); }
void BM_NearestOther_Parallel(benchmark::State& s) { nearest_other(s, kernels::parallel::nearest_other_distances); }
void BM_Nearest_Serial(benchmark::State& s) { nearest(s, kernels::serial::nearest_distances); }
void BM_Nearest_Parallel(benchmark::State& s) { nearest(s, kernels::parallel::nearest_distances); }
void BM_Bootstrap_Serial(benchmark::State& s) { bootstrap(s, kernels::serial::bootstrap_replicates); }
void BM_Bootstrap_Parallel(benchmark::State& s) { bootstrap(s, kernels::parallel::bootstrap_replicates); }
void BM_SignFlip_Serial(benchmark::State& s) { sign_flips(s, kernels::serial::sign_flip_exceedances); }
void BM_SignFlip_Parallel(benchmark::State& s) { sign_flips(s, kernels::parallel::sign_flip_exceedances); }
void BM_Predict_Serial(benchmark::State& s) { predict(s, Execution::serial); }
void BM_Predict_Parallel(benchmark::State& s) { predict(s, Execution::parallel); }

}  // namespace

BENCHMARK(BM_NearestOther_Serial)->RangeMultiplier(2)->Range(256, 2048)->Complexity();
BENCHMARK(BM_NearestOther_Parallel)->RangeMultiplier(2)->Range(256, 2048)->Complexity()->UseRealTime();
BENCHMARK(BM_Nearest_Serial)->Arg(338)->Arg(1687);
BENCHMARK(BM_Nearest_Parallel)->Arg(338)->Arg(1687)->UseRealTime();
BENCHMARK(BM_Bootstrap_Serial)->Arg(1000)->Arg(10000);
BENCHMARK(BM_Bootstrap_Parallel)->Arg(1000)->Arg(10000)->UseRealTime();
BENCHMARK(BM_SignFlip_Serial)->Arg(10000);
BENCHMARK(BM_SignFlip_Parallel)->Arg(10000)->UseRealTime();
BENCHMARK(BM_Predict_Serial)->Arg(1687);
BENCHMARK(BM_Predict_Parallel)->Arg(1687)->UseRealTime();

BENCHMARK_MAIN();
