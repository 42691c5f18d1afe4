// OpenMP kernels against their serial reference implementations.

#include <benchmark/benchmark.h>

#include <random>

#include "vmdp/bench.hpp"
#include "vmdp/model.hpp"
#include "vmdp/pareto.hpp"
#include "vmdp/random_models.hpp"

namespace {

using namespace vmdp;

const EnumerateOptions kForce{.force = true};  // 100x100 exceeds the CLI guard

CanonicalProgram design_program(int k) {
  return CanonicalProgram(build_design_model(generate_random_instance(k, k, 0.7, 1)));
}

Model oracle_model() {
  std::mt19937_64 rng(7);
  return random_model(3, 4, {4, 3, 4}, 3, 0.0, rng);  // 48^3 policies
}

void BM_walk_parallel(benchmark::State& state) {
  const auto cp = design_program(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_efficient(cp, kForce).efficient.size());
}

void BM_walk_serial(benchmark::State& state) {
  const auto cp = design_program(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_efficient_serial(cp, kForce).efficient.size());
}

void BM_oracle_parallel(benchmark::State& state) {
  const Model m = oracle_model();
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_oracle(m).vertices.size());
}

void BM_oracle_serial(benchmark::State& state) {
  const Model m = oracle_model();
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_oracle_serial(m).vertices.size());
}

void BM_bench_group(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(run_bench_group(25, 25, 0.7, 20, 1).mean);
}

}  // namespace

BENCHMARK(BM_walk_parallel)->Arg(5)->Arg(25)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_walk_serial)->Arg(5)->Arg(25)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_oracle_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_oracle_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_bench_group)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
