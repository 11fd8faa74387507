// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include "edcs/edcs.hpp"
#include "edcs/generators.hpp"
#include "edcs/trials.hpp"

using namespace edcs;

namespace {

Instance corpus(std::size_t n, std::size_t m) {
  GenSpec s;
  s.n = n;
  s.m = m;
  s.max_weight = 3;
  s.b_max = 3;
  s.seed = 42;
  s.bipartite = true;
  return gen_random(s);
}

EdcsParams params() {
  EdcsParams p;
  p.max_weight = 3;
  p.beta = 12;
  p.beta_minus = 10;
  return p;
}

void BM_validate(benchmark::State& state) {
  auto inst = corpus(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(0)) * 20);
  auto h = build_wb_edcs(inst.graph, inst.capacities, params()).h;
  for (auto _ : state) benchmark::DoNotOptimize(validate(inst.graph, inst.capacities, h, params()));
}

void BM_validate_serial(benchmark::State& state) {
  auto inst = corpus(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(0)) * 20);
  auto h = build_wb_edcs(inst.graph, inst.capacities, params()).h;
  for (auto _ : state) benchmark::DoNotOptimize(validate_serial(inst.graph, inst.capacities, h, params()));
}

std::vector<std::uint64_t> seeds(std::int64_t k) {
  std::vector<std::uint64_t> s(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = i;
  return s;
}

void BM_trials(benchmark::State& state) {
  auto inst = corpus(40, 300);
  TrialConfig config;
  config.params = params();
  for (auto _ : state) benchmark::DoNotOptimize(run_trials(inst.graph, inst.capacities, seeds(state.range(0)), config));
}

void BM_trials_serial(benchmark::State& state) {
  auto inst = corpus(40, 300);
  TrialConfig config;
  config.params = params();
  for (auto _ : state)
    benchmark::DoNotOptimize(run_trials_serial(inst.graph, inst.capacities, seeds(state.range(0)), config));
}

}  // namespace

BENCHMARK(BM_validate)->Arg(100)->Arg(400);
BENCHMARK(BM_validate_serial)->Arg(100)->Arg(400);
BENCHMARK(BM_trials)->Arg(16);
BENCHMARK(BM_trials_serial)->Arg(16);

BENCHMARK_MAIN();
