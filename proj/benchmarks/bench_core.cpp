#include <benchmark/benchmark.h>

#include "ammlab/arbitrage.hpp"
#include "ammlab/engine.hpp"
#include "ammlab/netsim.hpp"
#include "ammlab/oracle.hpp"
#include "ammlab/routing.hpp"
#include "ammlab/trace.hpp"

using namespace ammlab;

static void BM_Quote(benchmark::State& state) {
  Rng rng(1);
  std::vector<std::pair<PoolState, Amount>> cases;
  for (int i = 0; i < 1024; ++i) {
    PoolState p = make_pool("a", rng.log_uniform_amount(1e6, 1e18).value(), rng.log_uniform_amount(1e6, 1e18).value());
    cases.emplace_back(p, rng.log_uniform_amount(1, 1e15));
  }
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& [p, in] = cases[i++ & 1023];
    benchmark::DoNotOptimize(quote(p, Direction::x_to_y, in));
  }
}
BENCHMARK(BM_Quote);

static void BM_OptimalInput(benchmark::State& state) {
  Rng rng(2);
  std::vector<std::pair<PoolState, PoolState>> pairs;
  for (int i = 0; i < 256; ++i) pairs.push_back(random_profitable_pair(rng));
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& [a, b] = pairs[i++ & 255];
    benchmark::DoNotOptimize(optimal_input(a, b));
  }
}
BENCHMARK(BM_OptimalInput);

static void BM_BruteArb(benchmark::State& state) {
  Rng rng(3);
  auto [a, b] = random_profitable_pair(rng);
  for (auto _ : state) benchmark::DoNotOptimize(brute_arb(a, b));
}
BENCHMARK(BM_BruteArb)->Unit(benchmark::kMillisecond);

static void BM_Route(benchmark::State& state) {
  Rng rng(4);
  RouteInstance inst = random_route_instance(rng, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(route(inst.pools, Direction::x_to_y, inst.total_in));
}
BENCHMARK(BM_Route)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

static void BM_NPool(benchmark::State& state) {
  Rng rng(5);
  std::vector<PoolState> pools;
  for (int k = 0; k < state.range(0); ++k) {
    pools.push_back(make_pool("m" + std::to_string(k), rng.log_uniform_amount(1e8, 1e12).value(),
                              rng.log_uniform_amount(1e8, 1e12).value()));
  }
  for (auto _ : state) benchmark::DoNotOptimize(n_pool_arbitrage(pools));
}
BENCHMARK(BM_NPool)->Arg(3)->Arg(6)->Arg(12);

static void BM_Plan(benchmark::State& state) {
  std::vector<PoolState> pools{make_pool("a", 1'000'000'000, 2'000'000'000), make_pool("b", 1'000'000'000, 1'000'000'000),
                               make_pool("c", 3'000'000'000, 4'000'000'000)};
  A2mmRequest r;
  r.amount_in = Amount{1'000'000};
  for (auto _ : state) benchmark::DoNotOptimize(plan(r, pools));
}
BENCHMARK(BM_Plan);

static void BM_AnalyzeCorpus(benchmark::State& state) {
  Corpus c = generate_corpus({100, 300, 500, 200, 7});
  for (auto _ : state) benchmark::DoNotOptimize(analyze(TraceIndex(c.trace)));
}
BENCHMARK(BM_AnalyzeCorpus)->Unit(benchmark::kMillisecond);

static void BM_Simulate(benchmark::State& state) {
  NetSimConfig c = chain_preset("eth");
  c.blocks = 10'000;
  for (auto _ : state) benchmark::DoNotOptimize(simulate(c));
}
BENCHMARK(BM_Simulate)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
