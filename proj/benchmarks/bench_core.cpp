#include <benchmark/benchmark.h>

#include <gradcode/constructions.hpp>
#include <gradcode/decode.hpp>
#include <gradcode/feasibility.hpp>
#include <gradcode/rng.hpp>
#include <gradcode/sim.hpp>

#include <algorithm>
#include <numeric>

using namespace gradcode;

namespace {

std::vector<int> random_straggler_set(StreamRng& rng, int n, int s) {
    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < s; ++i)
        std::swap(pool[i], pool[i + static_cast<int>(rng.next() % (n - i))]);
    std::vector<int> set(pool.begin(), pool.begin() + s);
    std::sort(set.begin(), set.end());
    return set;
}

}  // namespace

static void BM_BuildCyclic1(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(build_cyclic1(100, Rat(82, 100), 19));
}
BENCHMARK(BM_BuildCyclic1);

static void BM_BuildCombinatorial(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(build_combinatorial(n, Rat(1, 2), 3, 2));
}
BENCHMARK(BM_BuildCombinatorial)->Arg(10)->Arg(20)->Arg(40);

static void BM_BuildIntermediate(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(
            build_intermediate(19, Rat(87, 100), 10, IntermediateParams::with_defaults(2, 6)));
}
BENCHMARK(BM_BuildIntermediate);

static void BM_DecodeCyclic1(benchmark::State& state) {
    auto g = build_cyclic1(18, Rat(15, 18), 7);
    StreamRng rng{1, 1};
    for (auto _ : state) {
        auto set = random_straggler_set(rng, 18, 7);
        benchmark::DoNotOptimize(decode_cyclic1(g, set));
    }
}
BENCHMARK(BM_DecodeCyclic1);

static void BM_DecodeCyclic2(benchmark::State& state) {
    auto g = build_cyclic2(9, Rat(7, 9), 4);
    StreamRng rng{2, 1};
    for (auto _ : state) {
        auto set = random_straggler_set(rng, 9, 4);
        benchmark::DoNotOptimize(decode_cyclic2(g, set));
    }
}
BENCHMARK(BM_DecodeCyclic2);

static void BM_DecodeBalanced(benchmark::State& state) {
    auto g = build_balanced(9, Rat(2, 3), 4, 2);
    StreamRng rng{3, 1};
    for (auto _ : state) {
        auto set = random_straggler_set(rng, 9, 4);
        benchmark::DoNotOptimize(decode_balanced(g, set));
    }
}
BENCHMARK(BM_DecodeBalanced);

static void BM_OracleExhaustiveCyclic7(benchmark::State& state) {
    auto g = build_cyclic1(7, Rat(6, 7), 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(oracle_feasible(g, Rat(6, 7), 3, OracleMode::exhaustive));
}
BENCHMARK(BM_OracleExhaustiveCyclic7);

static void BM_OracleExhaustiveTDesign(benchmark::State& state) {
    auto g = build_from_tdesign(hadamard_3_8_4_1());
    for (auto _ : state)
        benchmark::DoNotOptimize(oracle_feasible(g, g.params.alpha, 5, OracleMode::exhaustive));
}
BENCHMARK(BM_OracleExhaustiveTDesign);

static void BM_SimRun(benchmark::State& state) {
    SimConfig cfg;
    cfg.scheme = build_cyclic1(100, Rat(82, 100), 19);
    cfg.model.family = Pareto{0.001, 1.1};
    cfg.model.scaling = Scaling::data_dependent;
    cfg.model.delta = 5e-7;
    cfg.data.points = 2000;
    cfg.data.dim = 8;
    cfg.step = 1e-6;
    cfg.iterations = static_cast<int>(state.range(0));
    cfg.seed = 11;
    for (auto _ : state)
        benchmark::DoNotOptimize(run_sim(cfg));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimRun)->Arg(10)->Arg(50);

BENCHMARK_MAIN();
