#include "basic/genmodel.hpp"
#include "basic/spectral.hpp"

#include <benchmark/benchmark.h>

using namespace basic;

namespace {

ScenarioConfig scenario(Index n) {
    ScenarioConfig cfg;
    cfg.n = n;
    cfg.m = n / 2;
    cfg.K = 3;
    cfg.Kp = 3;
    cfg.Q = 3;
    cfg.community_sizes = ScenarioConfig::balanced_sizes(n, 3);
    cfg.bipartite_community_sizes = ScenarioConfig::balanced_sizes(n / 2, 3);
    cfg.beta_primary = 0.5;
    cfg.beta_bipartite = {0.1, 0.3, 0.5};
    cfg.avg_degree = 40.0;
    cfg.seed = 1;
    return cfg;
}

void BM_Aggregate(benchmark::State& state) {
    auto draw = build_scenario(scenario(static_cast<Index>(state.range(0))), 0, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(aggregate(draw.primary, draw.bipartite));
    }
}

void BM_TopKEigen(benchmark::State& state) {
    auto draw = build_scenario(scenario(static_cast<Index>(state.range(0))), 0, 0);
    Eigen::MatrixXd m = aggregate(draw.primary, draw.bipartite);
    for (auto _ : state) {
        benchmark::DoNotOptimize(top_k_eigen(m, 3));
    }
}

void BM_Detect(benchmark::State& state) {
    auto draw = build_scenario(scenario(static_cast<Index>(state.range(0))), 0, 0);
    for (auto _ : state) {
        Rng rng(7);
        benchmark::DoNotOptimize(basic_detect(draw.primary, draw.bipartite, 3, {}, rng));
    }
}

void BM_SampleScenario(benchmark::State& state) {
    auto cfg = scenario(static_cast<Index>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_scenario(cfg, 0, 0));
    }
}

} // namespace

BENCHMARK(BM_Aggregate)->Arg(300)->Arg(600)->Arg(1200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TopKEigen)->Arg(300)->Arg(600)->Arg(1200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Detect)->Arg(300)->Arg(600)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SampleScenario)->Arg(300)->Arg(600)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
