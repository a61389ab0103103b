// Microbenchmarks for the hot paths: the hourly step loop above all.

#include <benchmark/benchmark.h>

#include "gwabm/engine.hpp"

using namespace gwabm;

namespace {

SimConfig desk_config() {
    SimConfig cfg = SimConfig::desk_default();
    cfg.seed = 1;
    return cfg;
}

// State advanced into the epidemic so the step loop sees realistic mixing.
const SimState& warm_state() {
    static SimState state = [] {
        SimConfig cfg = desk_config();
        SimState s = init_sim(cfg);
        for (int i = 0; i < 300; ++i) step(s, cfg);
        return s;
    }();
    return state;
}

} // namespace

static void BM_StepDay(benchmark::State& bench) {
    SimConfig cfg = desk_config();
    for (auto _ : bench) {
        bench.PauseTiming();
        SimState state = warm_state();
        bench.ResumeTiming();
        for (int h = 0; h < 24; ++h) step(state, cfg);
        benchmark::DoNotOptimize(state.cycle);
    }
    bench.SetItemsProcessed(bench.iterations() * 24);
}
BENCHMARK(BM_StepDay)->Unit(benchmark::kMicrosecond);

static void BM_FullDeskRun(benchmark::State& bench) {
    SimConfig cfg = desk_config();
    cfg.n_cycles = 5500;
    for (auto _ : bench) {
        auto records = run(cfg);
        benchmark::DoNotOptimize(records.back().cumulative_deaths);
    }
}
BENCHMARK(BM_FullDeskRun)->Unit(benchmark::kMillisecond)->Iterations(3);

static void BM_H2hProbability(benchmark::State& bench) {
    EpiParams p;
    double k = 3.7;
    for (auto _ : bench) {
        benchmark::DoNotOptimize(h2h_infection_probability(k, false, p));
        k += 0.001;
        if (k > 40.0) k = 0.5;
    }
}
BENCHMARK(BM_H2hProbability);

static void BM_EnvironmentalStep(benchmark::State& bench) {
    EpiParams p;
    Occupancy occ(64);
    for (int b = 0; b < 64; ++b) {
        for (int i = 0; i < 16; ++i) {
            occ[b].push_back({b * 16 + i,
                              i == 0 ? DiseaseState::Symptomatic : DiseaseState::Susceptible,
                              false});
        }
    }
    std::vector<double> loads(64, 0.0);
    Rng rng(5);
    std::vector<InfectionEvent> events;
    for (auto _ : bench) {
        events.clear();
        step_environmental(loads, occ, p, rng, events);
        benchmark::DoNotOptimize(events.size());
    }
    bench.SetItemsProcessed(bench.iterations() * 64 * 16);
}
BENCHMARK(BM_EnvironmentalStep)->Unit(benchmark::kMicrosecond);

static void BM_LocateBlock(benchmark::State& bench) {
    Region region = generate_synthetic_region(RegionSpec::desk_default(1000), 3);
    Rng rng(7);
    for (auto _ : bench) {
        Point2D p{rng.uniform(0.0, 1700.0), rng.uniform(0.0, 1700.0)};
        benchmark::DoNotOptimize(locate_block(p, region.blocks));
    }
}
BENCHMARK(BM_LocateBlock);

static void BM_GeneratePopulation(benchmark::State& bench) {
    Region region = generate_synthetic_region(RegionSpec::desk_default(1000), 3);
    PopulationParams params;
    for (auto _ : bench) {
        Population pop = generate_population(region, params, 11);
        benchmark::DoNotOptimize(pop.households.size());
    }
}
BENCHMARK(BM_GeneratePopulation)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
