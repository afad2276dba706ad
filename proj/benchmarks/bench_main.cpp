#include <benchmark/benchmark.h>

#include "uiobank/examples.hpp"
#include "uiobank/rng.hpp"

using namespace uiobank;

namespace {

PlantModel five_sensor_plant() {
    Mat a(3, 3), b(3, 3), c(5, 3);
    a << 0.5, 0, 0.1, 0.2, 0.7, 0, 1, 0, 0.3;
    b << 0.5, 0, 0.5, 1, 1, 0.1, 0, 0, 0.5;
    c << 1, 2, 0, 0, 1, 1, 0, 1, 2, 1, 1, 1, 2, 0, 1;
    return PlantModel(a, b, c);
}

void bm_riccati_gain(benchmark::State& state) {
    const PlantModel p = example_plant(5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(stabilizing_state_gain(p.A(), p.B()));
    }
}
BENCHMARK(bm_riccati_gain);

void bm_complete_bank_synthesis(benchmark::State& state) {
    const PlantModel p = example_plant(1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(enumerate_complete_bank(p, 1));
    }
}
BENCHMARK(bm_complete_bank_synthesis);

void bm_partial_bank_synthesis(benchmark::State& state) {
    const PlantModel p = five_sensor_plant();
    for (auto _ : state) {
        benchmark::DoNotOptimize(enumerate_partial_bank(p, 1, 1));
    }
}
BENCHMARK(bm_partial_bank_synthesis);

void bm_bank_step(benchmark::State& state) {
    const PlantModel p = example_plant(1);
    const CompleteBank designs = enumerate_complete_bank(p, 1);
    ObserverBank bank(designs, Vec::Zero(2), Vec::Zero(4));
    rng::Stream s(1, 0);
    Vec u(1), y(4);
    for (auto _ : state) {
        u(0) = s.uniform(-1, 1);
        for (int i = 0; i < 4; ++i) y(i) = s.uniform(-1, 1);
        benchmark::DoNotOptimize(bank.step(u, y));
    }
}
BENCHMARK(bm_bank_step);

void bm_full_scenario(benchmark::State& state) {
    const Scenario s = example_scenario(1, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate(s));
    }
}
BENCHMARK(bm_full_scenario);

void bm_certificate_search(benchmark::State& state) {
    const GainTable table = design_switching_gains(five_sensor_plant(), 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(search_certificate(table));
    }
}
BENCHMARK(bm_certificate_search);

} // namespace

BENCHMARK_MAIN();
