#include <benchmark/benchmark.h>

#include <random>

#include "cdlab/harmonic.hpp"

using namespace cdlab;

namespace {

Field random_field(int n, unsigned seed, double floor = 0.0) {
    const Grid g = Grid::make(2, {n, n, 1}, {1.0, 1.0, 1.0});
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> value(0.0, 1.0);
    Field f(g, 1);
    for (long cell = 0; cell < g.cell_count(); ++cell) f.at(cell) = value(rng) + floor;
    return f;
}

}  // namespace

static void BM_BmoSeminorm(benchmark::State& state) {
    const Field f = random_field(static_cast<int>(state.range(0)), 42);
    for (auto _ : state) {
        benchmark::DoNotOptimize(bmo_seminorm(f).seminorm);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BmoSeminorm)->RangeMultiplier(2)->Range(8, 64)->Complexity();

static void BM_Maximal(benchmark::State& state) {
    const Field f = random_field(static_cast<int>(state.range(0)), 43);
    for (auto _ : state) {
        benchmark::DoNotOptimize(maximal(f));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Maximal)->RangeMultiplier(2)->Range(8, 64)->Complexity();

static void BM_AGammaConstant(benchmark::State& state) {
    const Field w = random_field(static_cast<int>(state.range(0)), 44, 0.1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(a_gamma_constant(w, 2.0).constant);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AGammaConstant)->RangeMultiplier(2)->Range(8, 48)->Complexity();
