#include <benchmark/benchmark.h>

#include <cmath>

#include "cdlab/model.hpp"
#include "cdlab/solver.hpp"

using namespace cdlab;

static void BM_SemiImplicitStep(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Grid g = Grid::make(2, {n, n, 1}, {1.0, 1.0, 1.0});
    const Field w0 = Field::sample_scalar(g, [](const std::array<double, 3>& x) {
        return 1.0 + 0.3 * std::sin(6.28 * x[0]) * std::cos(6.28 * x[1]);
    });
    const DiffusionModel model = DiffusionModel::porous_media(2.0);
    SolverConfig config;
    config.dt = 1e-3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(step(w0, 0.0, model, config));
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_SemiImplicitStep)->RangeMultiplier(2)->Range(16, 128)->Complexity();

static void BM_ExplicitStep(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Grid g = Grid::make(2, {n, n, 1}, {1.0, 1.0, 1.0});
    const Field w0 = Field::sample_scalar(g, [](const std::array<double, 3>& x) {
        return 1.0 + 0.3 * std::sin(6.28 * x[0]) * std::cos(6.28 * x[1]);
    });
    const DiffusionModel model = DiffusionModel::porous_media(2.0);
    SolverConfig config;
    config.scheme = Scheme::Explicit;
    config.dt = 0.5 * stability_limit(w0, model, config);
    for (auto _ : state) {
        benchmark::DoNotOptimize(step(w0, 0.0, model, config));
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_ExplicitStep)->RangeMultiplier(2)->Range(16, 128)->Complexity();
