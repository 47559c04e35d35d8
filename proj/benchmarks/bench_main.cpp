#include <benchmark/benchmark.h>

#include "lifmoran/influence.hpp"
#include "lifmoran/lisa.hpp"
#include "lifmoran/moran.hpp"
#include "lifmoran/rng.hpp"
#include "lifmoran/simulate.hpp"
#include "lifmoran/weights.hpp"

using namespace lifmoran;

namespace {

Observations random_field(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> raw(n);
    for (double& v : raw) v = rng.normal();
    return standardize(raw);
}

void BM_MoranI(benchmark::State& state) {
    const auto side = static_cast<std::size_t>(state.range(0));
    const auto w = row_standardize(lattice_rook(side, side, false));
    const auto obs = random_field(side * side, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(moran_i(obs, w));
    }
    state.SetComplexityN(state.range(0) * state.range(0));
}
BENCHMARK(BM_MoranI)->Arg(10)->Arg(30)->Arg(100);

void BM_LifFromParams(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(lif_from_params(100, 0.31, 0.8));
    }
}
BENCHMARK(BM_LifFromParams);

void BM_LifMap(benchmark::State& state) {
    const auto side = static_cast<std::size_t>(state.range(0));
    const auto w = row_standardize(lattice_rook(side, side, false));
    const auto obs = random_field(side * side, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(lif_map(obs, w));
    }
}
BENCHMARK(BM_LifMap)->Arg(10)->Arg(30);

void BM_LisaInference(benchmark::State& state) {
    const auto w = row_standardize(lattice_rook(10, 10, false));
    const auto obs = random_field(100, 3);
    const auto permutations = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(lisa_inference(obs, w, permutations, 9, 0.05));
    }
}
BENCHMARK(BM_LisaInference)->Arg(99)->Arg(999);

void BM_SarSolve(benchmark::State& state) {
    const auto side = static_cast<std::size_t>(state.range(0));
    const auto w = row_standardize(lattice_rook(side, side, false));
    SarSolver solver(w, 0.5);
    SarConfig config{0.5, w, 4, 1};
    const auto eps = sar_noise(config, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solver.solve(eps));
    }
}
BENCHMARK(BM_SarSolve)->Arg(10)->Arg(30)->Arg(50);

void BM_ContaminateExact(benchmark::State& state) {
    const auto w = row_standardize(lattice_rook(10, 10, false));
    const auto obs = random_field(100, 5);
    double z1 = 0.0;
    for (auto _ : state) {
        z1 += 0.01;
        benchmark::DoNotOptimize(contaminate_exact(obs, w, 42, z1));
    }
}
BENCHMARK(BM_ContaminateExact);

}  // namespace

BENCHMARK_MAIN();
