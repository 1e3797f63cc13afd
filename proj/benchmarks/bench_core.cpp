#include <benchmark/benchmark.h>

#include <numbers>

#include "sqz/analytic.hpp"
#include "sqz/block.hpp"
#include "sqz/fock.hpp"
#include "sqz/phase.hpp"

namespace {

void BM_SqueezedVacuumCoefficients(benchmark::State& state) {
    const sqz::SqueezeParams params{1.0, 0.3};
    const int m_max = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(sqz::squeezed_vacuum_coefficients(params, m_max));
    }
}
BENCHMARK(BM_SqueezedVacuumCoefficients)->Arg(50)->Arg(200);

void BM_TruncationSearch(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(sqz::truncation_for_tolerance(2.0, 1e-12));
    }
}
BENCHMARK(BM_TruncationSearch);

void BM_AppendixSeries(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(sqz::appendix_series_ab(1.0, 200));
    }
}
BENCHMARK(BM_AppendixSeries);

void BM_NbcMoments(benchmark::State& state) {
    const auto n = state.range(0);
    const auto block = sqz::build_entangled_state(sqz::SqueezeParams{1.0, 0.0}, n,
                                                  -std::numbers::pi / 2.0, 47);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sqz::nbc_moments(block));
    }
}
BENCHMARK(BM_NbcMoments)->Arg(200)->Arg(400);

void BM_NbcEigensystem(benchmark::State& state) {
    const auto n = state.range(0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sqz::nbc_eigensystem(n));
    }
}
BENCHMARK(BM_NbcEigensystem)->Arg(50)->Arg(200);

void BM_SampleNbc(benchmark::State& state) {
    const auto block = sqz::build_entangled_state(sqz::SqueezeParams{1.0, 0.0}, 200,
                                                  -std::numbers::pi / 2.0, 47);
    const auto two_mode = sqz::TwoModeState::from_block(block);
    const auto n_samples = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(sqz::sample_nbc(two_mode, n_samples, 42));
    }
}
BENCHMARK(BM_SampleNbc)->Arg(10000);

void BM_PhaseDistributionClosed(benchmark::State& state) {
    const sqz::SqueezeParams params{1.0, 0.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(sqz::phase_distribution_closed(params, 0.0, 200, 4096));
    }
}
BENCHMARK(BM_PhaseDistributionClosed);

void BM_PhaseDistributionGeneral(benchmark::State& state) {
    const auto block = sqz::build_entangled_state(sqz::SqueezeParams{1.0, 0.0}, 200, 0.0, 50);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sqz::phase_distribution_general(block, 4096));
    }
}
BENCHMARK(BM_PhaseDistributionGeneral);

}  // namespace

BENCHMARK_MAIN();
