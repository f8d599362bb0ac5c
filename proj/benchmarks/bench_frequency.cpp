#include <benchmark/benchmark.h>

#include "mixedosc/dominance.hpp"
#include "mixedosc/frequency.hpp"

using namespace mixedosc;

namespace {

MixedFeedbackParams lag_params(double k, double beta) {
    return MixedFeedbackParams{k, beta, 0.1, 1.0, first_order_lag(0.01)};
}

void BM_ShiftedMinReal(benchmark::State& state) {
    const TransferFunction loop = make_loop_tf(lag_params(1.0, 0.4));
    for (auto _ : state) {
        benchmark::DoNotOptimize(shifted_min_real(loop, 50.0));
    }
}
BENCHMARK(BM_ShiftedMinReal);

void BM_GainBoundColumn(benchmark::State& state) {
    const MixedFeedbackParams params = lag_params(1.0, 0.4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(k0_gain_bound(0.4, params));
        benchmark::DoNotOptimize(k2_gain_bound(0.4, 50.0, params));
    }
}
BENCHMARK(BM_GainBoundColumn);

} // namespace

BENCHMARK_MAIN();
