#include <benchmark/benchmark.h>

#include "mixedosc/simulation.hpp"

using namespace mixedosc;

namespace {

void BM_IntegrateNominal(benchmark::State& state) {
    const MixedFeedbackParams params{5.0, 0.4, 0.1, 1.0, first_order_lag(0.01)};
    const ClosedLoopSystem sys = assemble_closed_loop(params);
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(3);
    x0(0) = 0.1;
    const ReferenceSignal r = ReferenceSignal::constant(0.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(integrate(sys, x0, r, static_cast<double>(state.range(0)), 1e-6));
    }
}
BENCHMARK(BM_IntegrateNominal)->Arg(20)->Arg(100)->Unit(benchmark::kMillisecond);

} // namespace
