#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "mixedosc/synthesis.hpp"

using namespace mixedosc;

namespace {

void BM_NominalDesign(benchmark::State& state) {
    Eigen::MatrixXd A(3, 3);
    A << -100.0, 0.0, 0.0, 10.0, -10.0, 0.0, 1.0, 0.0, -1.0;
    Eigen::VectorXd B(3);
    B << 100.0, 0.0, 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(design_2dominant(A, B, 50.0));
    }
}
BENCHMARK(BM_NominalDesign)->Unit(benchmark::kMillisecond);

} // namespace
