#include "eoconv/constants.hpp"
#include "eoconv/converter.hpp"

#include <benchmark/benchmark.h>

using namespace eoconv;

namespace
{

ConverterParams params()
{
    auto p = ConverterParams::from_quality_factors(kTwoPi * 200e12, 1e5, 1.0, kTwoPi * 6e9, 1e3, 1.0, kTwoPi * 50e3);
    p.pump_power = 2e-3;
    return p;
}

} // namespace

static void BM_EvaluateConverter(benchmark::State& state)
{
    const auto p = params();
    for (auto _ : state)
        benchmark::DoNotOptimize(evaluate_converter(p).gamma_peak);
}
BENCHMARK(BM_EvaluateConverter);

static void BM_ScatteringMatrix(benchmark::State& state)
{
    const auto p = params();
    double w = p.omega_b;
    for (auto _ : state) {
        benchmark::DoNotOptimize(scattering_matrix(w, p).s);
        w += 1.0;
    }
}
BENCHMARK(BM_ScatteringMatrix);
