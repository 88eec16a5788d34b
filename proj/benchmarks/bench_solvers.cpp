#include "eoconv/constants.hpp"
#include "eoconv/coupling.hpp"
#include "eoconv/electrostatics.hpp"
#include "eoconv/geometry.hpp"
#include "eoconv/grid.hpp"
#include "eoconv/optical_modes.hpp"

#include <benchmark/benchmark.h>

using namespace eoconv;

namespace
{

GridPtr preset_grid(Preset p, double res)
{
    return build_grid(geometry_from_preset(p), MaterialLibrary::defaults(), res);
}

} // namespace

static void BM_Potential(benchmark::State& state)
{
    const auto grid = preset_grid(Preset::G3, static_cast<double>(state.range(0)) * 1e6);
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_potential(grid).energy_per_radian);
    state.counters["cells"] = static_cast<double>(grid->size());
}
BENCHMARK(BM_Potential)->Arg(20)->Arg(30)->Unit(benchmark::kMillisecond);

static void BM_FundamentalMode(benchmark::State& state)
{
    const auto grid = preset_grid(Preset::G4, 20e6);
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_fundamental_mode(grid, 160, Polarization::TE).omega);
}
BENCHMARK(BM_FundamentalMode)->Unit(benchmark::kMillisecond);

static void BM_Overlap(benchmark::State& state)
{
    const auto geom = geometry_from_preset(Preset::G4);
    const auto grid = build_grid(geom, MaterialLibrary::defaults(), 20e6);
    const auto mode = solve_fundamental_mode(grid, 160, Polarization::TE);
    const auto pf = solve_potential(grid);
    const double C = capacitance(pf, geom.microstrip_length, geom.energy_fraction);
    const int n_phi = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(g0_overlap(mode, pf, C, kTwoPi * 6e9, 0.8, n_phi).g0);
}
BENCHMARK(BM_Overlap)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
