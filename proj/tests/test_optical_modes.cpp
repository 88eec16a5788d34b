#include "support.hpp"

#include "eoconv/errors.hpp"

#include <gtest/gtest.h>

using namespace eotest;

namespace
{

ModeOptions loose()
{
    ModeOptions o;
    o.confinement = 1.0; // Dirichlet box benchmark: the wall is part of the problem
    return o;
}

// fundamental mode of a uniform n = 2 annular box near 1.5 um
ModeSolution box_mode(double radius, double res, int* m_out = nullptr)
{
    const auto grid = build_grid(uniform_box(radius), test_library(), res);
    const int m = static_cast<int>(std::lround(kTwoPi * radius * 2.0 / 1.5e-6));
    if (m_out)
        *m_out = m;
    return solve_fundamental_mode(grid, m, Polarization::TE, loose());
}

GridPtr ring_grid(double radius = 20 * um)
{
    return build_grid(bare_ring(radius), MaterialLibrary::defaults(), 20e6);
}

} // namespace

TEST(Wgm, LargeRadiusPhaseMatching)
{
    const double R = 200 * um;
    int m = 0;
    const auto mode = box_mode(R, 20e6, &m);
    const double lambda = kTwoPi * kSpeedOfLight / mode.omega;
    EXPECT_LT(rel(m * lambda, kTwoPi * R * 2.0), 0.05);
    EXPECT_LT(rel(mode.n_eff, 2.0), 0.05);
    EXPECT_NEAR(mode.n_eff, m * kSpeedOfLight / (mode.omega * R), 1e-12);
    EXPECT_LE(mode.residual, 1e-8);
}

TEST(Wgm, MeshConvergence)
{
    const auto a = box_mode(200 * um, 20e6);
    const auto b = box_mode(200 * um, 40e6);
    EXPECT_LT(rel(a.omega, b.omega), 1e-3);
}

TEST(Wgm, RingModeNear200THz)
{
    const auto grid = ring_grid();
    const auto mode = find_mode_near_target(grid, Polarization::TE, kSpeedOfLight / 200e12, 2.2);
    EXPECT_LT(rel(to_hz(mode.omega), 200e12), 0.02);
    EXPECT_LE(mode.boundary_ratio, 1e-4);
    EXPECT_LE(mode.residual, 1e-8);
    ASSERT_TRUE(mode.fsr && mode.tau);
    EXPECT_DOUBLE_EQ(*mode.fsr * *mode.tau, kTwoPi);
    EXPECT_GT(mode.n_eff, 1.0);
    EXPECT_LT(mode.n_eff, 2.3);
    EXPECT_GE(mode.m, 1);
}

TEST(Wgm, NormalisedEnergyAndScaling)
{
    const auto grid = ring_grid();
    const auto mode = solve_fundamental_mode(grid, 160, Polarization::TM);
    EXPECT_NEAR(mode_energy(mode), 1.0, 1e-12);
    EXPECT_NEAR(mode_energy(mode.scaled(3.0)), 9.0, 1e-11);
    EXPECT_EQ(mode_energy(mode.scaled(0.0)), 0.0);
    EXPECT_GT(mode.omega, 0.0);
}

TEST(Wgm, SeveralModesOrthogonalAndOrdered)
{
    const auto grid = ring_grid();
    ModeOptions o;
    o.n_modes = 3;
    o.confinement = 1e-2;
    const double target = kSpeedOfLight / 200e12;
    const auto modes = solve_wgm_modes(grid, 163, Polarization::TE, target, o);
    ASSERT_GE(modes.size(), 2u);
    const double wt = kTwoPi * kSpeedOfLight / target;
    for (std::size_t k = 0; k + 1 < modes.size(); ++k)
        EXPECT_LE(std::abs(modes[k].omega - wt), std::abs(modes[k + 1].omega - wt));
    for (std::size_t i = 0; i < modes.size(); ++i) {
        EXPECT_LE(modes[i].residual, 1e-8);
        for (std::size_t j = i + 1; j < modes.size(); ++j) {
            double ip = 0.0, ni = 0.0, nj = 0.0;
            for (std::size_t c = 0; c < grid->size(); ++c) {
                const double w = modes[i].eps[c] * grid->volume_per_radian(c);
                ip += w * modes[i].amplitude[c] * modes[j].amplitude[c];
                ni += w * modes[i].amplitude[c] * modes[i].amplitude[c];
                nj += w * modes[j].amplitude[c] * modes[j].amplitude[c];
            }
            EXPECT_LE(std::abs(ip) / std::sqrt(ni * nj), 1e-6);
        }
    }
}

TEST(Wgm, Preconditions)
{
    const auto grid = ring_grid();
    EXPECT_THROW(solve_wgm_modes(grid, 0, Polarization::TE, 1.5e-6), PreconditionError);
    EXPECT_THROW(solve_wgm_modes(grid, 100, Polarization::TE, 10e-6), PreconditionError);
    EXPECT_THROW(solve_wgm_modes(grid, 100, Polarization::TE, 0.2e-6), PreconditionError);
}

TEST(Wgm, NoConfinedModeInTightBox)
{
    // a wall right next to the core: nothing passes the 40 dB check
    auto g = bare_ring();
    g.vacuum_margin = 0.0;
    for (auto& r : g.regions)
        if (r.role == RegionRole::cladding)
            r.box = {19.0 * um, 21.0 * um, -0.2 * um, 0.8 * um};
    const auto grid = build_grid(g, MaterialLibrary::defaults(), 20e6);
    EXPECT_THROW(solve_fundamental_mode(grid, 160, Polarization::TE), NoConfinedModeError);
}

TEST(Wgm, FrequencyFallsAsCoreIndexRises)
{
    const auto grid = ring_grid();
    auto eps = optical_permittivity(*grid, Polarization::TE);
    double last = 1e300;
    for (double scale : {1.0, 1.01, 1.02, 1.05}) {
        auto e = eps;
        for (std::size_t c = 0; c < grid->size(); ++c)
            if (grid->role(c) == RegionRole::core)
                e[c] *= scale;
        const double w = solve_fundamental_mode(grid, e, 163, Polarization::TE).omega;
        EXPECT_LT(w, last);
        last = w;
    }
}

TEST(Fsr, LargeRadiusAndScaling)
{
    const double R = 200 * um;
    const auto grid = build_grid(uniform_box(R), test_library(), 20e6);
    const int m = static_cast<int>(std::lround(kTwoPi * R * 2.0 / 1.5e-6));
    const auto f = fsr_and_tau(grid, m, Polarization::TE, loose());
    const auto mode = solve_fundamental_mode(grid, m, Polarization::TE, loose());
    EXPECT_LT(rel(f.fsr, kSpeedOfLight / (mode.n_eff * R)), 0.05);
    EXPECT_DOUBLE_EQ(f.fsr * f.tau, kTwoPi);
    EXPECT_DOUBLE_EQ(f.fsr, f.omega_m1 - f.omega_m);

    const auto grid2 = build_grid(uniform_box(2 * R), test_library(), 20e6);
    const auto f2 = fsr_and_tau(grid2, 2 * m, Polarization::TE, loose());
    EXPECT_LT(rel(f2.fsr, 0.5 * f.fsr), 0.10);
}

TEST(MatchFsr, FixedPoint)
{
    const auto geom = bare_ring(20 * um);
    const auto lib = MaterialLibrary::defaults();
    const auto grid = build_grid(geom, lib, 20e6);
    const double lambda = kSpeedOfLight / 200e12;
    const auto mode = find_mode_near_target(grid, Polarization::TE, lambda, 2.2);
    const auto res = match_fsr(geom, lib, 20e6, Polarization::TE, *mode.fsr, lambda);
    EXPECT_LT(rel(res.radius, 20 * um), 0.01);
    EXPECT_LT(rel(res.fsr, *mode.fsr), 5e-3);
}

TEST(MatchFsr, BracketFailure)
{
    const auto geom = bare_ring(20 * um);
    MatchFsrOptions o;
    o.radius_min = 15 * um;
    o.radius_max = 40 * um;
    // FSR at 15 um is ~1.4 THz; 5 THz is out of reach
    EXPECT_THROW(match_fsr(geom, MaterialLibrary::defaults(), 20e6, Polarization::TE, kTwoPi * 5e12,
                           kSpeedOfLight / 200e12, o),
                 SolverError);
}

TEST(MatchFsr, SixGigahertzIsMillimetreScale)
{
    // analytic estimate c / (n_g 2 pi f) ~ 3.6 mm for n_g ~ 2.2; solved on a coarse grid
    const auto geom = bare_ring(20 * um);
    MatchFsrOptions o;
    o.radius_min = 0.5e-3;
    o.radius_max = 10e-3;
    ModeOptions mo;
    mo.m_scan_half_width = 2;
    const auto res = match_fsr(geom, MaterialLibrary::defaults(), 20e6, Polarization::TE, kTwoPi * 6e9,
                               kSpeedOfLight / 200e12, o, mo);
    const double estimate = kSpeedOfLight / (2.2 * kTwoPi * 6e9);
    EXPECT_GT(res.radius, 0.5 * estimate);
    EXPECT_LT(res.radius, 2.0 * estimate);
    EXPECT_LT(rel(res.fsr, kTwoPi * 6e9), 5e-3);
}
