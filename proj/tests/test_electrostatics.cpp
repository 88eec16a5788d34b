#include "support.hpp"

#include "eoconv/errors.hpp"

#include <gtest/gtest.h>

using namespace eotest;

namespace
{

PotentialField solve(const CrossSectionGeometry& g, double res, std::map<std::string, double> v = {})
{
    const auto grid = build_grid(g, test_library(), res);
    return v.empty() ? solve_potential(grid) : solve_potential(grid, v);
}

double coax_capacitance(const CoaxCase& c, double res)
{
    const auto g = c.geometry();
    const auto pf = solve(g, res);
    return capacitance(pf, g.microstrip_length, g.energy_fraction);
}

} // namespace

TEST(Electrostatics, ZeroBoundaryData)
{
    const auto pf = solve(CoaxCase{}.geometry(), 20e6, {{"inner", 0.0}, {"outer", 0.0}});
    for (double v : pf.potential)
        ASSERT_EQ(v, 0.0);
    for (const auto& e : electric_field(pf))
        ASSERT_TRUE(e.isZero(0.0));
    EXPECT_THROW(capacitance(pf, 1e-4), PreconditionError);
}

TEST(Electrostatics, NoElectrodesIsSingular)
{
    EXPECT_THROW(solve(uniform_box(20 * um, 2 * um), 10e6), SolverError);
}

TEST(Electrostatics, UnknownElectrodeName)
{
    EXPECT_THROW(solve(CoaxCase{}.geometry(), 10e6, {{"nope", 1.0}}), PreconditionError);
}

TEST(Electrostatics, DirichletExactAndMaximumPrinciple)
{
    const auto pf = solve(geometry_from_preset(Preset::G3), 20e6);
    const auto& g = *pf.grid;
    for (std::size_t c = 0; c < g.size(); ++c) {
        if (g.role(c) == RegionRole::electrode)
            ASSERT_EQ(pf.potential[c], g.electrode_potential(c));
        ASSERT_GE(pf.potential[c], 0.0);
        ASSERT_LE(pf.potential[c], 1.0);
    }
    EXPECT_LE(pf.residual, 1e-10);
}

TEST(Electrostatics, ParallelPlateRampAndField)
{
    // plates in z over a wide span, so the interior is far from the fringes
    StackCase s;
    s.m1 = s.m2 = "diel4";
    s.volts = 2.0;
    const auto pf = solve(s.geometry(), 20e6);
    const auto& g = *pf.grid;
    const auto E = electric_field(pf);
    const double want = s.volts / (s.t1 + s.t2);
    for (std::size_t c = 0; c < g.size(); ++c) {
        if (g.role(c) == RegionRole::electrode)
            continue;
        const double z = g.z(g.j_of(c));
        EXPECT_NEAR(pf.potential[c], s.volts * z / (s.t1 + s.t2), 1e-8);
        EXPECT_NEAR(std::abs(E[c][2]), want, 0.01 * want);
        EXPECT_NEAR(E[c][0], 0.0, 1e-6 * want);
    }
}

TEST(Electrostatics, FringingPlatesUniformAwayFromEdges)
{
    CrossSectionGeometry g;
    g.ring_radius = 30 * um;
    g.vacuum_margin = 3 * um;
    g.regions.push_back({"fill", RegionRole::cladding, "diel4", {20 * um, 40 * um, 0.0, 1 * um}, 0.0});
    g.regions.push_back({"bottom", RegionRole::electrode, "diel4", {20 * um, 40 * um, -0.5 * um, 0.0}, 0.0});
    g.regions.push_back({"top", RegionRole::electrode, "diel4", {20 * um, 40 * um, 1 * um, 1.5 * um}, 1.0});
    const auto pf = solve(g, 20e6);
    const auto E = electric_field(pf);
    const auto& grid = *pf.grid;
    for (std::size_t c = 0; c < grid.size(); ++c) {
        const double r = grid.rho(grid.i_of(c)), z = grid.z(grid.j_of(c));
        if (r > 25 * um && r < 35 * um && z > 0 && z < 1 * um)
            EXPECT_NEAR(E[c].norm(), 1.0 / 1e-6, 0.01e6);
    }
}

TEST(Electrostatics, LinearPotentialGivesConstantField)
{
    // V = alpha z between plates: E = (0, 0, -alpha)
    StackCase s;
    s.m1 = s.m2 = "diel2";
    const auto pf = solve(s.geometry(), 20e6);
    const auto E = electric_field(pf);
    const double alpha = s.volts / (s.t1 + s.t2);
    for (std::size_t c = 0; c < pf.grid->size(); ++c)
        if (pf.grid->role(c) != RegionRole::electrode) {
            EXPECT_NEAR(E[c][2], -alpha, 1e-6 * alpha);
            EXPECT_EQ(E[c][1], 0.0);
        }
}

TEST(Electrostatics, SeriesStackFieldJump)
{
    StackCase s; // eps 2 below, eps 8 above
    const auto pf = solve(s.geometry(), 20e6);
    const auto E = electric_field(pf);
    const auto& g = *pf.grid;
    double e1 = 0, e2 = 0;
    int n1 = 0, n2 = 0;
    for (std::size_t c = 0; c < g.size(); ++c) {
        if (g.role(c) == RegionRole::electrode)
            continue;
        const double z = g.z(g.j_of(c));
        if (z < s.t1 - 2 * g.h_z()) {
            e1 += std::abs(E[c][2]);
            ++n1;
        } else if (z > s.t1 + 2 * g.h_z()) {
            e2 += std::abs(E[c][2]);
            ++n2;
        }
    }
    EXPECT_NEAR((e1 / n1) / (e2 / n2), 8.0 / 2.0, 0.01 * 4.0);
    // series-capacitor field in layer 1: V eps2 / (eps2 t1 + eps1 t2)
    EXPECT_NEAR(e1 / n1, 8.0 / (8.0 * s.t1 + 2.0 * s.t2), 1e-6 * e1 / n1);
}

TEST(Capacitance, ParallelPlateWithinTwoPercent)
{
    CoaxCase c;
    EXPECT_LT(rel(coax_capacitance(c, 20e6), c.parallel_plate()), 0.02);
}

TEST(Capacitance, SecondOrderConvergence)
{
    CoaxCase c;
    c.a = 2 * um;
    c.b = 3 * um;
    const double exact = c.exact();
    const double e1 = std::abs(coax_capacitance(c, 10e6) - exact);
    const double e2 = std::abs(coax_capacitance(c, 20e6) - exact);
    const double e3 = std::abs(coax_capacitance(c, 40e6) - exact);
    EXPECT_GE(e1 / e2, 3.4);
    EXPECT_LE(e1 / e2, 4.6);
    EXPECT_GE(e2 / e3, 3.4);
    EXPECT_LE(e2 / e3, 4.6);
}

TEST(Capacitance, VoltageAndLengthScaling)
{
    const auto g = geometry_from_preset(Preset::G2);
    const auto grid = build_grid(g, MaterialLibrary::defaults(), 20e6);
    const auto p1 = solve_potential(grid);
    const auto p2 = solve_potential(grid, {{"top_electrode", 2.0}, {"bottom_electrode", 0.0}});
    EXPECT_LT(rel(capacitance(p2, 1e-4), capacitance(p1, 1e-4)), 1e-8);
    EXPECT_LT(rel(capacitance(p1, 2e-4), 2 * capacitance(p1, 1e-4)), 1e-14);
    EXPECT_GT(capacitance(p1, 1e-4), 0.0);
}

TEST(Capacitance, EnergyAndChargeEstimatorsAgree)
{
    for (Preset p : {Preset::G1, Preset::G3}) {
        const auto g = geometry_from_preset(p);
        const auto pf = solve_potential(build_grid(g, MaterialLibrary::defaults(), 20e6));
        EXPECT_LT(rel(capacitance_from_charge(pf, 1e-4), capacitance(pf, 1e-4)), 0.01);
    }
}

TEST(Capacitance, LinearInBoundaryData)
{
    const auto grid = build_grid(geometry_from_preset(Preset::G1), MaterialLibrary::defaults(), 20e6);
    const auto a = solve_potential(grid, {{"inner_electrode", 0.0}, {"outer_electrode", 1.0}});
    const auto b = solve_potential(grid, {{"inner_electrode", 0.0}, {"outer_electrode", 3.5}});
    double worst = 0.0;
    for (std::size_t c = 0; c < grid->size(); ++c)
        worst = std::max(worst, std::abs(b.potential[c] - 3.5 * a.potential[c]));
    EXPECT_LT(worst, 1e-8 * 3.5);
}

TEST(Vzpf, Values)
{
    const double wb = kTwoPi * 6e9;
    // sqrt(hbar wb / 2C) with C = 100 fF
    EXPECT_NEAR(v_zpf(100e-15, wb), 4.4584986753e-6, 1e-15);
    EXPECT_NEAR(v_zpf(400e-15, wb), 0.5 * v_zpf(100e-15, wb), 1e-20);
    EXPECT_NEAR(v_zpf(100e-15, 4 * wb), 2 * v_zpf(100e-15, wb), 1e-19);
    EXPECT_THROW(v_zpf(0.0, wb), PreconditionError);
    EXPECT_THROW(v_zpf(1e-15, -1.0), PreconditionError);
}
