#include "support.hpp"

#include "eoconv/errors.hpp"
#include "eoconv/field_io.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace eotest;

TEST(FieldIo, PotentialRoundTrip)
{
    const auto grid = build_grid(geometry_from_preset(Preset::G3), MaterialLibrary::defaults(), 20e6);
    const auto pf = solve_potential(grid);
    std::stringstream ss;
    write_potential_grid(ss, pf);
    const auto dump = read_grid_dump(ss);
    EXPECT_EQ(dump.kind, "potential");
    ASSERT_EQ(dump.rows.size(), grid->size());
    ASSERT_EQ(dump.columns.size(), 5u);
    EXPECT_EQ(dump.columns[0], "rho[m]");
    EXPECT_EQ(dump.columns[2], "V[V]");
    EXPECT_EQ(dump.meta.at("grid_hash"), grid->hash_hex());
    const auto E = electric_field(pf);
    for (std::size_t c = 0; c < grid->size(); c += 97) {
        EXPECT_NEAR(dump.rows[c][0], grid->rho(grid->i_of(c)), 1e-9 * grid->rho(grid->i_of(c)));
        EXPECT_NEAR(dump.rows[c][2], pf.potential[c], 1e-9);
        EXPECT_NEAR(dump.rows[c][4], E[c][2], 1e-9 * (std::abs(E[c][2]) + 1.0));
    }
}

TEST(FieldIo, ModeDumpAndSummary)
{
    const auto grid = build_grid(bare_ring(), MaterialLibrary::defaults(), 20e6);
    const auto mode = solve_fundamental_mode(grid, 160, Polarization::TE);
    std::stringstream ss;
    write_mode_grid(ss, mode);
    const auto dump = read_grid_dump(ss);
    EXPECT_EQ(dump.kind, "mode");
    EXPECT_EQ(dump.rows.size(), grid->size());
    const auto s = mode_summary(mode);
    EXPECT_NE(s.find("m=160"), std::string::npos) << s;
}

TEST(FieldIo, RejectsGarbage)
{
    std::stringstream ss("not a grid\n1 2 3\n");
    EXPECT_THROW(read_grid_dump(ss), eoconv::Error);
}
