// shared fixtures for the test binaries
#ifndef EOCONV_TESTS_SUPPORT_HPP
#define EOCONV_TESTS_SUPPORT_HPP

#include "eoconv/constants.hpp"
#include "eoconv/electrostatics.hpp"
#include "eoconv/geometry.hpp"
#include "eoconv/grid.hpp"
#include "eoconv/material.hpp"
#include "eoconv/optical_modes.hpp"
#include "eoconv/pipeline.hpp"

#include <cmath>
#include <random>
#include <string>

namespace eotest
{

using namespace eoconv;
constexpr double um = 1e-6;

inline MaterialLibrary test_library()
{
    MaterialLibrary lib = MaterialLibrary::defaults();
    lib.add(Material::isotropic("diel4", 4.0, 4.0));
    lib.add(Material::isotropic("diel2", 2.0, 2.0));
    lib.add(Material::isotropic("diel8", 8.0, 8.0));
    return lib;
}

// Thin coaxial shell: electrodes at rho = a and rho = b, dielectric between,
// zero-flux walls in z. Exact C = 2 pi eps0 eps H / ln(b/a) (total, all phi).
struct CoaxCase
{
    double a = 20.0 * um;
    double b = 21.0 * um;
    double height = 1.0 * um;
    double electrode = 1.0 * um;
    double eps = 4.0;
    double volts = 1.0;

    CrossSectionGeometry geometry() const
    {
        CrossSectionGeometry g;
        g.ring_radius = 0.5 * (a + b);
        g.vacuum_margin = 0.0;
        g.microstrip_length = kTwoPi * g.ring_radius; // full circumference
        g.energy_fraction = 1.0;
        g.regions.push_back({"fill", RegionRole::cladding, "diel4", {a, b, 0.0, height}, 0.0});
        g.regions.push_back({"inner", RegionRole::electrode, "diel4", {a - electrode, a, 0.0, height}, 0.0});
        g.regions.push_back({"outer", RegionRole::electrode, "diel4", {b, b + electrode, 0.0, height}, volts});
        return g;
    }
    double exact() const { return kTwoPi * kEps0 * eps * height / std::log(b / a); }
    // eps0 eps A / g with A the mean-radius plate area
    double parallel_plate() const { return kEps0 * eps * kTwoPi * 0.5 * (a + b) * height / (b - a); }
};

// Plates in z with a two-layer dielectric stack between them (series capacitor),
// filling the full rho extent so the problem is one-dimensional.
struct StackCase
{
    double t1 = 1.0 * um;
    double t2 = 1.0 * um;
    std::string m1 = "diel2";
    std::string m2 = "diel8";
    double volts = 1.0;

    CrossSectionGeometry geometry() const
    {
        CrossSectionGeometry g;
        g.ring_radius = 30.0 * um;
        g.vacuum_margin = 0.0;
        const Rect span{28.0 * um, 32.0 * um, 0.0, 0.0};
        g.regions.push_back({"lower", RegionRole::cladding, m1, {span.rho_min, span.rho_max, 0.0, t1}, 0.0});
        g.regions.push_back({"upper", RegionRole::cladding, m2, {span.rho_min, span.rho_max, t1, t1 + t2}, 0.0});
        g.regions.push_back({"bottom", RegionRole::electrode, m1, {span.rho_min, span.rho_max, -0.5 * um, 0.0}, 0.0});
        g.regions.push_back(
            {"top", RegionRole::electrode, m2, {span.rho_min, span.rho_max, t1 + t2, t1 + t2 + 0.5 * um}, volts});
        return g;
    }
};

// Annular box of uniform isotropic dielectric (n = 2) around R; Dirichlet walls.
inline CrossSectionGeometry uniform_box(double radius, double size = 6.0 * um)
{
    CrossSectionGeometry g;
    g.ring_radius = radius;
    g.vacuum_margin = 0.0;
    g.regions.push_back(
        {"medium", RegionRole::cladding, "diel4", {radius - size / 2, radius + size / 2, -size / 2, size / 2}, 0.0});
    return g;
}

// Lithium niobate ring in silica without electrodes (optics-only tests).
inline CrossSectionGeometry bare_ring(double radius = 20.0 * um)
{
    auto g = geometry_from_preset(Preset::G4, PresetOverrides{.ring_radius = radius});
    return g.without_electrodes();
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline std::mt19937_64& rng()
{
    static std::mt19937_64 gen(20240601ULL);
    return gen;
}

inline double uniform(double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng());
}

} // namespace eotest

#endif
