#ifndef EOCONV_GEOMETRY_HPP
#define EOCONV_GEOMETRY_HPP

#include "eoconv/material.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace eoconv
{

// Listed in increasing tagging priority.
enum class RegionRole
{
    vacuum,
    substrate,
    cladding,
    core,
    electrode,
};

std::string_view role_name(RegionRole role) noexcept;
RegionRole parse_role(std::string_view name);

// Axis-aligned rectangle in the (rho, z) half-plane, metres.
struct Rect
{
    double rho_min = 0.0;
    double rho_max = 0.0;
    double z_min = 0.0;
    double z_max = 0.0;

    double width() const noexcept { return rho_max - rho_min; }
    double height() const noexcept { return z_max - z_min; }
    double area() const noexcept { return width() * height(); }
    bool contains(double rho, double z) const noexcept
    {
        return rho >= rho_min && rho < rho_max && z >= z_min && z < z_max;
    }
    double overlap_area(const Rect& other) const noexcept;
};

struct Region
{
    std::string name;
    RegionRole role = RegionRole::cladding;
    // For electrodes the material only sets the optical permittivity seen by
    // the mode solver; electrostatically an electrode is a Dirichlet conductor.
    std::string material;
    Rect box;
    double potential = 0.0; // volts, electrodes only
};

enum class Polarization
{
    TE, // dominant axial component E_z
    TM, // dominant radial component E_rho
};

std::string_view polarization_name(Polarization p) noexcept;
Polarization parse_polarization(std::string_view name);

enum class ElectrodeLayout
{
    side,
    top_bottom,
    custom,
};

struct CrossSectionGeometry
{
    double ring_radius = 0.0; // R, metres
    std::vector<Region> regions;
    double azimuthal_coverage = 1.0; // f_phi
    double electrode_gap = 0.0;      // d, derived convenience value
    ElectrodeLayout layout = ElectrodeLayout::custom;
    std::optional<double> vacuum_margin; // default: 3x the largest feature
    double microstrip_length = 100e-6;   // L_eff of the microwave resonator section
    double energy_fraction = 0.5;        // lambda/2 standing-wave voltage profile

    // Throws GeometryError on any invariant violation.
    void validate(const MaterialLibrary& materials) const;

    std::map<std::string, double> electrode_potentials() const;
    std::vector<const Region*> regions_with_role(RegionRole role) const;
    Rect bounding_box() const;
    double largest_feature() const;
    double effective_vacuum_margin() const;

    // Same cross-section with every region translated so the ring sits at new_radius.
    CrossSectionGeometry with_ring_radius(double new_radius) const;
    CrossSectionGeometry with_electrode_potentials(const std::map<std::string, double>& potentials) const;
    // Electrodes retagged as their optical material; used to key optical solves.
    CrossSectionGeometry without_electrodes() const;
};

enum class Preset
{
    G1, // electrodes beside the ring
    G2, // electrodes above and below, gap not optimized
    G3, // electrodes above and below, optimized gap
    G4, // as G3, axial optical polarization
};

std::string_view preset_name(Preset p) noexcept;
Preset parse_preset(std::string_view name);
Polarization preset_polarization(Preset p) noexcept;

struct PresetOverrides
{
    std::optional<double> electrode_gap;
    std::optional<double> ring_radius;
    std::optional<double> azimuthal_coverage;
    std::optional<double> core_width;
    std::optional<double> core_height;
    std::optional<double> electrode_width;
    std::optional<double> electrode_thickness;
    std::optional<double> electrode_offset; // lateral shift of the top/bottom pair
    std::optional<double> vacuum_margin;
    std::optional<double> microstrip_length;
    std::optional<double> energy_fraction;
    std::optional<double> drive_voltage;
    std::string core_material = "LiNbO3";
    std::string cladding_material = "SiO2";
};

// Cross-sections for the four reference geometries. Dimensions that the
// design tables do not fix come from documented defaults (see README).
CrossSectionGeometry geometry_from_preset(Preset preset, const PresetOverrides& overrides = {});

} // namespace eoconv

#endif // EOCONV_GEOMETRY_HPP
