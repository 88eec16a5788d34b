#include "eoconv/geometry.hpp"

#include "eoconv/errors.hpp"

#include <algorithm>
#include <cmath>

namespace eoconv
{

std::string_view role_name(RegionRole role) noexcept
{
    switch (role) {
    case RegionRole::vacuum: return "vacuum";
    case RegionRole::substrate: return "substrate";
    case RegionRole::cladding: return "cladding";
    case RegionRole::core: return "core";
    case RegionRole::electrode: return "electrode";
    }
    return "?";
}

RegionRole parse_role(std::string_view name)
{
    for (auto r : {RegionRole::vacuum, RegionRole::substrate, RegionRole::cladding, RegionRole::core,
                   RegionRole::electrode})
        if (role_name(r) == name)
            return r;
    throw ConfigError("unknown region role '" + std::string(name) + "'");
}

std::string_view polarization_name(Polarization p) noexcept
{
    return p == Polarization::TE ? "TE" : "TM";
}

Polarization parse_polarization(std::string_view name)
{
    if (name == "TE" || name == "te" || name == "axial")
        return Polarization::TE;
    if (name == "TM" || name == "tm" || name == "radial")
        return Polarization::TM;
    throw ConfigError("unknown polarization '" + std::string(name) + "' (expected TE or TM)");
}

double Rect::overlap_area(const Rect& o) const noexcept
{
    const double w = std::min(rho_max, o.rho_max) - std::max(rho_min, o.rho_min);
    const double h = std::min(z_max, o.z_max) - std::max(z_min, o.z_min);
    return (w > 0.0 && h > 0.0) ? w * h : 0.0;
}

void CrossSectionGeometry::validate(const MaterialLibrary& materials) const
{
    if (!(ring_radius > 0.0) || !std::isfinite(ring_radius))
        throw GeometryError("ring radius must be positive");
    if (!(azimuthal_coverage > 0.0 && azimuthal_coverage <= 1.0))
        throw GeometryError("azimuthal coverage f_phi must lie in (0, 1], got " + std::to_string(azimuthal_coverage));
    if (!(microstrip_length > 0.0))
        throw GeometryError("microstrip effective length must be positive");
    if (!(energy_fraction > 0.0 && energy_fraction <= 1.0))
        throw GeometryError("energy fraction must lie in (0, 1]");
    if (vacuum_margin && !(*vacuum_margin >= 0.0))
        throw GeometryError("vacuum margin must be non-negative");
    if (regions.empty())
        throw GeometryError("geometry has no regions");

    for (const auto& r : regions) {
        const Rect& b = r.box;
        if (!std::isfinite(b.rho_min) || !std::isfinite(b.rho_max) || !std::isfinite(b.z_min) ||
            !std::isfinite(b.z_max))
            throw GeometryError("region '" + r.name + "' has non-finite bounds");
        if (b.width() <= 0.0 || b.height() <= 0.0)
            throw GeometryError("region '" + r.name + "' is degenerate (zero area)");
        if (b.rho_min < 0.0)
            throw GeometryError("region '" + r.name + "' extends to rho < 0");
        if (!materials.contains(r.material))
            throw GeometryError("region '" + r.name + "' references unknown material '" + r.material + "'");
        if (r.role == RegionRole::core && !materials.get(r.material).is_electro_optic())
            throw GeometryError("core region '" + r.name + "' material '" + r.material +
                                "' has a zero Pockels tensor");
    }
    for (const auto& e : regions) {
        if (e.role != RegionRole::electrode)
            continue;
        for (const auto& c : regions)
            if (c.role == RegionRole::core && e.box.overlap_area(c.box) > 0.0)
                throw GeometryError("electrode '" + e.name + "' overlaps core region '" + c.name + "'");
    }
}

std::map<std::string, double> CrossSectionGeometry::electrode_potentials() const
{
    std::map<std::string, double> out;
    for (const auto& r : regions)
        if (r.role == RegionRole::electrode)
            out[r.name] = r.potential;
    return out;
}

std::vector<const Region*> CrossSectionGeometry::regions_with_role(RegionRole role) const
{
    std::vector<const Region*> out;
    for (const auto& r : regions)
        if (r.role == role)
            out.push_back(&r);
    return out;
}

Rect CrossSectionGeometry::bounding_box() const
{
    if (regions.empty())
        return {};
    Rect b = regions.front().box;
    for (const auto& r : regions) {
        b.rho_min = std::min(b.rho_min, r.box.rho_min);
        b.rho_max = std::max(b.rho_max, r.box.rho_max);
        b.z_min = std::min(b.z_min, r.box.z_min);
        b.z_max = std::max(b.z_max, r.box.z_max);
    }
    return b;
}

double CrossSectionGeometry::largest_feature() const
{
    double f = 0.0;
    for (const auto& r : regions)
        f = std::max({f, r.box.width(), r.box.height()});
    return f;
}

double CrossSectionGeometry::effective_vacuum_margin() const
{
    return vacuum_margin.value_or(3.0 * largest_feature());
}

CrossSectionGeometry CrossSectionGeometry::with_ring_radius(double new_radius) const
{
    CrossSectionGeometry g = *this;
    const double shift = new_radius - ring_radius;
    g.ring_radius = new_radius;
    for (auto& r : g.regions) {
        r.box.rho_min += shift;
        r.box.rho_max += shift;
    }
    return g;
}

CrossSectionGeometry
CrossSectionGeometry::with_electrode_potentials(const std::map<std::string, double>& potentials) const
{
    CrossSectionGeometry g = *this;
    for (const auto& [name, volts] : potentials) {
        bool found = false;
        for (auto& r : g.regions)
            if (r.role == RegionRole::electrode && r.name == name) {
                r.potential = volts;
                found = true;
            }
        if (!found)
            throw GeometryError("no electrode named '" + name + "'");
    }
    return g;
}

CrossSectionGeometry CrossSectionGeometry::without_electrodes() const
{
    CrossSectionGeometry g = *this;
    for (auto& r : g.regions)
        if (r.role == RegionRole::electrode) {
            r.role = RegionRole::cladding;
            r.potential = 0.0;
        }
    return g;
}

std::string_view preset_name(Preset p) noexcept
{
    switch (p) {
    case Preset::G1: return "G1";
    case Preset::G2: return "G2";
    case Preset::G3: return "G3";
    case Preset::G4: return "G4";
    }
    return "?";
}

Preset parse_preset(std::string_view name)
{
    for (auto p : {Preset::G1, Preset::G2, Preset::G3, Preset::G4})
        if (preset_name(p) == name)
            return p;
    throw ConfigError("unknown geometry preset '" + std::string(name) + "' (expected G1, G2, G3 or G4)");
}

Polarization preset_polarization(Preset p) noexcept
{
    return p == Preset::G4 ? Polarization::TE : Polarization::TM;
}

CrossSectionGeometry geometry_from_preset(Preset preset, const PresetOverrides& ov)
{
    constexpr double um = 1e-6;

    const bool side = preset == Preset::G1;
    double default_gap = 2.4 * um;
    if (preset == Preset::G1)
        default_gap = 1.5 * um;
    else if (preset == Preset::G2)
        default_gap = 6.0 * um;

    const double radius = ov.ring_radius.value_or(20.0 * um);
    const double core_w = ov.core_width.value_or(side ? 1.0 * um : 1.6 * um);
    const double core_t = ov.core_height.value_or(0.6 * um);
    const double gap = ov.electrode_gap.value_or(default_gap);
    const double el_w = ov.electrode_width.value_or(3.0 * um);
    const double el_t = ov.electrode_thickness.value_or(0.4 * um);
    const double offset = ov.electrode_offset.value_or(0.0);
    const double volts = ov.drive_voltage.value_or(1.0);
    const double cladding_pad = 1.5 * um;

    CrossSectionGeometry g;
    g.ring_radius = radius;
    g.azimuthal_coverage = ov.azimuthal_coverage.value_or(0.8);
    g.electrode_gap = gap;
    g.layout = side ? ElectrodeLayout::side : ElectrodeLayout::top_bottom;
    g.vacuum_margin = ov.vacuum_margin.value_or(0.5 * um);
    g.microstrip_length = ov.microstrip_length.value_or(100.0 * um);
    g.energy_fraction = ov.energy_fraction.value_or(0.5);

    const Rect core{radius - core_w / 2, radius + core_w / 2, 0.0, core_t};
    Rect el_a, el_b;
    if (side) {
        // thin strips on the film plane, flush with the bottom of the ring
        el_a = {radius - gap / 2 - el_w, radius - gap / 2, 0.0, el_t};
        el_b = {radius + gap / 2, radius + gap / 2 + el_w, 0.0, el_t};
    } else {
        const double zc = core_t / 2;
        el_a = {radius + offset - el_w / 2, radius + offset + el_w / 2, zc + gap / 2, zc + gap / 2 + el_t};
        el_b = {radius + offset - el_w / 2, radius + offset + el_w / 2, zc - gap / 2 - el_t, zc - gap / 2};
    }

    Rect clad{std::min({core.rho_min, el_a.rho_min, el_b.rho_min}) - cladding_pad,
              std::max({core.rho_max, el_a.rho_max, el_b.rho_max}) + cladding_pad,
              std::min({core.z_min, el_a.z_min, el_b.z_min}) - cladding_pad,
              std::max({core.z_max, el_a.z_max, el_b.z_max}) + cladding_pad};

    g.regions.push_back({"cladding", RegionRole::cladding, ov.cladding_material, clad, 0.0});
    g.regions.push_back({"ring", RegionRole::core, ov.core_material, core, 0.0});
    if (side) {
        g.regions.push_back({"inner_electrode", RegionRole::electrode, ov.cladding_material, el_a, 0.0});
        g.regions.push_back({"outer_electrode", RegionRole::electrode, ov.cladding_material, el_b, volts});
    } else {
        g.regions.push_back({"top_electrode", RegionRole::electrode, ov.cladding_material, el_a, volts});
        g.regions.push_back({"bottom_electrode", RegionRole::electrode, ov.cladding_material, el_b, 0.0});
    }
    return g;
}

} // namespace eoconv
