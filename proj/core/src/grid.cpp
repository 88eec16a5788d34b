#include "eoconv/grid.hpp"

#include "eoconv/errors.hpp"
#include "eoconv/hash.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace eoconv
{

std::size_t StructuredGrid::count(RegionRole role) const noexcept
{
    return static_cast<std::size_t>(std::count(roles_.begin(), roles_.end(), role));
}

double StructuredGrid::electrode_potential(std::size_t idx) const noexcept
{
    const int r = region_index_[idx];
    return r >= 0 ? regions_[static_cast<std::size_t>(r)].potential : 0.0;
}

std::string StructuredGrid::hash_hex() const
{
    return to_hex(hash_);
}

GridPtr build_grid(const CrossSectionGeometry& geometry, const MaterialLibrary& materials, double cells_per_metre)
{
    geometry.validate(materials);
    if (!(cells_per_metre > 0.0) || !std::isfinite(cells_per_metre))
        throw GeometryError("grid resolution must be positive");

    const double h = 1.0 / cells_per_metre;
    for (const auto& r : geometry.regions) {
        const double narrow = std::min(r.box.width(), r.box.height());
        if (narrow * cells_per_metre < kMinCellsPerFeature * (1.0 - 1e-9))
            throw GeometryError("feature under-resolved: region '" + r.name + "' spans " +
                                std::to_string(narrow * cells_per_metre) + " cells across its narrowest side (" +
                                std::to_string(static_cast<int>(kMinCellsPerFeature)) + " required)");
    }

    const Rect box = geometry.bounding_box();
    const double margin = geometry.effective_vacuum_margin();
    // snap the origin to a multiple of h so that region edges land on faces
    const double snap = 1e-9;
    const double rho_lo = std::max(0.0, box.rho_min - margin);
    const double rho0 = std::floor(rho_lo / h + snap) * h;
    const double z0 = std::floor((box.z_min - margin) / h + snap) * h;
    const int n_rho = static_cast<int>(std::ceil((box.rho_max + margin - rho0) / h - snap));
    const int n_z = static_cast<int>(std::ceil((box.z_max + margin - z0) / h - snap));
    if (n_rho < 1 || n_z < 1)
        throw GeometryError("grid has no cells");
    if (static_cast<double>(n_rho) * n_z > 2.0e7)
        throw GeometryError("grid would have " + std::to_string(static_cast<double>(n_rho) * n_z) +
                            " cells; reduce resolution or vacuum margin");

    auto grid = std::shared_ptr<StructuredGrid>(new StructuredGrid());
    StructuredGrid& g = *grid;
    g.n_rho_ = n_rho;
    g.n_z_ = n_z;
    g.h_rho_ = h;
    g.h_z_ = h;
    g.rho0_ = rho0;
    g.z0_ = z0;
    g.reference_radius_ = geometry.ring_radius;
    g.resolution_ = cells_per_metre;
    g.regions_ = geometry.regions;

    // local material table: vacuum first, then regions in order of first use
    g.materials_.push_back(vacuum_material());
    std::vector<std::uint16_t> region_material(geometry.regions.size());
    for (std::size_t r = 0; r < geometry.regions.size(); ++r) {
        const std::string& name = geometry.regions[r].material;
        auto it = std::find_if(g.materials_.begin(), g.materials_.end(),
                               [&](const Material& m) { return m.name() == name; });
        if (it == g.materials_.end()) {
            g.materials_.push_back(materials.get(name));
            it = std::prev(g.materials_.end());
        }
        region_material[r] = static_cast<std::uint16_t>(it - g.materials_.begin());
    }

    const std::size_t n = g.size();
    g.roles_.assign(n, RegionRole::vacuum);
    g.region_index_.assign(n, StructuredGrid::kVacuumRegion);
    g.material_index_.assign(n, 0);

    for (int j = 0; j < n_z; ++j) {
        for (int i = 0; i < n_rho; ++i) {
            const double rc = g.rho(i);
            const double zc = g.z(j);
            const std::size_t idx = g.index(i, j);
            int best = StructuredGrid::kVacuumRegion;
            for (std::size_t r = 0; r < geometry.regions.size(); ++r) {
                const Region& reg = geometry.regions[r];
                if (!reg.box.contains(rc, zc))
                    continue;
                // strictly higher priority wins; ties keep the first listed region
                if (best == StructuredGrid::kVacuumRegion ||
                    reg.role > geometry.regions[static_cast<std::size_t>(best)].role)
                    best = static_cast<int>(r);
            }
            if (best != StructuredGrid::kVacuumRegion) {
                g.roles_[idx] = geometry.regions[static_cast<std::size_t>(best)].role;
                g.region_index_[idx] = best;
                g.material_index_[idx] = region_material[static_cast<std::size_t>(best)];
            }
        }
    }

    Fnv1a hash;
    hash.add(static_cast<std::int64_t>(n_rho));
    hash.add(static_cast<std::int64_t>(n_z));
    hash.add(h);
    hash.add(rho0);
    hash.add(z0);
    hash.add(g.reference_radius_);
    for (const auto& m : g.materials_) {
        hash.add(m.name());
        for (int a = 0; a < 9; ++a) {
            hash.add(m.eps_optical()(a));
            hash.add(m.eps_microwave()(a));
        }
        for (int a = 0; a < 18; ++a)
            hash.add(m.r_contracted()(a));
    }
    for (const auto& r : g.regions_) {
        hash.add(r.name);
        hash.add(r.potential);
    }
    hash.bytes(g.roles_.data(), g.roles_.size() * sizeof(RegionRole));
    hash.bytes(g.material_index_.data(), g.material_index_.size() * sizeof(std::uint16_t));
    g.hash_ = hash.value();
    return grid;
}

} // namespace eoconv
