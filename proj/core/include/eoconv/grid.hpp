#ifndef EOCONV_GRID_HPP
#define EOCONV_GRID_HPP

#include "eoconv/geometry.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace eoconv
{

// Uniform cell-centred grid over the (rho, z) cross-section. Field unknowns
// live at cell centres ("nodes"); material interfaces fall on cell faces when
// region edges are multiples of the spacing.
class StructuredGrid
{
public:
    static constexpr int kVacuumRegion = -1;

    int n_rho() const noexcept { return n_rho_; }
    int n_z() const noexcept { return n_z_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(n_rho_) * static_cast<std::size_t>(n_z_); }
    double h_rho() const noexcept { return h_rho_; }
    double h_z() const noexcept { return h_z_; }

    std::size_t index(int i, int j) const noexcept
    {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(n_rho_) + static_cast<std::size_t>(i);
    }
    int i_of(std::size_t idx) const noexcept { return static_cast<int>(idx % static_cast<std::size_t>(n_rho_)); }
    int j_of(std::size_t idx) const noexcept { return static_cast<int>(idx / static_cast<std::size_t>(n_rho_)); }

    double rho(int i) const noexcept { return rho0_ + (i + 0.5) * h_rho_; }
    double z(int j) const noexcept { return z0_ + (j + 0.5) * h_z_; }
    double rho_face(int i) const noexcept { return rho0_ + i * h_rho_; } // left face of cell i
    double z_face(int j) const noexcept { return z0_ + j * h_z_; }
    double rho_min() const noexcept { return rho0_; }
    double z_min() const noexcept { return z0_; }
    double rho_max() const noexcept { return rho0_ + n_rho_ * h_rho_; }
    double z_max() const noexcept { return z0_ + n_z_ * h_z_; }

    // rho * h_rho * h_z: volume per radian of azimuth (midpoint rule).
    double volume_per_radian(std::size_t idx) const noexcept { return rho(i_of(idx)) * h_rho_ * h_z_; }

    RegionRole role(std::size_t idx) const noexcept { return roles_[idx]; }
    int region_index(std::size_t idx) const noexcept { return region_index_[idx]; }
    const Material& material(std::size_t idx) const noexcept { return materials_[material_index_[idx]]; }
    std::size_t material_index(std::size_t idx) const noexcept { return material_index_[idx]; }
    const std::vector<Material>& materials() const noexcept { return materials_; }
    const std::vector<Region>& regions() const noexcept { return regions_; }

    double reference_radius() const noexcept { return reference_radius_; }
    double cells_per_metre() const noexcept { return resolution_; }
    std::size_t count(RegionRole role) const noexcept;
    // Electrode potential of an electrode cell.
    double electrode_potential(std::size_t idx) const noexcept;

    std::uint64_t content_hash() const noexcept { return hash_; }
    std::string hash_hex() const;

private:
    friend std::shared_ptr<const StructuredGrid> build_grid(const CrossSectionGeometry&, const MaterialLibrary&,
                                                            double);
    StructuredGrid() = default;

    int n_rho_ = 0;
    int n_z_ = 0;
    double h_rho_ = 0.0;
    double h_z_ = 0.0;
    double rho0_ = 0.0;
    double z0_ = 0.0;
    double reference_radius_ = 0.0;
    double resolution_ = 0.0;
    std::vector<RegionRole> roles_;
    std::vector<int> region_index_;
    std::vector<std::uint16_t> material_index_;
    std::vector<Material> materials_;
    std::vector<Region> regions_;
    std::uint64_t hash_ = 0;
};

using GridPtr = std::shared_ptr<const StructuredGrid>;

// Minimum number of cells required across the narrowest side of any region.
inline constexpr double kMinCellsPerFeature = 8.0;

// resolution: cells per metre (identical in rho and z).
GridPtr build_grid(const CrossSectionGeometry& geometry, const MaterialLibrary& materials, double cells_per_metre);

} // namespace eoconv

#endif // EOCONV_GRID_HPP
