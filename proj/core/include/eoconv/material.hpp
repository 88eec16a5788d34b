#ifndef EOCONV_MATERIAL_HPP
#define EOCONV_MATERIAL_HPP

#include "eoconv/tensor.hpp"

#include <map>
#include <string>
#include <vector>

namespace eoconv
{

// Anisotropic dielectric in the crystal frame. The crystal z axis is the ring
// symmetry axis (Z-cut). Immutable once constructed; the constructor validates.
class Material
{
public:
    Material(std::string name, const Matrix3& eps_optical, const Matrix3& eps_microwave,
             const ContractedPockels& r_contracted_pm_per_volt, double refractive_index);

    static Material isotropic(std::string name, double eps_optical, double eps_microwave);

    const std::string& name() const noexcept { return name_; }
    const Matrix3& eps_optical() const noexcept { return eps_optical_; }
    const Matrix3& eps_microwave() const noexcept { return eps_microwave_; }
    const ContractedPockels& r_contracted() const noexcept { return r_contracted_; }
    const PockelsTensor& pockels() const noexcept { return pockels_; }
    double refractive_index() const noexcept { return refractive_index_; }
    bool is_electro_optic() const noexcept { return !pockels_.is_zero(); }

    // Axisymmetric reductions used by the (rho, z) solvers.
    double eps_optical_radial() const noexcept;
    double eps_optical_axial() const noexcept { return eps_optical_(2, 2); }
    double eps_microwave_radial() const noexcept;
    double eps_microwave_axial() const noexcept { return eps_microwave_(2, 2); }

    Material with_pockels(const ContractedPockels& r_contracted_pm_per_volt) const;

private:
    std::string name_;
    Matrix3 eps_optical_;
    Matrix3 eps_microwave_;
    ContractedPockels r_contracted_;
    PockelsTensor pockels_;
    double refractive_index_;
};

Matrix3 pockels_delta_impermeability(const Material& material, const Vector3& e_field);

// Z-cut congruent lithium niobate at 1.5 um / 6 GHz. r51 = 30 pm/V; the other
// tensor entries and the permittivities are literature values (external data):
// r13 = 9.6, r22 = 6.8, r33 = 30.9 pm/V; n_o = 2.211, n_e = 2.138;
// eps_mw (clamped) = diag(44, 44, 28).
Material lithium_niobate();
Material silica();
Material vacuum_material();

class MaterialLibrary
{
public:
    MaterialLibrary() = default;

    // Library with lithium niobate, silica and vacuum.
    static MaterialLibrary defaults();

    void add(Material material);
    bool contains(const std::string& name) const { return materials_.count(name) != 0; }
    const Material& get(const std::string& name) const;
    std::vector<std::string> names() const;
    const std::map<std::string, Material>& all() const noexcept { return materials_; }

private:
    std::map<std::string, Material> materials_;
};

} // namespace eoconv

#endif // EOCONV_MATERIAL_HPP
