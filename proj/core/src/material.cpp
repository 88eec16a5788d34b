#include "eoconv/material.hpp"

#include "eoconv/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace eoconv
{
namespace
{

void validate_permittivity(const std::string& material, const char* which, const Matrix3& eps)
{
    if (!eps.allFinite())
        throw ConfigError("material '" + material + "': " + which + " has non-finite entries");
    if ((eps - eps.transpose()).cwiseAbs().maxCoeff() > 1e-12 * eps.cwiseAbs().maxCoeff())
        throw ConfigError("material '" + material + "': " + which + " is not symmetric");
    for (int i = 0; i < 3; ++i)
        if (eps(i, i) < 1.0)
            throw ConfigError("material '" + material + "': " + which + " has a diagonal entry below 1");
    Eigen::SelfAdjointEigenSolver<Matrix3> es(eps);
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw ConfigError("material '" + material + "': " + which + " is not positive definite");
}

} // namespace

Material::Material(std::string name, const Matrix3& eps_optical, const Matrix3& eps_microwave,
                   const ContractedPockels& r_contracted_pm_per_volt, double refractive_index)
    : name_(std::move(name)),
      eps_optical_(eps_optical),
      eps_microwave_(eps_microwave),
      r_contracted_(r_contracted_pm_per_volt),
      pockels_(expand_contracted_tensor(r_contracted_pm_per_volt)),
      refractive_index_(refractive_index)
{
    if (name_.empty())
        throw ConfigError("material name must not be empty");
    validate_permittivity(name_, "eps_optical", eps_optical_);
    validate_permittivity(name_, "eps_microwave", eps_microwave_);
    if (!r_contracted_.allFinite())
        throw ConfigError("material '" + name_ + "': Pockels tensor has non-finite entries");

    Eigen::SelfAdjointEigenSolver<Matrix3> es(eps_optical_);
    const double n2 = refractive_index_ * refractive_index_;
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    const double slack = 1e-9 * hi;
    if (!(refractive_index_ > 0.0) || n2 < lo - slack || n2 > hi + slack)
        throw ConfigError("material '" + name_ + "': refractive_index^2 = " + std::to_string(n2) +
                          " must lie within the eps_optical eigenvalue range [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "]");
}

Material Material::isotropic(std::string name, double eps_optical, double eps_microwave)
{
    return Material(std::move(name), eps_optical * Matrix3::Identity(), eps_microwave * Matrix3::Identity(),
                    ContractedPockels::Zero(), std::sqrt(eps_optical));
}

double Material::eps_optical_radial() const noexcept
{
    // phi-average of e_rho . eps . e_rho
    return 0.5 * (eps_optical_(0, 0) + eps_optical_(1, 1));
}

double Material::eps_microwave_radial() const noexcept
{
    return 0.5 * (eps_microwave_(0, 0) + eps_microwave_(1, 1));
}

Material Material::with_pockels(const ContractedPockels& r_contracted_pm_per_volt) const
{
    return Material(name_, eps_optical_, eps_microwave_, r_contracted_pm_per_volt, refractive_index_);
}

Matrix3 pockels_delta_impermeability(const Material& material, const Vector3& e_field)
{
    return pockels_delta_impermeability(material.pockels(), e_field);
}

Material lithium_niobate()
{
    constexpr double n_o = 2.211;
    constexpr double n_e = 2.138;
    constexpr double r13 = 9.6;
    constexpr double r22 = 6.8;
    constexpr double r33 = 30.9;
    constexpr double r51 = 30.0;

    Matrix3 eps_opt = Matrix3::Zero();
    eps_opt.diagonal() << n_o * n_o, n_o * n_o, n_e * n_e;
    Matrix3 eps_mw = Matrix3::Zero();
    eps_mw.diagonal() << 44.0, 44.0, 28.0;

    // 3m point group, mirror plane normal to x
    ContractedPockels r = ContractedPockels::Zero();
    r(0, 1) = -r22;
    r(0, 2) = r13;
    r(1, 1) = r22;
    r(1, 2) = r13;
    r(2, 2) = r33;
    r(3, 1) = r51; // r42 = r51
    r(4, 0) = r51;
    r(5, 0) = -r22; // r61 = -r22
    return Material("LiNbO3", eps_opt, eps_mw, r, 2.2);
}

Material silica()
{
    return Material::isotropic("SiO2", 1.444 * 1.444, 3.9);
}

Material vacuum_material()
{
    return Material::isotropic("vacuum", 1.0, 1.0);
}

MaterialLibrary MaterialLibrary::defaults()
{
    MaterialLibrary lib;
    lib.add(lithium_niobate());
    lib.add(silica());
    lib.add(vacuum_material());
    return lib;
}

void MaterialLibrary::add(Material material)
{
    const std::string key = material.name();
    materials_.insert_or_assign(key, std::move(material));
}

const Material& MaterialLibrary::get(const std::string& name) const
{
    const auto it = materials_.find(name);
    if (it == materials_.end())
        throw ConfigError("unknown material '" + name + "'");
    return it->second;
}

std::vector<std::string> MaterialLibrary::names() const
{
    std::vector<std::string> out;
    for (const auto& [k, v] : materials_)
        out.push_back(k);
    return out;
}

} // namespace eoconv
