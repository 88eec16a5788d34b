#ifndef EOCONV_TENSOR_HPP
#define EOCONV_TENSOR_HPP

#include <Eigen/Dense>

#include <array>

namespace eoconv
{

using Matrix3 = Eigen::Matrix3d;
using Vector3 = Eigen::Vector3d;

// Contracted (Voigt) Pockels matrix, rows I = 1..6 <-> (11,22,33,23,13,12),
// columns k = 1..3. Stored in pm/V as it appears in data sheets.
using ContractedPockels = Eigen::Matrix<double, 6, 3>;

// Full rank-3 electro-optic tensor r_ijk in m/V, symmetric in (i, j).
class PockelsTensor
{
public:
    PockelsTensor() { data_.fill(0.0); }

    double& operator()(int i, int j, int k) { return data_[static_cast<std::size_t>(9 * i + 3 * j + k)]; }
    double operator()(int i, int j, int k) const { return data_[static_cast<std::size_t>(9 * i + 3 * j + k)]; }

    double frobenius_norm() const;
    bool is_zero() const;
    PockelsTensor scaled(double alpha) const;

private:
    std::array<double, 27> data_;
};

// Voigt index (0-based row) -> (i, j), 0-based.
std::array<int, 2> voigt_pair(int row);

PockelsTensor expand_contracted_tensor(const ContractedPockels& r_pm_per_volt);

// Active rotation about the crystal z axis: r'_ijk = R_ia R_jb R_kc r_abc.
PockelsTensor rotate_tensor_about_axis(const PockelsTensor& r, double phi);

Matrix3 rotation_about_z(double phi);

// delta_eta_ij = r_ijk E^k (linear Pockels term only).
Matrix3 pockels_delta_impermeability(const PockelsTensor& r, const Vector3& e_field);

// delta_eps_ij = eps_ik eps_jl delta_eta_kl.
Matrix3 delta_epsilon_from_delta_eta(const Matrix3& eps, const Matrix3& delta_eta);

} // namespace eoconv

#endif // EOCONV_TENSOR_HPP
