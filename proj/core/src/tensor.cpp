#include "eoconv/tensor.hpp"

#include <cmath>

namespace eoconv
{

double PockelsTensor::frobenius_norm() const
{
    double s = 0.0;
    for (double v : data_)
        s += v * v;
    return std::sqrt(s);
}

bool PockelsTensor::is_zero() const
{
    for (double v : data_)
        if (v != 0.0)
            return false;
    return true;
}

PockelsTensor PockelsTensor::scaled(double alpha) const
{
    PockelsTensor out = *this;
    for (double& v : out.data_)
        v *= alpha;
    return out;
}

std::array<int, 2> voigt_pair(int row)
{
    static constexpr std::array<std::array<int, 2>, 6> kMap{{{0, 0}, {1, 1}, {2, 2}, {1, 2}, {0, 2}, {0, 1}}};
    return kMap[static_cast<std::size_t>(row)];
}

PockelsTensor expand_contracted_tensor(const ContractedPockels& r_pm_per_volt)
{
    PockelsTensor r;
    for (int row = 0; row < 6; ++row) {
        const auto [i, j] = voigt_pair(row);
        for (int k = 0; k < 3; ++k) {
            const double v = r_pm_per_volt(row, k) * 1e-12;
            r(i, j, k) = v;
            r(j, i, k) = v;
        }
    }
    return r;
}

Matrix3 rotation_about_z(double phi)
{
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    Matrix3 rot;
    rot << c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0;
    return rot;
}

PockelsTensor rotate_tensor_about_axis(const PockelsTensor& r, double phi)
{
    const Matrix3 rot = rotation_about_z(phi);
    // contract one index at a time: 3 * 81 flops instead of 729
    PockelsTensor t1, t2, out;
    for (int i = 0; i < 3; ++i)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) {
                double s = 0.0;
                for (int a = 0; a < 3; ++a)
                    s += rot(i, a) * r(a, b, c);
                t1(i, b, c) = s;
            }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int c = 0; c < 3; ++c) {
                double s = 0.0;
                for (int b = 0; b < 3; ++b)
                    s += rot(j, b) * t1(i, b, c);
                t2(i, j, c) = s;
            }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                double s = 0.0;
                for (int c = 0; c < 3; ++c)
                    s += rot(k, c) * t2(i, j, c);
                out(i, j, k) = s;
            }
    return out;
}

Matrix3 pockels_delta_impermeability(const PockelsTensor& r, const Vector3& e_field)
{
    Matrix3 d = Matrix3::Zero();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                d(i, j) += r(i, j, k) * e_field(k);
    return d;
}

Matrix3 delta_epsilon_from_delta_eta(const Matrix3& eps, const Matrix3& delta_eta)
{
    // eps_ik eps_jl deta_kl = (eps * deta * eps^T)_ij
    return eps * delta_eta * eps.transpose();
}

} // namespace eoconv
