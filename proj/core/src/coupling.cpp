#include "eoconv/coupling.hpp"

#include "eoconv/constants.hpp"
#include "eoconv/errors.hpp"

#include <cmath>
#include <set>

namespace eoconv
{
namespace
{

int dominant_index(Polarization p) { return p == Polarization::TE ? 2 : 0; }

void check_field(const ModeSolution& mode, const TensorField& t, const char* what)
{
    if (!mode.grid)
        throw PreconditionError(std::string(what) + ": mode has no grid");
    if (t.size() != mode.grid->size())
        throw PreconditionError(std::string(what) + ": tensor field does not match the mode grid");
}

double positive(double v, const char* name)
{
    if (!(v > 0.0) || !std::isfinite(v))
        throw PreconditionError(std::string(name) + " must be positive and finite");
    return v;
}

bool same_discretisation(const StructuredGrid& a, const StructuredGrid& b)
{
    return a.n_rho() == b.n_rho() && a.n_z() == b.n_z() && a.h_rho() == b.h_rho() && a.h_z() == b.h_z() &&
           a.rho_min() == b.rho_min() && a.z_min() == b.z_min();
}

} // namespace

std::string_view coupling_method_name(CouplingMethod m) noexcept
{
    switch (m) {
    case CouplingMethod::overlap_integral: return "overlap_integral";
    case CouplingMethod::bethe_schwinger: return "bethe_schwinger";
    case CouplingMethod::closed_form: return "closed_form";
    case CouplingMethod::generic_form: return "generic_form";
    }
    return "?";
}

double CouplingResult::g0_hz() const noexcept { return to_hz(g0); }

double delta_energy_from_eps(const ModeSolution& mode, const TensorField& delta_eps)
{
    check_field(mode, delta_eps, "delta_energy");
    const StructuredGrid& g = *mode.grid;
    double s = 0.0;
    for (std::size_t p = 0; p < g.size(); ++p) {
        if (mode.amplitude[p] == 0.0)
            continue;
        const Vector3 e = mode.field(p);
        s += e.dot(delta_eps[p] * e) * g.volume_per_radian(p);
    }
    return 0.5 * kEps0 * kTwoPi * s;
}

double delta_energy(const ModeSolution& mode, const TensorField& delta_eta)
{
    check_field(mode, delta_eta, "delta_energy");
    const StructuredGrid& g = *mode.grid;
    double s = 0.0;
    for (std::size_t p = 0; p < g.size(); ++p) {
        if (mode.amplitude[p] == 0.0)
            continue;
        const Vector3 d = g.material(p).eps_optical() * mode.field(p);
        s += d.dot(delta_eta[p] * d) * g.volume_per_radian(p);
    }
    return 0.5 * kEps0 * kTwoPi * s;
}

double bethe_schwinger_shift(const ModeSolution& mode, const TensorField& delta_eps)
{
    const double u = mode_energy(mode);
    if (!(u > 0.0))
        throw PreconditionError("bethe_schwinger_shift: mode carries no energy");
    return -mode.omega * delta_energy_from_eps(mode, delta_eps) / u;
}

double relative_perturbation(const ModeSolution& mode, const TensorField& delta_eps)
{
    check_field(mode, delta_eps, "relative_perturbation");
    double worst = 0.0;
    for (std::size_t p = 0; p < delta_eps.size(); ++p)
        worst = std::max(worst, delta_eps[p].norm() / mode.grid->material(p).eps_optical().norm());
    return worst;
}

TensorField delta_eps_from_delta_eta(const StructuredGrid& g, const TensorField& delta_eta)
{
    if (delta_eta.size() != g.size())
        throw PreconditionError("delta_eps_from_delta_eta: tensor field does not match the grid");
    TensorField out(g.size());
    for (std::size_t p = 0; p < g.size(); ++p)
        out[p] = delta_epsilon_from_delta_eta(g.material(p).eps_optical(), delta_eta[p]);
    return out;
}

TensorField pockels_delta_eta_field(const PotentialField& potential, double phi)
{
    const StructuredGrid& g = *potential.grid;
    const Matrix3 rot = rotation_about_z(phi);
    TensorField out(g.size(), Matrix3::Zero());
    for (std::size_t p = 0; p < g.size(); ++p) {
        const Material& mat = g.material(p);
        if (!mat.is_electro_optic() || g.role(p) == RegionRole::electrode)
            continue;
        const Vector3& e = potential.field[p];
        const Vector3 e_crystal = rot * e;
        const Matrix3 deta = pockels_delta_impermeability(mat.pockels(), e_crystal);
        out[p] = rot.transpose() * deta * rot;
    }
    return out;
}

CouplingResult g0_overlap(const ModeSolution& mode, const PotentialField& potential, double capacitance,
                          double omega_b, double f_phi, int n_phi)
{
    if (!mode.grid || !potential.grid)
        throw PreconditionError("g0_overlap: missing grid");
    if (!same_discretisation(*mode.grid, *potential.grid))
        throw PreconditionError("g0_overlap: optical mode and microwave field live on different grids");
    positive(capacitance, "capacitance");
    positive(omega_b, "omega_b");
    if (!(f_phi > 0.0 && f_phi <= 1.0))
        throw PreconditionError("g0_overlap: f_phi must lie in (0, 1]");
    if (n_phi < 1)
        throw PreconditionError("g0_overlap: n_phi must be >= 1");
    const double u = mode_energy(mode);
    if (!(u > 0.0))
        throw PreconditionError("g0_overlap: mode carries no energy");

    const StructuredGrid& g = *potential.grid;
    const int dom = dominant_index(mode.polarization);

    std::vector<Matrix3> rot(static_cast<std::size_t>(n_phi));
    for (int k = 0; k < n_phi; ++k)
        rot[static_cast<std::size_t>(k)] = rotation_about_z(kTwoPi * k / n_phi);

    // int E_a . delta_eps . E_a dV for the applied field
    double integral = 0.0;
    std::set<std::size_t> eo_materials;
    for (std::size_t p = 0; p < g.size(); ++p) {
        const Material& mat = g.material(p);
        if (!mat.is_electro_optic() || g.role(p) == RegionRole::electrode || mode.amplitude[p] == 0.0)
            continue;
        eo_materials.insert(g.material_index(p));
        const Vector3& eb = potential.field[p];
        const Vector3 ea_local = Vector3::Unit(dom) * mode.amplitude[p];
        double sum_phi = 0.0;
        for (const Matrix3& r : rot) {
            const Vector3 eb_c = r * eb;
            const Vector3 ea_c = r * ea_local;
            const Matrix3 deps =
                delta_epsilon_from_delta_eta(mat.eps_optical(), pockels_delta_impermeability(mat.pockels(), eb_c));
            sum_phi += ea_c.dot(deps * ea_c);
        }
        integral += sum_phi / n_phi * g.volume_per_radian(p);
    }
    integral *= kTwoPi * f_phi;

    CouplingResult res;
    res.method = CouplingMethod::overlap_integral;
    res.inputs = {"", "", capacitance, omega_b, f_phi, n_phi};
    res.v_zpf = v_zpf(capacitance, omega_b);
    if (potential.applied_voltage != 0.0) {
        const double delta_u = 0.5 * kEps0 * integral;
        res.delta_omega_per_volt = -mode.omega * (delta_u / u) / potential.applied_voltage;
    }
    res.g0 = std::abs(res.delta_omega_per_volt) * res.v_zpf;
    res.sign = res.delta_omega_per_volt > 0.0 ? 1.0 : (res.delta_omega_per_volt < 0.0 ? -1.0 : 0.0);
    for (std::size_t idx : eo_materials)
        for (auto& t : dropped_pockels_terms(g.materials()[idx], mode.polarization))
            res.dropped_terms.push_back(t);
    return res;
}

double g0_closed_form(double omega_a, double n, double r, double omega_b, double eps_mw, double mode_volume)
{
    positive(omega_a, "omega_a");
    positive(n, "refractive index");
    positive(omega_b, "omega_b");
    positive(eps_mw, "microwave permittivity");
    positive(mode_volume, "mode volume");
    if (!(r >= 0.0))
        throw PreconditionError("electro-optic coefficient must be non-negative");
    return omega_a * n * n * r * std::sqrt(kHbar * omega_b / (kEps0 * eps_mw * mode_volume));
}

double implied_mode_volume(double g0, double omega_a, double n, double r, double omega_b, double eps_mw)
{
    positive(g0, "g0");
    positive(omega_a, "omega_a");
    positive(n, "refractive index");
    positive(r, "electro-optic coefficient");
    positive(omega_b, "omega_b");
    positive(eps_mw, "microwave permittivity");
    const double k = omega_a * n * n * r / g0;
    return kHbar * omega_b * k * k / (kEps0 * eps_mw);
}

double g0_generic_form(double omega_a, double n, double r, double path_length, double gap, double tau,
                       double capacitance, double omega_b)
{
    positive(omega_a, "omega_a");
    positive(n, "refractive index");
    positive(r, "electro-optic coefficient");
    positive(path_length, "optical path length");
    positive(gap, "electrode gap");
    positive(tau, "round-trip time");
    positive(capacitance, "capacitance");
    positive(omega_b, "omega_b");
    return omega_a * n * n * n * r * path_length / (kSpeedOfLight * tau * gap) * v_zpf(capacitance, omega_b);
}

double direct_eigen_shift_oracle(GridPtr grid, const TensorField& delta_eps, int m, Polarization pol,
                                 const ModeOptions& options)
{
    if (!grid)
        throw PreconditionError("direct_eigen_shift_oracle: null grid");
    if (delta_eps.size() != grid->size())
        throw PreconditionError("direct_eigen_shift_oracle: tensor field does not match the grid");
    const auto eps = optical_permittivity(*grid, pol);
    auto perturbed = eps;
    const int d = dominant_index(pol);
    for (std::size_t p = 0; p < eps.size(); ++p)
        perturbed[p] += delta_eps[p](d, d);
    const ModeSolution a = solve_fundamental_mode(grid, eps, m, pol, options);
    const ModeSolution b = solve_fundamental_mode(grid, perturbed, m, pol, options);
    return b.omega - a.omega;
}

std::vector<std::string> dropped_pockels_terms(const Material& material, Polarization pol)
{
    static constexpr const char* kPairs[6] = {"xx", "yy", "zz", "yz", "xz", "xy"};
    // rows the dominant component reaches through E_a . delta_eps . E_a
    const bool kept_te[6] = {false, false, true, false, false, false};
    const bool kept_tm[6] = {true, true, false, false, false, true};
    const bool* kept = pol == Polarization::TE ? kept_te : kept_tm;
    std::vector<std::string> out;
    const auto& r = material.r_contracted();
    for (int row = 0; row < 6; ++row) {
        if (kept[row] || r.row(row).isZero(0.0))
            continue;
        std::string s = material.name() + ": r" + std::to_string(row + 1) + "k (" + kPairs[row] + ")";
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace eoconv
