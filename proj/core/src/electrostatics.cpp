#include "eoconv/electrostatics.hpp"

#include "eoconv/constants.hpp"
#include "eoconv/errors.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <limits>

namespace eoconv
{
namespace
{

using SpMat = Eigen::SparseMatrix<double>;

double harmonic(double a, double b) { return 2.0 * a * b / (a + b); }

// Visits every face that touches at least one non-electrode cell.
//   fn(p, q, transmissibility, q_is_electrode)
// Transmissibilities exclude eps0; they already include the rho weight.
template <class Fn>
void for_each_face(const StructuredGrid& g, Fn&& fn)
{
    const double hr = g.h_rho();
    const double hz = g.h_z();
    for (int j = 0; j < g.n_z(); ++j) {
        for (int i = 0; i < g.n_rho(); ++i) {
            const std::size_t p = g.index(i, j);
            const bool p_el = g.role(p) == RegionRole::electrode;
            if (i + 1 < g.n_rho()) {
                const std::size_t q = g.index(i + 1, j);
                const bool q_el = g.role(q) == RegionRole::electrode;
                const double rf = g.rho_face(i + 1);
                if (!p_el && !q_el)
                    fn(p, q, rf * hz / hr *
                                 harmonic(g.material(p).eps_microwave_radial(), g.material(q).eps_microwave_radial()),
                       false);
                else if (!p_el && q_el)
                    fn(p, q, rf * hz / (0.5 * hr) * g.material(p).eps_microwave_radial(), true);
                else if (p_el && !q_el)
                    fn(q, p, rf * hz / (0.5 * hr) * g.material(q).eps_microwave_radial(), true);
            }
            if (j + 1 < g.n_z()) {
                const std::size_t q = g.index(i, j + 1);
                const bool q_el = g.role(q) == RegionRole::electrode;
                const double w = g.rho(i) * hr;
                if (!p_el && !q_el)
                    fn(p, q, w / hz * harmonic(g.material(p).eps_microwave_axial(), g.material(q).eps_microwave_axial()),
                       false);
                else if (!p_el && q_el)
                    fn(p, q, w / (0.5 * hz) * g.material(p).eps_microwave_axial(), true);
                else if (p_el && !q_el)
                    fn(q, p, w / (0.5 * hz) * g.material(q).eps_microwave_axial(), true);
            }
        }
    }
}

void accumulate_energy_and_charge(PotentialField& pf)
{
    const StructuredGrid& g = *pf.grid;
    double vmax = -std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < g.size(); ++p)
        if (g.role(p) == RegionRole::electrode)
            vmax = std::max(vmax, pf.potential[p]);

    double twice_energy = 0.0;
    double charge = 0.0;
    for_each_face(g, [&](std::size_t p, std::size_t q, double t, bool q_el) {
        const double dv = pf.potential[q] - pf.potential[p];
        twice_energy += t * dv * dv;
        if (q_el && pf.potential[q] == vmax)
            charge += t * dv;
    });
    pf.energy_per_radian = 0.5 * kEps0 * twice_energy;
    pf.charge_per_radian = kEps0 * charge;
}

} // namespace

PotentialField solve_potential(GridPtr grid, const ElectrostaticOptions& options)
{
    return solve_potential(std::move(grid), {}, options);
}

PotentialField solve_potential(GridPtr grid, const std::map<std::string, double>& electrode_potentials,
                               const ElectrostaticOptions& options)
{
    if (!grid)
        throw PreconditionError("solve_potential: null grid");
    const StructuredGrid& g = *grid;
    const std::size_t n = g.size();

    for (const auto& [name, v] : electrode_potentials) {
        const bool known = std::any_of(g.regions().begin(), g.regions().end(), [&](const Region& r) {
            return r.role == RegionRole::electrode && r.name == name;
        });
        if (!known)
            throw PreconditionError("solve_potential: no electrode named '" + name + "'");
    }

    PotentialField pf;
    pf.grid = grid;
    pf.potential.assign(n, 0.0);

    std::vector<long> unknown(n, -1);
    long n_unknown = 0;
    bool any_electrode = false;
    double vmin = std::numeric_limits<double>::infinity();
    double vmax = -std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < n; ++p) {
        if (g.role(p) == RegionRole::electrode) {
            any_electrode = true;
            const Region& reg = g.regions()[static_cast<std::size_t>(g.region_index(p))];
            const auto it = electrode_potentials.find(reg.name);
            const double v = it != electrode_potentials.end() ? it->second : reg.potential;
            pf.potential[p] = v;
            vmin = std::min(vmin, v);
            vmax = std::max(vmax, v);
        } else {
            unknown[p] = n_unknown++;
        }
    }
    if (!any_electrode)
        throw SolverError("singular electrostatic system: the grid contains no electrode cells", 0.0);
    pf.applied_voltage = vmax - vmin;

    if (n_unknown > 0) {
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(static_cast<std::size_t>(n_unknown) * 5);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_unknown);
        for_each_face(g, [&](std::size_t p, std::size_t q, double t, bool q_el) {
            const long a = unknown[p];
            trip.emplace_back(a, a, t);
            if (q_el) {
                rhs(a) += t * pf.potential[q];
            } else {
                const long b = unknown[q];
                trip.emplace_back(b, b, t);
                trip.emplace_back(a, b, -t);
                trip.emplace_back(b, a, -t);
            }
        });
        SpMat a(n_unknown, n_unknown);
        a.setFromTriplets(trip.begin(), trip.end());

        // cells cut off from every electrode make the matrix singular
        for (long k = 0; k < n_unknown; ++k)
            if (a.coeff(k, k) <= 0.0)
                throw SolverError("singular electrostatic system: isolated cell without any flux path", 0.0);

        Eigen::VectorXd x = Eigen::VectorXd::Zero(n_unknown);
        const double bnorm = rhs.norm();
        if (bnorm > 0.0) {
            Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper, Eigen::IncompleteCholesky<double>> cg;
            cg.setTolerance(0.25 * options.tolerance);
            cg.setMaxIterations(options.max_iterations > 0 ? options.max_iterations
                                                           : static_cast<int>(4 * n_unknown + 100));
            cg.compute(a);
            if (cg.info() != Eigen::Success)
                throw SolverError("electrostatic preconditioner factorization failed", 1.0);
            x = cg.solve(rhs);
            pf.iterations = static_cast<int>(cg.iterations());
            pf.residual = (rhs - a * x).norm() / bnorm;
            if (!(pf.residual <= options.tolerance))
                throw SolverError("electrostatic solve did not converge: relative residual " +
                                      std::to_string(pf.residual) + " after " + std::to_string(pf.iterations) +
                                      " iterations",
                                  pf.residual);
        }
        for (std::size_t p = 0; p < n; ++p)
            if (unknown[p] >= 0)
                pf.potential[p] = x(unknown[p]);
    }

    pf.field = electric_field(pf);
    accumulate_energy_and_charge(pf);
    return pf;
}

std::vector<Vector3> electric_field(const PotentialField& pf)
{
    const StructuredGrid& g = *pf.grid;
    std::vector<Vector3> e(g.size(), Vector3::Zero());
    const double hr = g.h_rho();
    const double hz = g.h_z();

    // Field on p's side of the face shared with q (unit step toward q has sign s).
    auto face_field = [&](std::size_t p, std::size_t q, double h, double eps_p, double eps_q, double s) {
        const double dv = pf.potential[q] - pf.potential[p];
        if (g.role(q) == RegionRole::electrode)
            return -s * dv / (0.5 * h);
        return -s * dv / h * harmonic(eps_p, eps_q) / eps_p;
    };

    for (int j = 0; j < g.n_z(); ++j) {
        for (int i = 0; i < g.n_rho(); ++i) {
            const std::size_t p = g.index(i, j);
            if (g.role(p) == RegionRole::electrode)
                continue;
            const Material& mp = g.material(p);

            double sum = 0.0;
            int cnt = 0;
            if (i > 0) {
                const std::size_t q = g.index(i - 1, j);
                sum += face_field(p, q, hr, mp.eps_microwave_radial(), g.material(q).eps_microwave_radial(), -1.0);
                ++cnt;
            }
            if (i + 1 < g.n_rho()) {
                const std::size_t q = g.index(i + 1, j);
                sum += face_field(p, q, hr, mp.eps_microwave_radial(), g.material(q).eps_microwave_radial(), 1.0);
                ++cnt;
            }
            const double e_rho = cnt > 0 ? sum / cnt : 0.0;

            sum = 0.0;
            cnt = 0;
            if (j > 0) {
                const std::size_t q = g.index(i, j - 1);
                sum += face_field(p, q, hz, mp.eps_microwave_axial(), g.material(q).eps_microwave_axial(), -1.0);
                ++cnt;
            }
            if (j + 1 < g.n_z()) {
                const std::size_t q = g.index(i, j + 1);
                sum += face_field(p, q, hz, mp.eps_microwave_axial(), g.material(q).eps_microwave_axial(), 1.0);
                ++cnt;
            }
            const double e_z = cnt > 0 ? sum / cnt : 0.0;
            e[p] = Vector3(e_rho, 0.0, e_z);
        }
    }
    return e;
}

double capacitance(const PotentialField& pf, double effective_length, double energy_fraction)
{
    if (pf.applied_voltage == 0.0)
        throw PreconditionError("capacitance: applied voltage is zero");
    if (!(effective_length > 0.0) || !(energy_fraction > 0.0))
        throw PreconditionError("capacitance: effective length and energy fraction must be positive");
    const double u = energy_fraction * effective_length * pf.energy_per_unit_length();
    return 2.0 * u / (pf.applied_voltage * pf.applied_voltage);
}

double capacitance_from_charge(const PotentialField& pf, double effective_length, double energy_fraction)
{
    if (pf.applied_voltage == 0.0)
        throw PreconditionError("capacitance: applied voltage is zero");
    if (!(effective_length > 0.0) || !(energy_fraction > 0.0))
        throw PreconditionError("capacitance: effective length and energy fraction must be positive");
    const double q = energy_fraction * effective_length * pf.charge_per_radian / pf.grid->reference_radius();
    return q / pf.applied_voltage;
}

double v_zpf(double capacitance_farads, double omega_b)
{
    if (!(capacitance_farads > 0.0) || !(omega_b > 0.0))
        throw PreconditionError("v_zpf: capacitance and microwave frequency must be positive");
    return std::sqrt(kHbar * omega_b / (2.0 * capacitance_farads));
}

} // namespace eoconv
