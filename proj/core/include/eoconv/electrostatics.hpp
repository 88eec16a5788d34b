#ifndef EOCONV_ELECTROSTATICS_HPP
#define EOCONV_ELECTROSTATICS_HPP

#include "eoconv/grid.hpp"
#include "eoconv/tensor.hpp"

#include <map>
#include <string>
#include <vector>

namespace eoconv
{

struct ElectrostaticOptions
{
    double tolerance = 1e-10; // relative residual of the linear system
    int max_iterations = 0;   // 0: 4 * number of unknowns
};

// Quasi-static microwave potential on the shared grid. Electrode cells carry
// their Dirichlet value; field vectors are cylindrical (E_rho, E_phi = 0, E_z).
struct PotentialField
{
    GridPtr grid;
    std::vector<double> potential;
    std::vector<Vector3> field;
    double applied_voltage = 0.0;     // max - min electrode potential
    double energy_per_radian = 0.0;   // 1/2 int eps0 eps |grad V|^2 rho drho dz
    double charge_per_radian = 0.0;   // on the electrodes held at the highest potential
    double residual = 0.0;
    int iterations = 0;

    // Cross-section energy per unit length of the ring circumference.
    double energy_per_unit_length() const { return energy_per_radian / grid->reference_radius(); }
};

// Solves div(eps_mw grad V) = 0 in axisymmetric coordinates: five-point finite
// volumes with harmonic face permittivities, Dirichlet electrodes and
// zero-flux outer walls. Potentials default to the grid's electrode values.
PotentialField solve_potential(GridPtr grid, const ElectrostaticOptions& options = {});
PotentialField solve_potential(GridPtr grid, const std::map<std::string, double>& electrode_potentials,
                               const ElectrostaticOptions& options = {});

// E = -grad V at cell centres: average of the two flux-consistent face
// gradients (plain central differences inside a homogeneous region),
// one-sided at the domain edges, zero inside electrodes.
std::vector<Vector3> electric_field(const PotentialField& potential);

// C = 2 U / V_app^2 with U = energy_fraction * L_eff * (energy per unit length).
double capacitance(const PotentialField& potential, double effective_length, double energy_fraction = 0.5);

// Same quantity from the electrode charge, Q / V_app.
double capacitance_from_charge(const PotentialField& potential, double effective_length,
                               double energy_fraction = 0.5);

// sqrt(hbar omega_b / (2 C)).
double v_zpf(double capacitance_farads, double omega_b);

} // namespace eoconv

#endif // EOCONV_ELECTROSTATICS_HPP
