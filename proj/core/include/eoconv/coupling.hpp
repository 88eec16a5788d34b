#ifndef EOCONV_COUPLING_HPP
#define EOCONV_COUPLING_HPP

#include "eoconv/electrostatics.hpp"
#include "eoconv/optical_modes.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace eoconv
{

enum class CouplingMethod
{
    overlap_integral,
    bethe_schwinger,
    closed_form,
    generic_form,
};

std::string_view coupling_method_name(CouplingMethod m) noexcept;

struct CouplingInputs
{
    std::string mode_id;
    std::string field_id;
    double capacitance = 0.0; // F
    double omega_b = 0.0;     // rad/s
    double f_phi = 1.0;
    int n_phi = 0;
};

struct CouplingResult
{
    double g0 = 0.0;                  // rad/s, magnitude
    double sign = 0.0;                // sign of the optical shift for positive drive
    double delta_omega_per_volt = 0.0; // rad/s/V, signed
    double v_zpf = 0.0;               // V
    CouplingMethod method = CouplingMethod::overlap_integral;
    CouplingInputs inputs;
    // Pockels rows the semivectorial mode cannot probe (absent field components).
    std::vector<std::string> dropped_terms;

    double g0_hz() const noexcept;
};

// Per-cell permittivity perturbations, expressed in the local (rho, phi, z)
// frame and independent of phi.
using TensorField = std::vector<Matrix3>;

// First-order shift for a perturbation delta_eps:
//   delta_omega = -omega * delta_U / U_a,  delta_U = 1/2 eps0 int E . delta_eps . E dV.
// Raising eps lowers omega. Throws for a zero-energy mode.
double bethe_schwinger_shift(const ModeSolution& mode, const TensorField& delta_eps);

// Largest |delta_eps| / |eps| over the cells (perturbation validity, warn above 1e-2).
double relative_perturbation(const ModeSolution& mode, const TensorField& delta_eps);

// delta_U = 1/2 eps0 int delta_eta_kl D^k D^l dV with D = eps_opt E (relative
// displacement), and the equivalent delta_eps form.
double delta_energy(const ModeSolution& mode, const TensorField& delta_eta);
double delta_energy_from_eps(const ModeSolution& mode, const TensorField& delta_eps);

// delta_eps = eps_opt delta_eta eps_opt cell by cell.
TensorField delta_eps_from_delta_eta(const StructuredGrid& grid, const TensorField& delta_eta);

// Pockels delta_eta of every electro-optic cell at azimuth phi, rotated into
// the local frame (zero elsewhere).
TensorField pockels_delta_eta_field(const PotentialField& potential, double phi);

// Vacuum coupling from the anisotropic overlap of mode, microwave field and
// Pockels tensor, integrated numerically over phi (n_phi samples, trapezoid)
// and scaled by the azimuthal coverage.
CouplingResult g0_overlap(const ModeSolution& mode, const PotentialField& potential, double capacitance,
                          double omega_b, double f_phi, int n_phi = 64);

// omega_a n^2 r sqrt(hbar omega_b / (eps0 eps V_b)).
double g0_closed_form(double omega_a, double n, double r, double omega_b, double eps_mw, double mode_volume);
// Mode volume that makes the closed form return g0.
double implied_mode_volume(double g0, double omega_a, double n, double r, double omega_b, double eps_mw);

// omega_a n^3 r l / (c tau D) * sqrt(hbar omega_b / 2C).
double g0_generic_form(double omega_a, double n, double r, double path_length, double gap, double tau,
                       double capacitance, double omega_b);

// Re-solves the fundamental mode with the dominant-component projection of
// delta_eps added and returns omega(perturbed) - omega(unperturbed).
double direct_eigen_shift_oracle(GridPtr grid, const TensorField& delta_eps, int m, Polarization polarization,
                                 const ModeOptions& options = {});

std::vector<std::string> dropped_pockels_terms(const Material& material, Polarization polarization);

} // namespace eoconv

#endif // EOCONV_COUPLING_HPP
