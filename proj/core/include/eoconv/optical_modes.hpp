#ifndef EOCONV_OPTICAL_MODES_HPP
#define EOCONV_OPTICAL_MODES_HPP

#include "eoconv/grid.hpp"
#include "eoconv/tensor.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace eoconv
{

struct ModeOptions
{
    int n_modes = 1;
    double tolerance = 1e-8;       // eigen residual
    double confinement = 1e-4;     // max boundary / peak energy density (40 dB)
    int m_scan_half_width = 5;
};

// Whispering-gallery mode in the semivectorial scalar picture. `amplitude` is
// the dominant field component per cell (E_z for TE, E_rho for TM) carrying
// the azimuthal factor cos(m phi) implicitly; it is scaled so that
// U_a = int eps0 eps |E|^2 dV equals `energy` (1 J after solving).
struct ModeSolution
{
    GridPtr grid;
    Polarization polarization = Polarization::TE;
    int m = 0;
    double omega = 0.0;        // rad/s
    double eigenvalue = 0.0;   // k^2, 1/m^2
    std::vector<double> amplitude;
    std::vector<double> eps;   // relative permittivity seen by the mode
    double energy = 1.0;       // J
    double normalization = 1.0; // amplitude = normalization * (B-normalised eigenvector)
    double n_eff = 0.0;        // m c / (omega R)
    double residual = 0.0;
    double boundary_ratio = 0.0; // boundary / peak energy density
    std::optional<double> fsr; // rad/s
    std::optional<double> tau; // s

    double wavelength() const;
    // Cylindrical (rho, phi, z) components of the dominant field at a cell.
    Vector3 field(std::size_t cell) const;
    // eps * E (relative displacement, D / eps0) for the same cell.
    Vector3 displacement(std::size_t cell) const;
    ModeSolution scaled(double factor) const;
};

struct FsrResult
{
    double fsr = 0.0; // rad/s
    double tau = 0.0; // s
    double omega_m = 0.0;
    double omega_m1 = 0.0;
};

// Scalar permittivity the semivectorial operator uses: eps_zz (TE) or the
// in-plane average (TM).
std::vector<double> optical_permittivity(const StructuredGrid& grid, Polarization polarization);

// Modes with azimuthal number m nearest to the target wavelength.
std::vector<ModeSolution> solve_wgm_modes(GridPtr grid, int m, Polarization polarization, double target_wavelength,
                                          const ModeOptions& options = {});
// Same with an explicit permittivity map (perturbation studies).
std::vector<ModeSolution> solve_wgm_modes(GridPtr grid, const std::vector<double>& eps, int m,
                                          Polarization polarization, double target_wavelength,
                                          const ModeOptions& options = {});

// Lowest-frequency (fundamental) mode for a given m.
ModeSolution solve_fundamental_mode(GridPtr grid, int m, Polarization polarization, const ModeOptions& options = {});
ModeSolution solve_fundamental_mode(GridPtr grid, const std::vector<double>& eps, int m, Polarization polarization,
                                    const ModeOptions& options = {});

// int eps0 eps |E|^2 dV with 2 pi rho weighting (total energy convention).
double mode_energy(const ModeSolution& mode);

FsrResult fsr_and_tau(GridPtr grid, int m, Polarization polarization, const ModeOptions& options = {});

// Fundamental mode whose frequency is closest to c / target_wavelength,
// scanning m around round(2 pi R n / lambda). FSR and tau are filled in.
ModeSolution find_mode_near_target(GridPtr grid, Polarization polarization, double target_wavelength,
                                   double bulk_index, const ModeOptions& options = {});

struct MatchFsrOptions
{
    double radius_min = 10e-6;
    double radius_max = 20e-3;
    double relative_tolerance = 5e-3;
    int max_iterations = 40;
};

struct MatchFsrResult
{
    double radius = 0.0;
    double fsr = 0.0;
    int m = 0;
    int evaluations = 0;
    CrossSectionGeometry geometry;
};

// Adjusts the ring radius so that the optical FSR equals omega_b.
MatchFsrResult match_fsr(const CrossSectionGeometry& geometry, const MaterialLibrary& materials,
                         double cells_per_metre, Polarization polarization, double omega_b,
                         double target_wavelength, const MatchFsrOptions& options = {},
                         const ModeOptions& mode_options = {});

// Boundary-to-peak ratio of eps |E|^2 over the outermost cell layer (the
// rho = 0 axis is not a boundary).
double boundary_energy_ratio(const StructuredGrid& grid, const std::vector<double>& eps,
                             const std::vector<double>& amplitude);

// Key for caching optical solves: depends only on the optical content of the grid.
std::uint64_t optical_content_hash(const StructuredGrid& grid, Polarization polarization);

} // namespace eoconv

#endif // EOCONV_OPTICAL_MODES_HPP
