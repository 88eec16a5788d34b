#ifndef EOCONV_FIELD_IO_HPP
#define EOCONV_FIELD_IO_HPP

#include "eoconv/electrostatics.hpp"
#include "eoconv/optical_modes.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace eoconv
{

// Plain-text grid dumps. Layout (stable):
//   # eoconv <kind> grid v1
//   # key value           (metadata lines)
//   # columns: name[unit] ...
//   one whitespace-separated row per cell, rho fastest, %.10e
// Potential columns: rho[m] z[m] V[V] E_rho[V/m] E_z[V/m]
// Mode columns:      rho[m] z[m] E[V/m] energy_density[J/m^3]
void write_potential_grid(std::ostream& out, const PotentialField& field);
void write_mode_grid(std::ostream& out, const ModeSolution& mode);
void write_potential_grid(const std::string& path, const PotentialField& field);
void write_mode_grid(const std::string& path, const ModeSolution& mode);

// One-line mode summary: omega_a/2pi, m, n_eff, FSR/2pi, tau.
std::string mode_summary(const ModeSolution& mode);

struct GridDump
{
    std::string kind;
    std::map<std::string, std::string> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

GridDump read_grid_dump(std::istream& in);
GridDump read_grid_dump(const std::string& path);

} // namespace eoconv

#endif // EOCONV_FIELD_IO_HPP
