#include "eoconv/field_io.hpp"

#include "eoconv/constants.hpp"
#include "eoconv/errors.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace eoconv
{
namespace
{

void header(std::ostream& out, const char* kind, const StructuredGrid& g)
{
    char buf[256];
    out << "# eoconv " << kind << " grid v1\n";
    std::snprintf(buf, sizeof buf, "# n_rho %d\n# n_z %d\n# h_rho %.17g\n# h_z %.17g\n# rho_min %.17g\n# z_min %.17g\n",
                  g.n_rho(), g.n_z(), g.h_rho(), g.h_z(), g.rho_min(), g.z_min());
    out << buf;
    out << "# grid_hash " << g.hash_hex() << "\n";
}

template <class Row>
void rows(std::ostream& out, const StructuredGrid& g, Row&& row)
{
    char buf[160];
    for (std::size_t p = 0; p < g.size(); ++p) {
        const auto v = row(p);
        std::snprintf(buf, sizeof buf, "%.10e %.10e", g.rho(g.i_of(p)), g.z(g.j_of(p)));
        out << buf;
        for (double x : v) {
            std::snprintf(buf, sizeof buf, " %.10e", x);
            out << buf;
        }
        out << '\n';
    }
}

std::ofstream open_out(const std::string& path)
{
    std::ofstream f(path);
    if (!f)
        throw Error("cannot write '" + path + "'");
    return f;
}

} // namespace

void write_potential_grid(std::ostream& out, const PotentialField& field)
{
    const StructuredGrid& g = *field.grid;
    header(out, "potential", g);
    char buf[128];
    std::snprintf(buf, sizeof buf, "# applied_voltage %.17g\n", field.applied_voltage);
    out << buf;
    out << "# columns: rho[m] z[m] V[V] E_rho[V/m] E_z[V/m]\n";
    rows(out, g, [&](std::size_t p) {
        return std::array<double, 3>{field.potential[p], field.field[p](0), field.field[p](2)};
    });
}

void write_mode_grid(std::ostream& out, const ModeSolution& mode)
{
    const StructuredGrid& g = *mode.grid;
    header(out, "mode", g);
    out << "# polarization " << polarization_name(mode.polarization) << "\n";
    out << "# summary " << mode_summary(mode) << "\n";
    out << "# columns: rho[m] z[m] E[V/m] energy_density[J/m^3]\n";
    rows(out, g, [&](std::size_t p) {
        const double e = mode.amplitude[p];
        return std::array<double, 2>{e, kEps0 * mode.eps[p] * e * e};
    });
}

void write_potential_grid(const std::string& path, const PotentialField& field)
{
    auto f = open_out(path);
    write_potential_grid(f, field);
}

void write_mode_grid(const std::string& path, const ModeSolution& mode)
{
    auto f = open_out(path);
    write_mode_grid(f, mode);
}

std::string mode_summary(const ModeSolution& mode)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, "omega_a/2pi[Hz]=%.10e m=%d n_eff=%.8f FSR/2pi[Hz]=%.10e tau[s]=%.10e",
                  to_hz(mode.omega), mode.m, mode.n_eff, mode.fsr ? to_hz(*mode.fsr) : 0.0, mode.tau.value_or(0.0));
    return buf;
}

GridDump read_grid_dump(std::istream& in)
{
    GridDump d;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        if (line[0] == '#') {
            std::istringstream ls(line.substr(1));
            std::string key;
            ls >> key;
            if (key == "eoconv") {
                ls >> d.kind;
            } else if (key == "columns:") {
                std::string c;
                while (ls >> c)
                    d.columns.push_back(c);
            } else {
                std::string rest;
                std::getline(ls, rest);
                rest.erase(0, rest.find_first_not_of(' '));
                d.meta[key] = rest;
            }
            continue;
        }
        std::istringstream ls(line);
        std::vector<double> row;
        double v;
        while (ls >> v)
            row.push_back(v);
        if (row.size() != d.columns.size())
            throw Error("grid dump row has " + std::to_string(row.size()) + " values, expected " +
                        std::to_string(d.columns.size()));
        d.rows.push_back(std::move(row));
    }
    return d;
}

GridDump read_grid_dump(const std::string& path)
{
    std::ifstream f(path);
    if (!f)
        throw Error("cannot read '" + path + "'");
    return read_grid_dump(f);
}

} // namespace eoconv
