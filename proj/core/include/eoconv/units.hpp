#ifndef EOCONV_UNITS_HPP
#define EOCONV_UNITS_HPP

#include <string>
#include <string_view>

namespace eoconv
{

enum class Dimension
{
    dimensionless,
    length,
    inverse_length,
    frequency, // ordinary frequency, Hz
    power,
    voltage,
    capacitance,
    electro_optic, // m/V
};

std::string_view dimension_name(Dimension dim) noexcept;
std::string_view si_unit(Dimension dim) noexcept;

// Parses "<number> <unit>" (e.g. "1.5 um", "200 THz", "30 pm/V") into SI.
// Dimensionless values accept a bare number. Throws ConfigError on a missing
// or mismatched unit.
double parse_quantity(std::string_view text, Dimension expected);

// Canonical lossless text form, "<%.17g> <SI unit>".
std::string format_quantity(double si_value, Dimension dim);

} // namespace eoconv

#endif // EOCONV_UNITS_HPP
