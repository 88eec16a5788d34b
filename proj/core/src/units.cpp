#include "eoconv/units.hpp"

#include "eoconv/errors.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <string>

namespace eoconv
{
namespace
{

struct UnitEntry
{
    std::string_view symbol;
    Dimension dim;
    double scale;
};

constexpr std::array kUnits{
    UnitEntry{"m", Dimension::length, 1.0},
    UnitEntry{"mm", Dimension::length, 1e-3},
    UnitEntry{"um", Dimension::length, 1e-6},
    UnitEntry{"\xC2\xB5m", Dimension::length, 1e-6},
    UnitEntry{"nm", Dimension::length, 1e-9},
    UnitEntry{"/m", Dimension::inverse_length, 1.0},
    UnitEntry{"/mm", Dimension::inverse_length, 1e3},
    UnitEntry{"/um", Dimension::inverse_length, 1e6},
    UnitEntry{"/nm", Dimension::inverse_length, 1e9},
    UnitEntry{"Hz", Dimension::frequency, 1.0},
    UnitEntry{"kHz", Dimension::frequency, 1e3},
    UnitEntry{"MHz", Dimension::frequency, 1e6},
    UnitEntry{"GHz", Dimension::frequency, 1e9},
    UnitEntry{"THz", Dimension::frequency, 1e12},
    UnitEntry{"W", Dimension::power, 1.0},
    UnitEntry{"mW", Dimension::power, 1e-3},
    UnitEntry{"uW", Dimension::power, 1e-6},
    UnitEntry{"nW", Dimension::power, 1e-9},
    UnitEntry{"V", Dimension::voltage, 1.0},
    UnitEntry{"mV", Dimension::voltage, 1e-3},
    UnitEntry{"uV", Dimension::voltage, 1e-6},
    UnitEntry{"F", Dimension::capacitance, 1.0},
    UnitEntry{"pF", Dimension::capacitance, 1e-12},
    UnitEntry{"fF", Dimension::capacitance, 1e-15},
    UnitEntry{"m/V", Dimension::electro_optic, 1.0},
    UnitEntry{"pm/V", Dimension::electro_optic, 1e-12},
};

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
        s.remove_suffix(1);
    return s;
}

} // namespace

std::string_view dimension_name(Dimension dim) noexcept
{
    switch (dim) {
    case Dimension::dimensionless: return "dimensionless";
    case Dimension::length: return "length";
    case Dimension::inverse_length: return "inverse length";
    case Dimension::frequency: return "frequency";
    case Dimension::power: return "power";
    case Dimension::voltage: return "voltage";
    case Dimension::capacitance: return "capacitance";
    case Dimension::electro_optic: return "electro-optic coefficient";
    }
    return "?";
}

std::string_view si_unit(Dimension dim) noexcept
{
    switch (dim) {
    case Dimension::dimensionless: return "1";
    case Dimension::length: return "m";
    case Dimension::inverse_length: return "/m";
    case Dimension::frequency: return "Hz";
    case Dimension::power: return "W";
    case Dimension::voltage: return "V";
    case Dimension::capacitance: return "F";
    case Dimension::electro_optic: return "m/V";
    }
    return "?";
}

double parse_quantity(std::string_view text, Dimension expected)
{
    const std::string_view s = trim(text);
    double value = 0.0;
    // from_chars for double is available in libstdc++ 11
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr == s.data())
        throw ConfigError("cannot parse a number from '" + std::string(text) + "'");
    const std::string_view unit = trim(std::string_view(ptr, static_cast<std::size_t>(s.data() + s.size() - ptr)));

    if (unit.empty() || unit == "1") {
        if (expected == Dimension::dimensionless)
            return value;
        throw ConfigError("value '" + std::string(text) + "' needs an explicit " +
                          std::string(dimension_name(expected)) + " unit");
    }
    for (const auto& u : kUnits) {
        if (u.symbol == unit) {
            if (u.dim != expected)
                throw ConfigError("unit '" + std::string(unit) + "' in '" + std::string(text) + "' is a " +
                                  std::string(dimension_name(u.dim)) + ", expected " +
                                  std::string(dimension_name(expected)));
            return value * u.scale;
        }
    }
    throw ConfigError("unknown unit '" + std::string(unit) + "' in '" + std::string(text) + "'");
}

std::string format_quantity(double si_value, Dimension dim)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", si_value);
    if (dim == Dimension::dimensionless)
        return buf;
    return std::string(buf) + " " + std::string(si_unit(dim));
}

} // namespace eoconv
