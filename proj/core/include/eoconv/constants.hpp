#ifndef EOCONV_CONSTANTS_HPP
#define EOCONV_CONSTANTS_HPP

#include <numbers>

namespace eoconv
{

// CODATA 2018 exact/recommended values, SI.
struct PhysicalConstants
{
    double hbar = 1.054571817e-34; // J s
    double eps0 = 8.8541878128e-12; // F/m
    double c = 299792458.0;         // m/s
};

inline constexpr PhysicalConstants kCodata{};

inline constexpr double kHbar = kCodata.hbar;
inline constexpr double kEps0 = kCodata.eps0;
inline constexpr double kSpeedOfLight = kCodata.c;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Angular frequencies (rad/s) are used internally; anything labeled "/2pi" is Hz.
constexpr double to_angular(double hz) noexcept { return kTwoPi * hz; }
constexpr double to_hz(double rad_per_s) noexcept { return rad_per_s / kTwoPi; }

} // namespace eoconv

#endif // EOCONV_CONSTANTS_HPP
