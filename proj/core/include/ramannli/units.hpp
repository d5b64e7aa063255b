#pragma once

#include <string_view>

namespace ramannli {

/// Engineering units accepted at the I/O boundary. Everything inside the
/// library is SI: Hz, W, m, Np/m, s^2/m, s^3/m, 1/(W m).
enum class Unit {
    DbPerKm,          ///< dB/km -> Np/m
    Ps2PerKm,         ///< ps^2/km -> s^2/m
    Ps3PerKm,         ///< ps^3/km -> s^3/m
    Dbm,              ///< dBm -> W
    MilliWatt,        ///< mW -> W
    Terahertz,        ///< THz -> Hz
    Gigahertz,        ///< GHz -> Hz
    PerWattKm,        ///< 1/(W km) -> 1/(W m)
    PerWattKmTerahertz,  ///< 1/(W km THz) -> 1/(W m Hz)
    Kilometre,        ///< km -> m
    Decibel,          ///< dB -> linear ratio
};

/// Throws ParseError for tags outside the supported set.
Unit parse_unit(std::string_view tag);
std::string_view unit_tag(Unit unit);

double to_si(double value, Unit unit);
double from_si(double value, Unit unit);

/// convert_units("0.2", "dB/km") style helper for one-off conversions.
double convert_units(double value, std::string_view tag);

inline constexpr double kPi = 3.141592653589793238462643383279502884;

}  // namespace ramannli
