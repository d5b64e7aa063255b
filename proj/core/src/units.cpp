#include "ramannli/units.hpp"

#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "ramannli/errors.hpp"

namespace ramannli {

namespace {

constexpr std::array<std::pair<std::string_view, Unit>, 11> kTags{{
    {"dB/km", Unit::DbPerKm},
    {"ps^2/km", Unit::Ps2PerKm},
    {"ps^3/km", Unit::Ps3PerKm},
    {"dBm", Unit::Dbm},
    {"mW", Unit::MilliWatt},
    {"THz", Unit::Terahertz},
    {"GHz", Unit::Gigahertz},
    {"1/(W*km)", Unit::PerWattKm},
    {"1/(W*km*THz)", Unit::PerWattKmTerahertz},
    {"km", Unit::Kilometre},
    {"dB", Unit::Decibel},
}};

const double kDbToNeper = std::log(10.0) / 10.0;

}  // namespace

Unit parse_unit(std::string_view tag) {
    for (const auto& [name, unit] : kTags) {
        if (name == tag) return unit;
    }
    throw ParseError("unknown unit tag '" + std::string(tag) + "'");
}

std::string_view unit_tag(Unit unit) {
    for (const auto& [name, u] : kTags) {
        if (u == unit) return name;
    }
    return "?";
}

double to_si(double value, Unit unit) {
    switch (unit) {
        case Unit::DbPerKm: return value * kDbToNeper / 1e3;
        case Unit::Ps2PerKm: return value * 1e-24 / 1e3;
        case Unit::Ps3PerKm: return value * 1e-36 / 1e3;
        case Unit::Dbm: return 1e-3 * std::pow(10.0, value / 10.0);
        case Unit::MilliWatt: return value * 1e-3;
        case Unit::Terahertz: return value * 1e12;
        case Unit::Gigahertz: return value * 1e9;
        case Unit::PerWattKm: return value / 1e3;
        case Unit::PerWattKmTerahertz: return value / 1e3 / 1e12;
        case Unit::Kilometre: return value * 1e3;
        case Unit::Decibel: return std::pow(10.0, value / 10.0);
    }
    return value;
}

double from_si(double value, Unit unit) {
    switch (unit) {
        case Unit::DbPerKm: return value * 1e3 / kDbToNeper;
        case Unit::Ps2PerKm: return value * 1e3 / 1e-24;
        case Unit::Ps3PerKm: return value * 1e3 / 1e-36;
        case Unit::Dbm: return 10.0 * std::log10(value / 1e-3);
        case Unit::MilliWatt: return value / 1e-3;
        case Unit::Terahertz: return value / 1e12;
        case Unit::Gigahertz: return value / 1e9;
        case Unit::PerWattKm: return value * 1e3;
        case Unit::PerWattKmTerahertz: return value * 1e3 * 1e12;
        case Unit::Kilometre: return value / 1e3;
        case Unit::Decibel: return 10.0 * std::log10(value);
    }
    return value;
}

double convert_units(double value, std::string_view tag) { return to_si(value, parse_unit(tag)); }

}  // namespace ramannli
