#pragma once

#include <cmath>
#include <string>

#include "ramannli/link.hpp"
#include "ramannli/units.hpp"

namespace testing {

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline std::string data_file(const char* name) { return std::string(RAMANNLI_TEST_DATA) + "/" + name; }

/// 80 km SMF-like span with the dispersion reference at `reference`.
inline ramannli::FiberSpan standard_span(double raman_slope_si = 2.8e-17, double reference = 193.4e12) {
    ramannli::FiberSpan s;
    s.length = 80e3;
    s.beta2 = ramannli::convert_units(-21.7, "ps^2/km");
    s.beta3 = ramannli::convert_units(0.14, "ps^3/km");
    s.gamma = 1.3e-3;
    s.attenuation = ramannli::AttenuationProfile(ramannli::convert_units(0.2, "dB/km"));
    s.raman_slope = raman_slope_si;
    s.dispersion_reference = reference;
    return s;
}

/// 40 x 100 GHz at 0 dBm around 193.4 THz with one 600 mW backward pump 13.2 THz above.
inline ramannli::LinkConfig reference_link(std::size_t channels = 40, double pump_power = 0.6) {
    ramannli::LinkConfig c;
    c.span = standard_span();
    c.grid = ramannli::make_uniform_grid(channels, 193.4e12, 100e9, 100e9, 1e-3);
    if (pump_power > 0.0) {
        c.pumps.push_back({193.4e12 + 13.2e12, pump_power, ramannli::PumpDirection::Backward,
                           ramannli::convert_units(0.25, "dB/km")});
    }
    return c;
}

}  // namespace testing
