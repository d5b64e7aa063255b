#include <doctest.h>

#include <algorithm>

#include "helpers.hpp"
#include "ramannli/errors.hpp"
#include "ramannli/link.hpp"

using namespace ramannli;

namespace {

bool has(const std::vector<std::string>& d, const std::string& needle) {
    return std::any_of(d.begin(), d.end(), [&](const auto& s) { return s.find(needle) != std::string::npos; });
}

}  // namespace

TEST_SUITE("link") {
    TEST_CASE("single channel with a pump 13 THz above it is valid") {
        auto c = testing::reference_link(1);
        c.pumps[0].frequency = 193.4e12 + 13e12;
        CHECK(link_diagnostics(c).empty());
        CHECK(&validate_link(c) == &c);
    }

    TEST_CASE("two channels at the same frequency overlap") {
        auto c = testing::reference_link(2, 0.0);
        c.grid.channels[1].center_frequency = c.grid.channels[0].center_frequency;
        const auto d = link_diagnostics(c);
        CHECK(has(d, "overlapping channels at index 0,1"));
        CHECK_THROWS_AS(validate_link(c), ValidationError);
    }

    TEST_CASE("negative pump power is reported with its index") {
        auto c = testing::reference_link(4);
        c.pumps.push_back(c.pumps[0]);
        c.pumps[1].input_power = -1.0;
        CHECK(has(link_diagnostics(c), "negative pump power at pump index 1"));
    }

    TEST_CASE("pump inside the signal band") {
        auto c = testing::reference_link(4);
        c.pumps[0].frequency = c.grid[1].center_frequency;
        CHECK(has(link_diagnostics(c), "pump inside the signal band at pump index 0"));
    }

    TEST_CASE("every violation is listed, not only the first") {
        auto c = testing::reference_link(3);
        c.grid.channels[2].launch_power_per_span = {0.0};
        c.grid.channels[0].bandwidth = -1.0;
        c.span_count = 0;
        c.coherence_epsilon = 2.0;
        c.span.length = 0.0;
        try {
            validate_link(c);
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            const auto& d = e.diagnostics();
            CHECK(has(d, "non-positive launch power at channel index 2"));
            CHECK(has(d, "non-positive bandwidth at channel index 0"));
            CHECK(has(d, "span count"));
            CHECK(has(d, "epsilon"));
            CHECK(has(d, "span length"));
            CHECK(e.error_class() == ErrorClass::Validation);
        }
    }

    TEST_CASE("touching channels are allowed") {
        auto c = testing::reference_link(40);
        CHECK(link_diagnostics(c).empty());
    }

    TEST_CASE("validation is pure and idempotent") {
        const auto c = testing::reference_link(8);
        const auto& once = validate_link(c);
        const auto& twice = validate_link(once);
        CHECK(&twice == &c);
        CHECK(link_diagnostics(twice).empty());
    }

    TEST_CASE("grid helpers") {
        const auto g = make_uniform_grid(4, 193.4e12, 100e9, 50e9, 2e-3, 3);
        CHECK(g.size() == 4);
        CHECK(g[0].center_frequency == doctest::Approx(193.25e12));
        CHECK(g.band_center() == doctest::Approx(193.4e12));
        CHECK(g.total_bandwidth() == doctest::Approx(350e9));
        CHECK(g.total_power(2) == doctest::Approx(8e-3));
        CHECK(g[3].launch_power_per_span.size() == 3);
    }

    TEST_CASE("tabulated attenuation and gain interpolate") {
        AttenuationProfile a({190e12, 200e12}, {1e-5, 3e-5});
        CHECK(a(195e12) == doctest::Approx(2e-5));
        CHECK(a(180e12) == doctest::Approx(1e-5));
        CHECK(a(210e12) == doctest::Approx(3e-5));
        RamanGainTable g{{0.0, 10e12, 20e12}, {0.0, 1e-3, 0.5e-3}};
        CHECK(g(5e12) == doctest::Approx(0.5e-3));
        CHECK(g(15e12) == doctest::Approx(0.75e-3));
        CHECK(g(25e12) == 0.0);
        CHECK(g(-1.0) == 0.0);
    }

    TEST_CASE("budget broadcasts a single entry") {
        SnrBudget b;
        b.snr_ase = {100.0};
        b.snr_trx = {1.0, 2.0};
        CHECK(b.ase(7) == 100.0);
        CHECK(b.trx(1) == 2.0);
        CHECK(std::isinf(SnrBudget::infinite().ase(0)));
    }
}
