#include <doctest.h>

#include <string>

#include "helpers.hpp"
#include "ramannli/errors.hpp"
#include "ramannli/scenario.hpp"

using namespace ramannli;

namespace {

const char* kBase = R"json({
  "fiber": {
    "length": "80 km",
    "attenuation": "0.2 dB/km",
    "beta2": "-21.7 ps^2/km",
    "gamma": "1.3 1/(W*km)"
  },
  "grid": {
    "channels": [
      {"frequency": "193.4 THz", "bandwidth": "100 GHz", "power": "0 dBm"},
      {"frequency": "193.5 THz", "bandwidth": "64 GHz", "power": ["1 mW", "2 mW"]}
    ]
  },
  "spans": 2
})json";

std::string parse_error(const std::string& text) {
    try {
        parse_scenario_text(text, "s.json");
    } catch (const ParseError& e) {
        return e.what();
    }
    return "";
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
    s.replace(s.find(from), from.size(), to);
    return s;
}

}  // namespace

TEST_SUITE("scenario") {
    TEST_CASE("minimal file") {
        const auto sc = parse_scenario(testing::data_file("minimal.json"));
        CHECK(sc.link.grid.size() == 1);
        CHECK(sc.link.span.length == 80e3);
        CHECK(sc.link.span.beta3 == 0.0);
        CHECK(sc.link.span.raman_slope == 0.0);
        CHECK(sc.link.span.dispersion_reference == 193.4e12);
        CHECK(testing::rel(sc.link.grid[0].launch_power(), 1e-3) < 1e-15);
        CHECK(sc.link.pumps.empty());
        CHECK(sc.solver.steps == 1000);
        CHECK(sc.oracle.window);
    }

    TEST_CASE("attenuation in dB/km becomes power Np/m") {
        const auto sc = parse_scenario(testing::data_file("minimal.json"));
        CHECK(testing::rel(sc.link.span.attenuation(193.4e12), 4.605170185988091e-5) < 1e-12);
    }

    TEST_CASE("reference scenario") {
        const auto sc = parse_scenario(testing::data_file("reference_pumped.json"));
        CHECK(sc.link.grid.size() == 40);
        REQUIRE(sc.link.pumps.size() == 1);
        CHECK(sc.link.pumps[0].direction == PumpDirection::Backward);
        CHECK(testing::rel(sc.link.pumps[0].frequency, 206.6e12) < 1e-15);
        CHECK(testing::rel(sc.link.span.raman_slope, 2.8e-17) < 1e-12);
        CHECK(testing::rel(sc.link.grid.band_center(), 193.4e12) < 1e-15);
        CHECK(sc.output_dir == "out");
    }

    TEST_CASE("explicit channel list with per-span powers") {
        const auto sc = parse_scenario_text(kBase);
        CHECK(sc.link.span_count == 2);
        REQUIRE(sc.link.grid.size() == 2);
        CHECK(sc.link.grid[0].launch_power_per_span.size() == 2);
        CHECK(sc.link.grid[1].bandwidth == 64e9);
        CHECK(testing::rel(sc.link.grid[1].launch_power(1), 2e-3) < 1e-15);
        // band centre from the outer edges
        CHECK(testing::rel(sc.link.span.dispersion_reference, 0.5 * (193.35e12 + 193.532e12)) < 1e-15);
    }

    TEST_CASE("pump inside the band lists every problem") {
        try {
            parse_scenario(testing::data_file("pump_in_band.json"));
            FAIL("expected a validation error");
        } catch (const ValidationError& e) {
            REQUIRE_FALSE(e.diagnostics().empty());
            CHECK(e.diagnostics()[0].find("pump inside the signal band at pump index 0") != std::string::npos);
        }
    }

    TEST_CASE("unknown key names its path and line") {
        const auto msg = parse_error(replace(kBase, "\"gamma\"", "\"gama\""));
        CHECK(msg.find("s.json:6: fiber.gama: unknown key") != std::string::npos);
    }

    TEST_CASE("syntax error reports a line") {
        const auto msg = parse_error(replace(kBase, "\"80 km\",", "\"80 km\""));
        CHECK(msg.find("s.json:4: syntax error") != std::string::npos);
        CHECK_THROWS_AS(parse_scenario(testing::data_file("bad_syntax.json")), ParseError);
    }

    TEST_CASE("wrong or missing units") {
        CHECK(parse_error(replace(kBase, "0.2 dB/km", "0.2 dB")).find("fiber.attenuation: unit 'dB' not allowed") !=
              std::string::npos);
        CHECK(parse_error(replace(kBase, "80 km", "80")).find("has no unit") != std::string::npos);
        CHECK(parse_error(replace(kBase, "80 km", "80 furlongs")).find("fiber.length") != std::string::npos);
        CHECK(parse_error(replace(kBase, "80 km", "8x0 km")).find("malformed number") != std::string::npos);
    }

    TEST_CASE("missing required key") {
        const auto msg = parse_error(replace(kBase, "\"beta2\": \"-21.7 ps^2/km\",", ""));
        CHECK(msg.find("fiber.beta2: missing required key") != std::string::npos);
    }

    TEST_CASE("budget forms") {
        auto text = replace(kBase, "\"spans\": 2", "\"spans\": 2, \"budget\": {\"snr_ase\": \"20 dB\", \"snr_trx\": [\"30 dB\", \"infinite\"]}");
        CHECK(parse_error(text).find("budget.snr_trx[1]") != std::string::npos);
        text = replace(kBase, "\"spans\": 2", "\"spans\": 2, \"budget\": {\"snr_ase\": \"20 dB\", \"snr_trx\": [\"30 dB\", \"33 dB\"]}");
        const auto sc = parse_scenario_text(text);
        CHECK(testing::rel(sc.budget.ase(1), 100.0) < 1e-14);
        CHECK(testing::rel(sc.budget.trx(1), std::pow(10.0, 3.3)) < 1e-14);
    }

    TEST_CASE("options blocks") {
        const auto text = replace(kBase, "\"spans\": 2",
                                  "\"spans\": 2, \"solver\": {\"steps\": 2000, \"photon_factors\": false}, "
                                  "\"quadrature\": {\"rel_tol\": 1e-7, \"window\": false, \"phase\": \"approximate\"}, "
                                  "\"fit\": {\"alpha_b_starts\": [1, 3]}");
        const auto sc = parse_scenario_text(text);
        CHECK(sc.solver.steps == 2000);
        CHECK_FALSE(sc.solver.photon_factors);
        CHECK(sc.oracle.quad.rel_tol == 1e-7);
        CHECK_FALSE(sc.oracle.window);
        CHECK(sc.oracle.phase == PhaseModel::Approximate);
        CHECK(sc.fit.alpha_b_starts == std::vector<double>{1.0, 3.0});
        CHECK_THROWS_AS(parse_scenario_text(replace(kBase, "\"spans\": 2", "\"spans\": 2, \"solver\": {\"steps\": 50}")),
                        ValidationError);
    }
}
