#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "helpers.hpp"
#include "ramannli/closed_form.hpp"
#include "ramannli/errors.hpp"

using namespace ramannli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("ramannli_cli_test_" + name);
    fs::remove_all(p);
    return p;
}

int run(std::vector<std::string> args, std::string* err_text = nullptr) {
    args.insert(args.begin(), "ramannli");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int rc = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    if (err_text) *err_text = err.str();
    return rc;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(slurp(p));
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("exit codes") {
        const auto out = scratch("codes");
        std::string err;
        CHECK(run({"nli", "--scenario", testing::data_file("bad_syntax.json"), "--out", out.string()}, &err) ==
              cli::kParse);
        CHECK(err.find("syntax error") != std::string::npos);
        CHECK(run({"nli", "--scenario", testing::data_file("pump_in_band.json"), "--out", out.string()}, &err) ==
              cli::kValidation);
        CHECK(err.find("pump inside the signal band") != std::string::npos);
        CHECK(run({"nli", "--scenario", testing::data_file("dispersionless.json"), "--out", out.string()}) ==
              cli::kNumerical);
        CHECK(run({"nope", "--scenario", testing::data_file("minimal.json")}) == cli::kParse);
        CHECK(run({"nli"}) == cli::kParse);
        CHECK(run({"solve", "--scenario", testing::data_file("minimal.json"), "--steps", "10", "--out",
                   out.string()}) == cli::kValidation);
        CHECK(run({"sweep", "--scenario", testing::data_file("minimal.json"), "--sweep", "1:0:1", "--out",
                   out.string()}) == cli::kParse);
        CHECK(run({"nli", "--scenario", testing::data_file("does_not_exist.json")}) == cli::kParse);
    }

    TEST_CASE("sweep range parsing") {
        const auto r = cli::parse_sweep("-2:3:0.5");
        CHECK(r.lo == -2.0);
        CHECK(r.hi == 3.0);
        CHECK(r.step == 0.5);
        CHECK_THROWS_AS(cli::parse_sweep("1:2"), ParseError);
        CHECK_THROWS_AS(cli::parse_sweep("a:b:c"), ParseError);
        CHECK_THROWS_AS(cli::parse_sweep("0:1:0"), ParseError);
    }

    TEST_CASE("solve and fit write their artifacts") {
        const auto out = scratch("solve");
        CHECK(run({"solve", "--scenario", testing::data_file("small_pumped.json"), "--out", out.string()}) == cli::kOk);
        const auto rows = csv(out / "power_evolution.csv");
        CHECK(rows.size() == 1002);
        CHECK(rows[0].size() == 5);
        CHECK(run({"fit", "--scenario", testing::data_file("small_pumped.json"), "--out", out.string()}) == cli::kOk);
        CHECK(slurp(out / "fit_report.json").find("\"rms_dB\"") != std::string::npos);
    }

    TEST_CASE("nli output is byte-identical across runs") {
        const auto a = scratch("det_a"), b = scratch("det_b");
        REQUIRE(run({"nli", "--scenario", testing::data_file("small_pumped.json"), "--out", a.string()}) == cli::kOk);
        REQUIRE(run({"nli", "--scenario", testing::data_file("small_pumped.json"), "--out", b.string()}) == cli::kOk);
        CHECK(slurp(a / "nli_report.csv") == slurp(b / "nli_report.csv"));
        CHECK(slurp(a / "nli_report.json") == slurp(b / "nli_report.json"));
        CHECK_FALSE(slurp(a / "nli_report.csv").empty());
    }

    TEST_CASE("nli without Raman matches the single-exponential formulas") {
        const auto out = scratch("lumped");
        REQUIRE(run({"nli", "--scenario", testing::data_file("reference_unpumped.json"), "--out", out.string()}) ==
                cli::kOk);
        const auto sc = parse_scenario(testing::data_file("reference_unpumped.json"));
        const auto& s = sc.link.span;
        const double a = s.attenuation(193.4e12);
        const double k2 = std::exp(-2.0 * a * s.length);
        const auto rows = csv(out / "nli_report.csv");
        REQUIRE(rows.size() == sc.link.grid.size() + 1);
        for (std::size_t i = 0; i < sc.link.grid.size(); ++i) {
            const double fi = sc.link.grid[i].center_frequency - s.dispersion_reference;
            const double b = sc.link.grid[i].bandwidth;
            const double phi_i = -4 * kPi * kPi * (s.beta2 + 2 * kPi * s.beta3 * fi);
            const double tail = 4.0 * std::log(std::sqrt(std::abs(phi_i) * s.length / (2 * kPi)) * b);
            const double spm = 16.0 / 27.0 * kPi * s.gamma * s.gamma / (b * b * phi_i * a) *
                               (2 * (1 + k2) * std::asinh(3 * phi_i * b * b / (8 * kPi * a)) -
                                2 * (phi_i > 0 ? 1 : -1) * k2 * tail);
            double xpm = 0.0;
            for (std::size_t k = 0; k < sc.link.grid.size(); ++k) {
                if (k == i) continue;
                const double fk = sc.link.grid[k].center_frequency - s.dispersion_reference;
                const double phi = -4 * kPi * kPi * (fk - fi) * (s.beta2 + kPi * s.beta3 * (fi + fk));
                xpm += 32.0 / 27.0 * s.gamma * s.gamma / (phi * sc.link.grid[k].bandwidth * a) *
                       (2 * (1 + k2) * std::atan(phi * b / (2 * a)) - 2 * kPi * (phi > 0 ? 1 : -1) * k2);
            }
            CHECK(testing::rel(std::stod(rows[i + 1][2]), spm) < 1e-7);
            CHECK(testing::rel(std::stod(rows[i + 1][3]), xpm) < 1e-7);
        }
    }

    TEST_CASE("sweep moves SNR_NLI by -2 dB per dB") {
        const auto out = scratch("sweep");
        REQUIRE(run({"sweep", "--scenario", testing::data_file("small_pumped.json"), "--out", out.string()}) ==
                cli::kOk);
        const auto rows = csv(out / "sweep.csv");
        REQUIRE(rows.size() == 1 + 9 * 3);
        CHECK(rows[0] == std::vector<std::string>{"offset_dB", "channel", "frequency_Hz", "launch_power_dBm",
                                                  "snr_nli_dB", "snr_dB"});
        std::map<std::string, std::vector<std::pair<double, double>>> per_channel;
        for (std::size_t r = 1; r < rows.size(); ++r) {
            per_channel[rows[r][1]].emplace_back(std::stod(rows[r][0]), std::stod(rows[r][4]));
        }
        CHECK(per_channel.size() == 3);
        for (const auto& [ch, pts] : per_channel) {
            CHECK(pts.size() == 9);
            for (std::size_t n = 1; n < pts.size(); ++n) {
                const double slope = (pts[n].second - pts[n - 1].second) / (pts[n].first - pts[n - 1].first);
                CHECK(std::abs(slope + 2.0) < 1e-6);
            }
        }
    }

    TEST_CASE("compare on a small pumped link passes a loose gate and fails a tight one") {
        const auto out = scratch("compare");
        std::string err;
        CHECK(run({"compare", "--scenario", testing::data_file("small_pumped.json"), "--gate-db", "0.5", "--out",
                   out.string()}) == cli::kOk);
        const auto rows = csv(out / "compare_report.csv");
        CHECK(rows.size() == 4);
        CHECK(fs::exists(out / "compare_pairs.csv"));
        CHECK(run({"compare", "--scenario", testing::data_file("small_pumped.json"), "--gate-db", "1e-6", "--out",
                   out.string()},
                  &err) == cli::kGate);
    }
}
