#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "ramannli/scenario.hpp"

namespace ramannli::cli {

enum ExitCode : int {
    kOk = 0,
    kParse = 2,
    kValidation = 3,
    kNumerical = 4,
    kGate = 5,
};

struct SweepRange {
    double lo = -4.0;
    double hi = 4.0;
    double step = 1.0;
};

struct CommandOptions {
    std::optional<std::filesystem::path> out;
    std::optional<double> gate_db;
    std::optional<int> steps;
    SweepRange sweep;
};

/// "lo:hi:step" in dB; throws ParseError.
SweepRange parse_sweep(const std::string& text);

/// Each command writes its artifacts into the output directory once, at the
/// end, and returns an exit code. Library errors propagate as exceptions.
int cmd_solve(const Scenario& sc, const CommandOptions& opt, std::ostream& log);
int cmd_fit(const Scenario& sc, const CommandOptions& opt, std::ostream& log);
int cmd_nli(const Scenario& sc, const CommandOptions& opt, std::ostream& log);
int cmd_compare(const Scenario& sc, const CommandOptions& opt, std::ostream& log);
int cmd_sweep(const Scenario& sc, const CommandOptions& opt, std::ostream& log);

/// Full command line handling with the exit-code contract
/// 0 ok, 2 parse, 3 validation, 4 numerical, 5 gate.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ramannli::cli
