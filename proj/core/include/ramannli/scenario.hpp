#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "ramannli/link.hpp"
#include "ramannli/oracle.hpp"
#include "ramannli/profile.hpp"
#include "ramannli/raman_solver.hpp"

namespace ramannli {

/// One link plus everything needed to run the commands on it. All values SI.
struct Scenario {
    LinkConfig link;
    SnrBudget budget;
    SolverOptions solver;
    FitOptions fit;
    OracleOptions oracle;
    std::filesystem::path output_dir{"."};
};

/// Strict JSON scenario: unknown keys, bad units and malformed values raise
/// ParseError with line/key context; invariant violations raise
/// ValidationError. Quantities are strings "<number> <unit>".
Scenario parse_scenario_text(std::string_view text, std::string_view source = "<scenario>");
Scenario parse_scenario(const std::filesystem::path& path);

}  // namespace ramannli
