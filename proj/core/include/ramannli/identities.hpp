#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ramannli/quadrature.hpp"

namespace ramannli {

struct IdentityCheck {
    std::string name;
    std::string parameters;
    double lhs = 0.0;
    double rhs = 0.0;
    double rel_error = 0.0;
    /// Improper integrals: contribution beyond the truncation point and the
    /// estimated error of that piece. Zero otherwise.
    double tail = 0.0;
    double tail_error = 0.0;
    bool pass = false;
};

struct IdentityOptions {
    int draws = 100;
    std::uint64_t seed = 20240601;
    double tolerance = 1e-8;
    QuadratureSpec quad{1e-12, 0.0, 20000, 50.0};
};

struct IdentityReport {
    double tolerance = 0.0;
    std::vector<IdentityCheck> checks;

    bool all_passed() const;
    std::vector<const IdentityCheck*> failures() const;
    /// Largest relative error among checks named `name`.
    double max_error(const std::string& name) const;
    std::size_t count(const std::string& name) const;
};

/// Randomised numerical verification of the integral identities behind the
/// closed form, plus the algebraic multinomial and complex-modulus rules.
IdentityReport verify_identities(const IdentityOptions& options = {});

}  // namespace ramannli
