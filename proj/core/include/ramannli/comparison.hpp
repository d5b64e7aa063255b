#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

#include "ramannli/closed_form.hpp"
#include "ramannli/oracle.hpp"
#include "ramannli/profile.hpp"

namespace ramannli {

/// One (CUT, interferer) term; k == i is the SPM term.
struct PairComparison {
    std::size_t i = 0;
    std::size_t k = 0;
    double separation = 0.0;  ///< |f_k - f_i|, Hz
    double bandwidth_k = 0.0;
    double closed = 0.0;      ///< 1/W^2
    double numeric = 0.0;
    double error = 0.0;       ///< quadrature error estimate of `numeric`
    bool converged = true;
    bool degenerate = false;  ///< closed form undefined for this pair

    double delta_db() const;
};

struct ChannelComparison {
    std::size_t channel = 0;
    double frequency = 0.0;
    double closed = 0.0;
    double numeric = 0.0;
    double error = 0.0;

    double delta_db() const;
};

struct ComparisonReport {
    std::vector<PairComparison> pairs;
    std::vector<ChannelComparison> channels;

    double max_channel_delta_db() const;
    /// Largest |delta| over XPM pairs separated by at least `min_separation`
    /// multiples of the interferer bandwidth.
    double max_pair_delta_db(double min_separation) const;
};

struct CompareOptions {
    OracleOptions oracle;
    /// CUTs to evaluate; empty means all.
    std::vector<std::size_t> channels;
    std::function<void(std::size_t done, std::size_t total)> progress;
};

/// Single-span closed-form SPM/XPM per pair next to the 2D quadrature
/// oracle, both driven by the fitted profile of the CUT.
ComparisonReport compare_closed_form(const LinkConfig& config, const FitReport& fit,
                                     const CompareOptions& options = {});

void write_comparison_csv(std::ostream& os, const ComparisonReport& report);
void write_pair_comparison_csv(std::ostream& os, const ComparisonReport& report);

}  // namespace ramannli
