#include "ramannli/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "ramannli/errors.hpp"
#include "ramannli/report_io.hpp"

namespace ramannli {

double PairComparison::delta_db() const { return 10.0 * std::log10(closed / numeric); }
double ChannelComparison::delta_db() const { return 10.0 * std::log10(closed / numeric); }

double ComparisonReport::max_channel_delta_db() const {
    double m = 0.0;
    for (const auto& c : channels) m = std::max(m, std::abs(c.delta_db()));
    return m;
}

double ComparisonReport::max_pair_delta_db(double min_separation) const {
    double m = 0.0;
    for (const auto& p : pairs) {
        if (p.i == p.k || p.degenerate) continue;
        if (p.separation < min_separation * p.bandwidth_k) continue;
        m = std::max(m, std::abs(p.delta_db()));
    }
    return m;
}

ComparisonReport compare_closed_form(const LinkConfig& config, const FitReport& fit, const CompareOptions& options) {
    validate_link(config);
    const auto& grid = config.grid;
    const auto& span = config.span;
    if (fit.channels.size() != grid.size()) throw ValidationError({"fit report does not cover every channel"});

    std::vector<std::size_t> cuts = options.channels;
    if (cuts.empty()) {
        cuts.resize(grid.size());
        for (std::size_t i = 0; i < cuts.size(); ++i) cuts[i] = i;
    }
    for (auto i : cuts) {
        if (i >= grid.size()) throw ValidationError({"comparison channel index " + std::to_string(i) + " out of range"});
    }

    ComparisonReport rep;
    const std::size_t total = cuts.size() * grid.size();
    std::size_t done = 0;
    for (auto i : cuts) {
        const auto& ci = grid[i];
        const double fi = ci.center_frequency;
        const auto& params = fit.channels[i].params;
        const auto terms = closed_form_terms(params, fit.context, fi, span.length);
        const auto link = taylor_profile_link(params, fit.context, fi, span.length);
        const OracleChannel cut{fi, ci.bandwidth, ci.launch_power(0)};

        ChannelComparison ch{i, fi, 0.0, 0.0, 0.0};
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const auto& ck = grid[k];
            PairComparison pc;
            pc.i = i;
            pc.k = k;
            pc.separation = std::abs(ck.center_frequency - fi);
            pc.bandwidth_k = ck.bandwidth;
            OracleResult num;
            if (k == i) {
                pc.closed = eta_spm(terms, phase_mismatch(span, fi).phi_i, ci.bandwidth, span.gamma);
                num = eta_spm_numeric(cut, link, span, options.oracle);
            } else {
                const double ratio = ck.launch_power(0) / ci.launch_power(0);
                try {
                    const double phi = phase_mismatch(span, fi, ck.center_frequency).phi_ik;
                    pc.closed = eta_xpm_pair(terms, phi, ci.bandwidth, ck.bandwidth, ratio, span.gamma);
                } catch (const DegenerateError&) {
                    pc.degenerate = true;
                }
                num = eta_xpm_numeric(cut, OracleChannel{ck.center_frequency, ck.bandwidth, ck.launch_power(0)}, link,
                                      span, options.oracle);
            }
            pc.numeric = num.eta;
            pc.error = num.error;
            pc.converged = num.converged;
            ch.closed += pc.closed;
            ch.numeric += pc.numeric;
            ch.error += pc.error;
            rep.pairs.push_back(pc);
            if (options.progress) options.progress(++done, total);
        }
        rep.channels.push_back(ch);
    }
    return rep;
}

void write_comparison_csv(std::ostream& os, const ComparisonReport& report) {
    os << "channel,frequency_Hz,eta_closed_per_W2,eta_numeric_per_W2,delta_dB,quadrature_error_per_W2\n";
    for (const auto& c : report.channels) {
        os << c.channel << ',' << format_number(c.frequency) << ',' << format_number(c.closed) << ','
           << format_number(c.numeric) << ',' << format_number(c.delta_db()) << ',' << format_number(c.error) << '\n';
    }
}

void write_pair_comparison_csv(std::ostream& os, const ComparisonReport& report) {
    os << "cut,interferer,separation_Hz,eta_closed_per_W2,eta_numeric_per_W2,delta_dB,quadrature_error_per_W2,"
          "converged,degenerate\n";
    for (const auto& p : report.pairs) {
        os << p.i << ',' << p.k << ',' << format_number(p.separation) << ',' << format_number(p.closed) << ','
           << format_number(p.numeric) << ',' << format_number(p.delta_db()) << ',' << format_number(p.error) << ','
           << (p.converged ? 1 : 0) << ',' << (p.degenerate ? 1 : 0) << '\n';
    }
}

}  // namespace ramannli
