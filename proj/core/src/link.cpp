#include "ramannli/link.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ramannli/errors.hpp"

namespace ramannli {

namespace {

std::string join_diagnostics(const std::vector<std::string>& diagnostics) {
    std::ostringstream os;
    os << "invalid link configuration";
    for (const auto& d : diagnostics) os << "\n  - " << d;
    return os.str();
}

double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    auto hi = std::upper_bound(xs.begin(), xs.end(), x);
    if (hi == xs.begin()) return ys.front();
    if (hi == xs.end()) return ys.back();
    const auto j = static_cast<std::size_t>(hi - xs.begin());
    const double t = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
    return ys[j - 1] + t * (ys[j] - ys[j - 1]);
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> diagnostics)
    : Error(ErrorClass::Validation, join_diagnostics(diagnostics)),
      diagnostics_(std::move(diagnostics)) {}

double WdmGrid::band_center() const {
    if (channels.empty()) return 0.0;
    const auto& lo = channels.front();
    const auto& hi = channels.back();
    return 0.5 * ((lo.center_frequency - 0.5 * lo.bandwidth) + (hi.center_frequency + 0.5 * hi.bandwidth));
}

double WdmGrid::total_bandwidth() const {
    if (channels.empty()) return 0.0;
    const auto& lo = channels.front();
    const auto& hi = channels.back();
    return (hi.center_frequency + 0.5 * hi.bandwidth) - (lo.center_frequency - 0.5 * lo.bandwidth);
}

double WdmGrid::total_power(std::size_t span) const {
    double total = 0.0;
    for (const auto& ch : channels) total += ch.launch_power(span);
    return total;
}

WdmGrid make_uniform_grid(std::size_t count, double center, double spacing, double bandwidth,
                          double power_per_channel, std::size_t span_count) {
    WdmGrid grid;
    grid.channels.reserve(count);
    const double first = center - 0.5 * static_cast<double>(count - 1) * spacing;
    for (std::size_t i = 0; i < count; ++i) {
        grid.channels.push_back(Channel{first + static_cast<double>(i) * spacing, bandwidth,
                                        std::vector<double>(span_count, power_per_channel)});
    }
    return grid;
}

AttenuationProfile::AttenuationProfile(std::vector<double> frequencies, std::vector<double> values)
    : frequencies_(std::move(frequencies)), values_(std::move(values)) {
    if (frequencies_.size() != values_.size() || frequencies_.empty()) {
        throw ValidationError({"attenuation table needs matching, non-empty frequency and value lists"});
    }
    if (!std::is_sorted(frequencies_.begin(), frequencies_.end())) {
        throw ValidationError({"attenuation table frequencies must be ascending"});
    }
}

double AttenuationProfile::operator()(double frequency) const {
    if (frequencies_.empty()) return constant_;
    return interpolate(frequencies_, values_, frequency);
}

double RamanGainTable::operator()(double shift) const {
    if (frequency_shift.empty() || shift < frequency_shift.front() || shift > frequency_shift.back()) {
        return 0.0;
    }
    return interpolate(frequency_shift, gain, shift);
}

double SnrBudget::ase(std::size_t channel) const {
    return snr_ase.size() == 1 ? snr_ase.front() : snr_ase.at(channel);
}

double SnrBudget::trx(std::size_t channel) const {
    return snr_trx.size() == 1 ? snr_trx.front() : snr_trx.at(channel);
}

std::vector<std::string> link_diagnostics(const LinkConfig& config) {
    std::vector<std::string> out;
    auto add = [&out](std::string msg) { out.push_back(std::move(msg)); };

    const auto& span = config.span;
    if (!(span.length > 0.0) || !std::isfinite(span.length)) add("span length must be positive");
    if (!(span.gamma >= 0.0)) add("nonlinear coefficient gamma must be non-negative");
    if (!std::isfinite(span.beta2) || !std::isfinite(span.beta3)) add("dispersion coefficients must be finite");
    if (!(span.raman_slope >= 0.0)) add("Raman gain slope must be non-negative");
    if (config.span_count < 1) add("span count must be at least 1");
    if (!(config.coherence_epsilon >= 0.0 && config.coherence_epsilon <= 1.0)) {
        add("coherence factor epsilon must lie in [0, 1]");
    }
    if (span.gain_table) {
        const auto& t = *span.gain_table;
        if (t.frequency_shift.size() != t.gain.size() || t.frequency_shift.empty()) {
            add("Raman gain table needs matching, non-empty shift and gain lists");
        } else {
            if (t.frequency_shift.front() != 0.0) add("Raman gain table must start at zero frequency shift");
            if (!std::is_sorted(t.frequency_shift.begin(), t.frequency_shift.end())) {
                add("Raman gain table shifts must be ascending");
            }
            if (std::any_of(t.gain.begin(), t.gain.end(), [](double g) { return !(g >= 0.0); })) {
                add("Raman gain table values must be non-negative");
            }
        }
    }

    const auto& channels = config.grid.channels;
    if (channels.empty()) add("grid has no channels");
    for (std::size_t i = 0; i < channels.size(); ++i) {
        const auto& ch = channels[i];
        const std::string at = " at channel index " + std::to_string(i);
        if (!(ch.bandwidth > 0.0)) add("non-positive bandwidth" + at);
        if (!(ch.center_frequency > 0.0)) add("non-positive centre frequency" + at);
        if (static_cast<int>(ch.launch_power_per_span.size()) != config.span_count) {
            add("launch power list length differs from span count" + at);
        }
        for (double p : ch.launch_power_per_span) {
            if (!(p > 0.0) || !std::isfinite(p)) {
                add("non-positive launch power" + at);
                break;
            }
        }
        if (!(span.attenuation(ch.center_frequency) > 0.0)) add("non-positive fibre attenuation" + at);
        if (i + 1 < channels.size()) {
            const auto& next = channels[i + 1];
            const double gap = next.center_frequency - ch.center_frequency;
            // Touching bands (gap == mean bandwidth) are allowed; relative slack absorbs rounding.
            const double need = 0.5 * (ch.bandwidth + next.bandwidth);
            if (gap < need * (1.0 - 1e-9)) {
                add("overlapping channels at index " + std::to_string(i) + "," + std::to_string(i + 1));
            }
        }
    }

    const double top = channels.empty() ? 0.0 : channels.back().center_frequency;
    for (std::size_t p = 0; p < config.pumps.size(); ++p) {
        const auto& pump = config.pumps[p];
        const std::string at = " at pump index " + std::to_string(p);
        if (pump.input_power < 0.0 || !std::isfinite(pump.input_power)) add("negative pump power" + at);
        if (!(pump.attenuation > 0.0)) add("non-positive pump attenuation" + at);
        if (!(pump.frequency > top)) add("pump inside the signal band" + at);
    }
    return out;
}

const LinkConfig& validate_link(const LinkConfig& config) {
    auto diagnostics = link_diagnostics(config);
    if (!diagnostics.empty()) throw ValidationError(std::move(diagnostics));
    return config;
}

}  // namespace ramannli
