#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace ramannli {

/// One WDM channel. Frequencies are absolute optical frequencies.
struct Channel {
    double center_frequency = 0.0;  ///< Hz
    double bandwidth = 0.0;         ///< symbol-rate bandwidth, Hz
    std::vector<double> launch_power_per_span;  ///< W, one entry per span

    double launch_power(std::size_t span = 0) const { return launch_power_per_span.at(span); }
};

/// Channels ordered by ascending centre frequency.
struct WdmGrid {
    std::vector<Channel> channels;

    std::size_t size() const { return channels.size(); }
    bool empty() const { return channels.empty(); }
    const Channel& operator[](std::size_t i) const { return channels[i]; }

    /// Midpoint between the outer band edges.
    double band_center() const;
    /// Occupied optical bandwidth, outer edge to outer edge.
    double total_bandwidth() const;
    double total_power(std::size_t span = 0) const;
};

/// Uniform grid helper: `count` channels centred on `center`.
WdmGrid make_uniform_grid(std::size_t count, double center, double spacing, double bandwidth,
                          double power_per_channel, std::size_t span_count = 1);

enum class PumpDirection { Forward, Backward };

struct Pump {
    double frequency = 0.0;    ///< Hz
    double input_power = 0.0;  ///< W; for backward pumps the power injected at z = L
    PumpDirection direction = PumpDirection::Backward;
    double attenuation = 0.0;  ///< Np/m at the pump wavelength
};

/// Intrinsic fibre loss alpha(f): a constant or a linearly interpolated table
/// (clamped to the end values outside it).
class AttenuationProfile {
public:
    AttenuationProfile() = default;
    explicit AttenuationProfile(double constant) : constant_(constant) {}
    AttenuationProfile(std::vector<double> frequencies, std::vector<double> values);

    double operator()(double frequency) const;
    bool is_constant() const { return frequencies_.empty(); }
    const std::vector<double>& frequencies() const { return frequencies_; }
    const std::vector<double>& values() const { return values_; }
    double constant() const { return constant_; }

private:
    double constant_ = 0.0;
    std::vector<double> frequencies_;
    std::vector<double> values_;
};

/// Sampled g_r(df)/A_eff in 1/(W m), linear interpolation, zero outside the table.
struct RamanGainTable {
    std::vector<double> frequency_shift;  ///< Hz, ascending from 0
    std::vector<double> gain;             ///< 1/(W m)

    double operator()(double shift) const;
};

struct FiberSpan {
    double length = 0.0;  ///< m
    double beta2 = 0.0;   ///< s^2/m
    double beta3 = 0.0;   ///< s^3/m
    double gamma = 0.0;   ///< 1/(W m)
    AttenuationProfile attenuation;
    /// Triangular Raman gain slope C_r, 1/(W m Hz): g(df) = C_r * df.
    double raman_slope = 0.0;
    std::optional<RamanGainTable> gain_table;
    /// Absolute frequency at which beta2/beta3 are quoted. Phase-mismatch
    /// formulas take frequencies as offsets from this point.
    double dispersion_reference = 0.0;
};

struct LinkConfig {
    FiberSpan span;
    int span_count = 1;
    double coherence_epsilon = 0.0;
    WdmGrid grid;
    std::vector<Pump> pumps;
};

/// Linear-scale SNR contributions from ASE and transceivers. A single entry
/// is broadcast to every channel; +inf means "absent".
struct SnrBudget {
    std::vector<double> snr_ase{std::numeric_limits<double>::infinity()};
    std::vector<double> snr_trx{std::numeric_limits<double>::infinity()};

    static SnrBudget infinite() { return {}; }
    double ase(std::size_t channel) const;
    double trx(std::size_t channel) const;
};

/// Every violated invariant of `config`, with channel/pump indices. Empty
/// means valid.
std::vector<std::string> link_diagnostics(const LinkConfig& config);

/// Returns `config` unchanged when valid, otherwise throws ValidationError
/// carrying the full diagnostic list.
const LinkConfig& validate_link(const LinkConfig& config);

}  // namespace ramannli
