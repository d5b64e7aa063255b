#include "ramannli/raman_solver.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "ramannli/errors.hpp"
#include "ramannli/report_io.hpp"

namespace ramannli {

PowerEvolution::PowerEvolution(std::vector<double> z, std::vector<double> frequencies,
                               std::vector<LineKind> kinds)
    : z_(std::move(z)),
      frequencies_(std::move(frequencies)),
      kinds_(std::move(kinds)),
      powers_(frequencies_.size() * z_.size(), 0.0) {}

std::size_t PowerEvolution::channel_count() const {
    std::size_t n = 0;
    for (auto k : kinds_) n += (k == LineKind::Channel) ? 1 : 0;
    return n;
}

namespace {

/// Coupled system dP_r/dz = P_r (-alpha_r + sum_s K[r][s] P_s) over all lines.
/// Integrated lines come first; prescribed backward pumps are appended.
struct RamanSystem {
    std::size_t n_state = 0;  // channels + forward pumps
    std::size_t n_lines = 0;  // plus backward pumps
    std::vector<double> loss;       // per line
    std::vector<double> coupling;   // n_state x n_lines
    std::vector<double> bw_power;   // P(L) of each backward pump
    std::vector<double> bw_loss;
    double length = 0.0;

    void backward_powers(double z, std::vector<double>& out) const {
        for (std::size_t b = 0; b < bw_power.size(); ++b) {
            out[n_state + b] = bw_power[b] * std::exp(-bw_loss[b] * (length - z));
        }
    }

    void rhs(double z, const std::vector<double>& state, std::vector<double>& all,
             std::vector<double>& dpdz) const {
        for (std::size_t r = 0; r < n_state; ++r) all[r] = state[r];
        backward_powers(z, all);
        for (std::size_t r = 0; r < n_state; ++r) {
            const double* k = coupling.data() + r * n_lines;
            double acc = -loss[r];
            for (std::size_t s = 0; s < n_lines; ++s) acc += k[s] * all[s];
            dpdz[r] = state[r] * acc;
        }
    }
};

RamanSystem build_system(const LinkConfig& config, std::size_t span_index, const SolverOptions& options,
                         std::vector<double>& frequencies, std::vector<LineKind>& kinds,
                         std::vector<double>& initial, std::vector<std::size_t>& row_of_line) {
    const auto& span = config.span;
    const auto& grid = config.grid;
    RamanSystem sys;
    sys.length = span.length;

    std::vector<double> line_freq;
    // Integrated lines: channels then forward pumps.
    for (std::size_t i = 0; i < grid.size(); ++i) {
        line_freq.push_back(grid[i].center_frequency);
        sys.loss.push_back(span.attenuation(grid[i].center_frequency));
        initial.push_back(grid[i].launch_power(span_index));
        row_of_line.push_back(i);
    }
    for (std::size_t p = 0; p < config.pumps.size(); ++p) {
        const auto& pump = config.pumps[p];
        if (pump.direction != PumpDirection::Forward) continue;
        line_freq.push_back(pump.frequency);
        sys.loss.push_back(pump.attenuation);
        initial.push_back(pump.input_power);
        row_of_line.push_back(grid.size() + p);
    }
    sys.n_state = line_freq.size();
    for (std::size_t p = 0; p < config.pumps.size(); ++p) {
        const auto& pump = config.pumps[p];
        if (pump.direction != PumpDirection::Backward) continue;
        line_freq.push_back(pump.frequency);
        sys.loss.push_back(pump.attenuation);
        sys.bw_power.push_back(pump.input_power);
        sys.bw_loss.push_back(pump.attenuation);
        row_of_line.push_back(grid.size() + p);
    }
    sys.n_lines = line_freq.size();

    const bool tabulated = options.gain_model == GainModel::Tabulated;
    if (tabulated && !span.gain_table) {
        throw ValidationError({"tabulated Raman gain requested but the span has no gain table"});
    }
    auto gain = [&](double shift) {
        return tabulated ? (*span.gain_table)(shift) : span.raman_slope * shift;
    };

    sys.coupling.assign(sys.n_state * sys.n_lines, 0.0);
    for (std::size_t r = 0; r < sys.n_state; ++r) {
        const double fr = line_freq[r];
        for (std::size_t s = 0; s < sys.n_lines; ++s) {
            const double fs = line_freq[s];
            if (s == r || fs == fr) continue;
            if (fs > fr) {
                sys.coupling[r * sys.n_lines + s] = gain(fs - fr);
            } else {
                const double photon = options.photon_factors ? fr / fs : 1.0;
                sys.coupling[r * sys.n_lines + s] = -photon * gain(fr - fs);
            }
        }
    }

    frequencies.assign(grid.size() + config.pumps.size(), 0.0);
    kinds.assign(frequencies.size(), LineKind::Channel);
    for (std::size_t i = 0; i < grid.size(); ++i) frequencies[i] = grid[i].center_frequency;
    for (std::size_t p = 0; p < config.pumps.size(); ++p) {
        frequencies[grid.size() + p] = config.pumps[p].frequency;
        kinds[grid.size() + p] = config.pumps[p].direction == PumpDirection::Forward ? LineKind::ForwardPump
                                                                                   : LineKind::BackwardPump;
    }
    return sys;
}

/// Returns false (and the failing z) when the state stops being finite.
bool integrate(const RamanSystem& sys, const std::vector<double>& initial, int steps,
               std::vector<std::vector<double>>& trajectory, double& failed_at) {
    const std::size_t n = sys.n_state;
    const double h = sys.length / steps;
    std::vector<double> y = initial, k1(n), k2(n), k3(n), k4(n), tmp(n), all(sys.n_lines);
    trajectory.assign(static_cast<std::size_t>(steps) + 1, {});
    trajectory[0] = y;
    for (int s = 0; s < steps; ++s) {
        const double z = s * h;
        sys.rhs(z, y, all, k1);
        for (std::size_t r = 0; r < n; ++r) tmp[r] = y[r] + 0.5 * h * k1[r];
        sys.rhs(z + 0.5 * h, tmp, all, k2);
        for (std::size_t r = 0; r < n; ++r) tmp[r] = y[r] + 0.5 * h * k2[r];
        sys.rhs(z + 0.5 * h, tmp, all, k3);
        for (std::size_t r = 0; r < n; ++r) tmp[r] = y[r] + h * k3[r];
        sys.rhs(z + h, tmp, all, k4);
        for (std::size_t r = 0; r < n; ++r) {
            y[r] += h / 6.0 * (k1[r] + 2.0 * k2[r] + 2.0 * k3[r] + k4[r]);
            if (!std::isfinite(y[r]) || y[r] <= 0.0) {
                failed_at = z + h;
                return false;
            }
        }
        trajectory[static_cast<std::size_t>(s) + 1] = y;
    }
    return true;
}

}  // namespace

PowerEvolution solve_power_evolution(const LinkConfig& config, std::size_t span_index,
                                     const SolverOptions& options) {
    validate_link(config);
    if (options.steps < 100) throw ValidationError({"solver needs at least 100 steps per span"});
    if (span_index >= static_cast<std::size_t>(config.span_count)) {
        throw ValidationError({"span index " + std::to_string(span_index) + " out of range"});
    }

    std::vector<double> frequencies, initial;
    std::vector<LineKind> kinds;
    std::vector<std::size_t> row_of_line;
    const RamanSystem sys = build_system(config, span_index, options, frequencies, kinds, initial, row_of_line);

    int steps = options.steps;
    std::vector<std::vector<double>> trajectory;
    double failed_at = 0.0;
    int attempt = 0;
    while (!integrate(sys, initial, steps, trajectory, failed_at)) {
        if (++attempt > options.max_refinements) {
            throw DivergenceError("Raman integration diverged at z = " + std::to_string(failed_at) + " m after " +
                                      std::to_string(steps) + " steps",
                                  failed_at);
        }
        steps *= 2;
    }

    // Sample on the requested grid; a refined run is decimated back.
    const int stride = steps / options.steps;
    std::vector<double> z(static_cast<std::size_t>(options.steps) + 1);
    for (std::size_t c = 0; c < z.size(); ++c) z[c] = config.span.length * static_cast<double>(c) / options.steps;
    z.back() = config.span.length;

    PowerEvolution out(z, frequencies, kinds);
    std::vector<double> all(sys.n_lines);
    for (std::size_t c = 0; c < z.size(); ++c) {
        const auto& y = trajectory[c * static_cast<std::size_t>(stride)];
        for (std::size_t r = 0; r < sys.n_state; ++r) all[r] = y[r];
        sys.backward_powers(z[c], all);
        for (std::size_t line = 0; line < sys.n_lines; ++line) out.at(row_of_line[line], c) = all[line];
    }
    return out;
}

std::vector<double> normalized_profile(const PowerEvolution& evolution, std::size_t channel_index) {
    if (channel_index >= evolution.channel_count()) {
        throw ValidationError({"channel index " + std::to_string(channel_index) + " out of range"});
    }
    const auto row = evolution.row(channel_index);
    const double p0 = row.front();
    std::vector<double> rho(row.size());
    for (std::size_t c = 0; c < row.size(); ++c) rho[c] = row[c] / p0;
    rho.front() = 1.0;
    return rho;
}

void write_power_evolution_csv(std::ostream& os, const PowerEvolution& evolution) {
    os << "z_m";
    for (double f : evolution.frequencies()) os << ",P_" << format_number(f) << "_Hz";
    os << '\n';
    for (std::size_t c = 0; c < evolution.cols(); ++c) {
        os << format_number(evolution.z()[c]);
        for (std::size_t r = 0; r < evolution.rows(); ++r) os << ',' << format_number(evolution.at(r, c));
        os << '\n';
    }
}

}  // namespace ramannli
