#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "ramannli/link.hpp"

namespace ramannli {

enum class GainModel { Triangular, Tabulated };

struct SolverOptions {
    int steps = 1000;  ///< RK4 steps per span, >= 100
    /// Scale a donor's loss by f_donor/f_acceptor. Off reproduces the
    /// equal-photon-energy approximation used for the analytic profile.
    bool photon_factors = true;
    GainModel gain_model = GainModel::Triangular;
    /// Step-count doublings attempted after a non-finite state.
    int max_refinements = 3;
};

enum class LineKind { Channel, ForwardPump, BackwardPump };

/// Sampled power of every line along one span. Rows are the channels (grid
/// order) followed by the pumps (config order); columns follow `z`.
class PowerEvolution {
public:
    PowerEvolution() = default;
    PowerEvolution(std::vector<double> z, std::vector<double> frequencies, std::vector<LineKind> kinds);

    const std::vector<double>& z() const { return z_; }
    const std::vector<double>& frequencies() const { return frequencies_; }
    const std::vector<LineKind>& kinds() const { return kinds_; }
    std::size_t rows() const { return frequencies_.size(); }
    std::size_t cols() const { return z_.size(); }
    std::size_t channel_count() const;
    double length() const { return z_.back(); }

    double& at(std::size_t row, std::size_t col) { return powers_[row * cols() + col]; }
    double at(std::size_t row, std::size_t col) const { return powers_[row * cols() + col]; }
    std::span<const double> row(std::size_t r) const { return {powers_.data() + r * cols(), cols()}; }

private:
    std::vector<double> z_;
    std::vector<double> frequencies_;
    std::vector<LineKind> kinds_;
    std::vector<double> powers_;
};

/// Fixed-step RK4 integration of the coupled Raman equations over span
/// `span_index`. Channels and forward pumps are integrated; backward pumps
/// follow the undepleted profile P(L) exp(-alpha_p (L - z)).
PowerEvolution solve_power_evolution(const LinkConfig& config, std::size_t span_index,
                                     const SolverOptions& options = {});

/// rho(z, f_i) = P(z, f_i) / P(0, f_i) for one channel row.
std::vector<double> normalized_profile(const PowerEvolution& evolution, std::size_t channel_index);

/// CSV: z_m, then one column per line labelled by its frequency in Hz.
void write_power_evolution_csv(std::ostream& os, const PowerEvolution& evolution);

}  // namespace ramannli
