#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "ramannli/link.hpp"
#include "ramannli/raman_solver.hpp"

namespace ramannli {

/// Per-channel parameters of the semi-analytical profile.
struct ProfileParams {
    double alpha = 0.0;    ///< Np/m
    double c_f = 0.0;      ///< 1/(W m Hz)
    double c_b = 0.0;      ///< 1/(W m Hz)
    double alpha_f = 0.0;  ///< Np/m
    double alpha_b = 0.0;  ///< Np/m

    std::array<double, 5> as_array() const { return {alpha, c_f, c_b, alpha_f, alpha_b}; }
    static ProfileParams from_array(const std::array<double, 5>& v) { return {v[0], v[1], v[2], v[3], v[4]}; }
};

/// Quantities shared by every channel of one span.
struct ProfileContext {
    double p_f = 0.0;    ///< total forward power (channels + forward pumps), W
    double p_b = 0.0;    ///< total backward pump power, W
    double f_hat = 0.0;  ///< mean pump frequency, or band centre without pumps, Hz
};

ProfileContext profile_context(const LinkConfig& config, std::size_t span_index = 0);

double effective_length(double alpha_f, double z);
double backward_effective_length(double alpha_b, double z, double length);

/// e^{-alpha z} [1 - (C_f P_f Leff(z) + C_b P_b Leff~(z)) (f_i - f_hat)]
double eval_profile_taylor(const ProfileParams& params, const ProfileContext& ctx, double z, double f_i,
                           double length);

/// Pre-linearisation form e^{-alpha z} x B e^{-x (f - f_hat)} / (2 sinh(x B / 2)),
/// x = C_f P_f Leff + C_b P_b Leff~, B the total optical bandwidth.
double eval_profile_exact(const ProfileParams& params, const ProfileContext& ctx, double z, double f_i,
                          double length, double total_bandwidth);

struct FitOptions {
    int max_iterations = 200;
    double step_tol = 1e-10;  ///< relative parameter step
    double cost_tol = 1e-12;  ///< change of the summed squared dB residual
    /// Starting values of alpha_b in units of the intrinsic loss; the first
    /// start is the plain physical guess, the rest guard against the shallow
    /// alpha_b valley.
    std::vector<double> alpha_b_starts{1.0, 2.0, 3.0, 4.0, 5.0};
    /// Multipliers applied to every initial guess (robustness studies).
    std::array<double, 5> initial_scale{1.0, 1.0, 1.0, 1.0, 1.0};
};

struct ChannelFit {
    std::size_t channel = 0;
    double frequency = 0.0;
    ProfileParams params;
    double rms_db = 0.0;
    int iterations = 0;
    bool converged = false;
};

struct FitReport {
    ProfileContext context;
    double length = 0.0;
    std::vector<ChannelFit> channels;

    double max_rms_db() const;
};

/// Bounded Levenberg-Marquardt fit of one channel's sampled rho(z) in dB.
/// `alpha_phys` and `raman_slope` set both the initial guess and the bounds.
ChannelFit fit_channel(std::span<const double> z, std::span<const double> rho, double f_i, double alpha_phys,
                       double raman_slope, const ProfileContext& ctx, double length, const FitOptions& options = {});

/// Fits every channel row of `evolution`; needs at least 50 z samples.
FitReport fit_profile(const PowerEvolution& evolution, const LinkConfig& config, const FitOptions& options = {},
                      std::size_t span_index = 0);

void write_fit_report_json(std::ostream& os, const FitReport& report);

}  // namespace ramannli
