#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "ramannli/link.hpp"
#include "ramannli/profile.hpp"

namespace ramannli {

/// One exponential of the expanded profile, indexed by (l1, l2).
struct ExponentTerm {
    int l1 = 0;
    int l2 = 0;
    double upsilon = 0.0;
    double alpha_l = 0.0;  ///< alpha + l1 alpha_f - l2 alpha_b
    double kappa_f = 0.0;  ///< exp(-(alpha + l1 alpha_f) L)
    double kappa_b = 0.0;  ///< exp(-l2 alpha_b L)
};

struct ClosedFormTerms {
    double t_f = 0.0;
    double t_b = 0.0;
    double t_total = 0.0;
    double alpha = 0.0;
    double length = 0.0;
    std::array<ExponentTerm, 3> terms;  ///< (0,0), (1,0), (0,1)
};

/// Throws DegenerateError when |T| < 1e-12.
ClosedFormTerms closed_form_terms(const ProfileParams& params, const ProfileContext& ctx, double f_i, double length);

/// x(zeta) = sum Upsilon exp(-(l1 alpha_f zeta + l2 alpha_b (L - zeta))); x(0) = 1.
double tilt_reconstruction(const ClosedFormTerms& terms, double zeta);
/// Taylor profile rebuilt from the terms: e^{-alpha zeta} x(zeta).
double profile_from_terms(const ClosedFormTerms& terms, double zeta);

struct PhaseMismatch {
    double phi_i = 0.0;   ///< 1/(m Hz^2)
    double phi_ik = 0.0;  ///< 1/(m Hz); zero when no interferer was given
};

/// Frequencies are absolute; they are taken relative to span.dispersion_reference.
/// Throws DegenerateError when an interferer is given and |phi_ik| < 1e-30.
PhaseMismatch phase_mismatch(const FiberSpan& span, double f_i, std::optional<double> f_k = std::nullopt);

/// Closed-form link function (m^2) for phase mismatch `phi` (1/m).
double mu_closed(const ClosedFormTerms& terms, double phi);

/// Per-pair XPM efficiency (1/W^2), already carrying (P_k/P_i)^2.
double eta_xpm_pair(const ClosedFormTerms& terms, double phi_ik, double bandwidth_i, double bandwidth_k,
                    double power_ratio, double gamma);

/// SPM efficiency (1/W^2) including the n^{1+epsilon} coherence factor.
double eta_spm(const ClosedFormTerms& terms, double phi_i, double bandwidth_i, double gamma, int n = 1,
               double epsilon = 0.0);

struct ChannelNli {
    std::size_t channel = 0;
    double frequency = 0.0;
    double power = 0.0;     ///< reference launch power P_i (first span), W
    double eta_spm = 0.0;   ///< 1/W^2, accumulated over spans
    double eta_xpm = 0.0;
    double eta_total = 0.0;
    double snr_nli = 0.0;
    double snr_ase = 0.0;
    double snr_trx = 0.0;
    double snr_total = 0.0;
};

struct NliReport {
    std::vector<ChannelNli> channels;
    /// (i, k) pairs skipped because phi_ik vanished.
    std::vector<std::pair<std::size_t, std::size_t>> degenerate_pairs;
};

/// Closed-form eta of every channel, accumulated over all spans; the fitted
/// profile of `fit` is used for every span.
NliReport eta_total(const LinkConfig& config, const FitReport& fit);

/// Fills the SNR fields: SNR_NLI = 1/(eta P_i^2) and the reciprocal sum.
NliReport assemble_snr(NliReport report, const SnrBudget& budget);

double to_db(double linear);

void write_nli_report_csv(std::ostream& os, const NliReport& report);
void write_nli_report_json(std::ostream& os, const NliReport& report);

}  // namespace ramannli
