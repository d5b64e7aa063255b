#include "ramannli/closed_form.hpp"

#include <cmath>
#include <ostream>

#include <json.hpp>

#include "ramannli/errors.hpp"
#include "ramannli/report_io.hpp"
#include "ramannli/units.hpp"

namespace ramannli {

namespace {

constexpr std::array<std::pair<int, int>, 3> kIndices{{{0, 0}, {1, 0}, {0, 1}}};

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

/// Products shared by the XPM and SPM sums for one index pair (l, l').
struct PairFactor {
    double weight;  // Upsilon Upsilon' / (alpha_l + alpha_l')
    double s, p, q;
    int l, lp;
};

struct TermTable {
    std::array<double, 3> alpha{};
    std::array<double, 3> decay{};  // exp(-|alpha_l L|)
    std::vector<PairFactor> pairs;
};

TermTable build_table(const ClosedFormTerms& t) {
    TermTable tab;
    for (std::size_t l = 0; l < 3; ++l) {
        tab.alpha[l] = t.terms[l].alpha_l;
        tab.decay[l] = std::exp(-std::abs(t.terms[l].alpha_l * t.length));
    }
    for (std::size_t l = 0; l < 3; ++l) {
        for (std::size_t lp = 0; lp < 3; ++lp) {
            const auto& a = t.terms[l];
            const auto& b = t.terms[lp];
            const double uu = a.upsilon * b.upsilon;
            if (uu == 0.0) continue;
            const double asum = a.alpha_l + b.alpha_l;
            if (asum == 0.0) {
                throw DegenerateError("closed form undefined: alpha_l + alpha_l' = 0 for a weighted term pair");
            }
            tab.pairs.push_back({uu / asum, a.kappa_f * b.kappa_f + a.kappa_b * b.kappa_b,
                                 a.kappa_f * b.kappa_b + a.kappa_b * b.kappa_f,
                                 a.kappa_f * b.kappa_b - a.kappa_b * b.kappa_f, static_cast<int>(l),
                                 static_cast<int>(lp)});
        }
    }
    return tab;
}

/// Sum over index pairs of weight * (2 S (m_l + m_l') + tail * [-P(..) - Q(..)]).
double bracket_sum(const TermTable& tab, const std::array<double, 3>& main, double tail, double phi) {
    const double sphi = sign(phi);
    double acc = 0.0;
    for (const auto& pf : tab.pairs) {
        const auto l = static_cast<std::size_t>(pf.l);
        const auto lp = static_cast<std::size_t>(pf.lp);
        const double el = tab.decay[l];
        const double elp = tab.decay[lp];
        const double cos_part = sign(tab.alpha[l]) * sphi * el + sign(tab.alpha[lp]) * sphi * elp;
        const double sin_part = -sphi * el + sphi * elp;
        acc += pf.weight * (2.0 * pf.s * (main[l] + main[lp]) + tail * (-pf.p * cos_part - pf.q * sin_part));
    }
    return acc;
}

}  // namespace

ClosedFormTerms closed_form_terms(const ProfileParams& p, const ProfileContext& ctx, double f_i, double length) {
    ClosedFormTerms out;
    const double d = f_i - ctx.f_hat;
    out.t_f = -ctx.p_f * p.c_f * d / p.alpha_f;
    out.t_b = -ctx.p_b * p.c_b * d / p.alpha_b;
    out.t_total = 1.0 + out.t_f - out.t_b * std::exp(-p.alpha_b * length);
    out.alpha = p.alpha;
    out.length = length;
    if (!(std::abs(out.t_total) >= 1e-12)) {
        throw DegenerateError("degenerate tilt: |T| < 1e-12, the fitted profile crosses zero");
    }
    for (std::size_t n = 0; n < 3; ++n) {
        const auto [l1, l2] = kIndices[n];
        auto& e = out.terms[n];
        e.l1 = l1;
        e.l2 = l2;
        e.upsilon = out.t_total * std::pow(-out.t_f / out.t_total, l1) * std::pow(out.t_b / out.t_total, l2);
        e.alpha_l = p.alpha + l1 * p.alpha_f - l2 * p.alpha_b;
        e.kappa_f = std::exp(-(p.alpha + l1 * p.alpha_f) * length);
        e.kappa_b = std::exp(-l2 * p.alpha_b * length);
    }
    return out;
}

double tilt_reconstruction(const ClosedFormTerms& t, double zeta) {
    const double alpha_f = t.terms[1].alpha_l - t.alpha;
    const double alpha_b = t.alpha - t.terms[2].alpha_l;
    double x = 0.0;
    for (const auto& e : t.terms) {
        x += e.upsilon * std::exp(-(e.l1 * alpha_f * zeta + e.l2 * alpha_b * (t.length - zeta)));
    }
    return x;
}

double profile_from_terms(const ClosedFormTerms& t, double zeta) {
    return std::exp(-t.alpha * zeta) * tilt_reconstruction(t, zeta);
}

PhaseMismatch phase_mismatch(const FiberSpan& span, double f_i, std::optional<double> f_k) {
    constexpr double c = 4.0 * kPi * kPi;
    const double fi = f_i - span.dispersion_reference;
    PhaseMismatch out;
    out.phi_i = -c * (span.beta2 + 2.0 * kPi * span.beta3 * fi);
    if (f_k) {
        const double fk = *f_k - span.dispersion_reference;
        out.phi_ik = -c * (fk - fi) * (span.beta2 + kPi * span.beta3 * (fi + fk));
        if (!(std::abs(out.phi_ik) >= 1e-30)) {
            throw DegenerateError("degenerate dispersion: |phi_ik| < 1e-30 for the channel pair");
        }
    }
    return out;
}

double mu_closed(const ClosedFormTerms& t, double phi) {
    const double L = t.length;
    const double c = std::cos(phi * L);
    const double s = std::sin(phi * L);
    const double phi2 = phi * phi;
    double mu = 0.0;
    for (const auto& a : t.terms) {
        for (const auto& b : t.terms) {
            const double uu = a.upsilon * b.upsilon;
            if (uu == 0.0) continue;
            const double aa = a.alpha_l * b.alpha_l + phi2;
            const double num = (a.kappa_f * b.kappa_f + a.kappa_b * b.kappa_b) * aa -
                               (a.kappa_f * b.kappa_b + a.kappa_b * b.kappa_f) * aa * c -
                               (a.kappa_f * b.kappa_b - a.kappa_b * b.kappa_f) * (a.alpha_l - b.alpha_l) * phi * s;
            mu += uu * num / ((a.alpha_l * a.alpha_l + phi2) * (b.alpha_l * b.alpha_l + phi2));
        }
    }
    return mu;
}

double eta_xpm_pair(const ClosedFormTerms& t, double phi_ik, double bandwidth_i, double bandwidth_k,
                    double power_ratio, double gamma) {
    const auto tab = build_table(t);
    std::array<double, 3> main{};
    for (std::size_t l = 0; l < 3; ++l) main[l] = std::atan(phi_ik * bandwidth_i / (2.0 * tab.alpha[l]));
    const double sum = bracket_sum(tab, main, kPi, phi_ik);
    return 32.0 / 27.0 * gamma * gamma * power_ratio * power_ratio * sum / (phi_ik * bandwidth_k);
}

double eta_spm(const ClosedFormTerms& t, double phi_i, double bandwidth_i, double gamma, int n, double epsilon) {
    if (phi_i == 0.0) throw DegenerateError("dispersion-free channel: phi_i = 0, SPM closed form undefined");
    const auto tab = build_table(t);
    const double b2 = bandwidth_i * bandwidth_i;
    std::array<double, 3> main{};
    for (std::size_t l = 0; l < 3; ++l) main[l] = std::asinh(3.0 * phi_i * b2 / (8.0 * kPi * tab.alpha[l]));
    const double tail = 4.0 * std::log(std::sqrt(std::abs(phi_i) * t.length / (2.0 * kPi)) * bandwidth_i);
    const double sum = bracket_sum(tab, main, tail, phi_i);
    return 16.0 / 27.0 * kPi * gamma * gamma * std::pow(static_cast<double>(n), 1.0 + epsilon) / b2 * sum / phi_i;
}

namespace {

/// Per-span SPM and XPM of channel i given the launch powers of span j.
void span_eta(const LinkConfig& cfg, const std::vector<ClosedFormTerms>& terms, const std::vector<TermTable>& tables,
              std::size_t i, std::size_t j, double& spm, double& xpm,
              std::vector<std::pair<std::size_t, std::size_t>>* degenerate) {
    const auto& grid = cfg.grid;
    const auto& span = cfg.span;
    const auto& tab = tables[i];
    const double bi = grid[i].bandwidth;
    const double pij = grid[i].launch_power(j);
    spm = eta_spm(terms[i], phase_mismatch(span, grid[i].center_frequency).phi_i, bi, span.gamma);
    xpm = 0.0;
    const double fi = grid[i].center_frequency - span.dispersion_reference;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (k == i) continue;
        const double fk = grid[k].center_frequency - span.dispersion_reference;
        const double phi = -4.0 * kPi * kPi * (fk - fi) * (span.beta2 + kPi * span.beta3 * (fi + fk));
        if (!(std::abs(phi) >= 1e-30)) {
            if (degenerate) degenerate->emplace_back(i, k);
            continue;
        }
        std::array<double, 3> main{};
        for (std::size_t l = 0; l < 3; ++l) main[l] = std::atan(phi * bi / (2.0 * tab.alpha[l]));
        const double ratio = grid[k].launch_power(j) / pij;
        xpm += ratio * ratio * bracket_sum(tab, main, kPi, phi) / (phi * grid[k].bandwidth);
    }
    xpm *= 32.0 / 27.0 * span.gamma * span.gamma;
}

}  // namespace

NliReport eta_total(const LinkConfig& cfg, const FitReport& fit) {
    validate_link(cfg);
    const auto& grid = cfg.grid;
    if (fit.channels.size() != grid.size()) throw ValidationError({"fit report does not cover every channel"});
    const double length = cfg.span.length;
    std::vector<ClosedFormTerms> terms;
    std::vector<TermTable> tables;
    terms.reserve(grid.size());
    tables.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        terms.push_back(closed_form_terms(fit.channels[i].params, fit.context, grid[i].center_frequency, length));
        tables.push_back(build_table(terms.back()));
    }

    const auto n = static_cast<std::size_t>(cfg.span_count);
    bool identical = true;
    for (const auto& ch : grid.channels) {
        for (std::size_t j = 1; j < n; ++j) identical = identical && ch.launch_power(j) == ch.launch_power(0);
    }
    const double coh = std::pow(static_cast<double>(n), cfg.coherence_epsilon);

    NliReport report;
    report.channels.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        auto& out = report.channels[i];
        out.channel = i;
        out.frequency = grid[i].center_frequency;
        out.power = grid[i].launch_power(0);
        const std::size_t spans_to_eval = identical ? 1 : n;
        for (std::size_t j = 0; j < spans_to_eval; ++j) {
            double spm = 0.0, xpm = 0.0;
            span_eta(cfg, terms, tables, i, j, spm, xpm, j == 0 ? &report.degenerate_pairs : nullptr);
            const double w = identical ? static_cast<double>(n) : std::pow(grid[i].launch_power(j) / out.power, 2);
            out.eta_spm += w * spm * coh;
            out.eta_xpm += w * xpm;
        }
        out.eta_total = out.eta_spm + out.eta_xpm;
    }
    return report;
}

NliReport assemble_snr(NliReport report, const SnrBudget& budget) {
    for (auto& c : report.channels) {
        c.snr_ase = budget.ase(c.channel);
        c.snr_trx = budget.trx(c.channel);
        if (!(c.snr_ase > 0.0) || !(c.snr_trx > 0.0)) {
            throw ValidationError({"non-positive SNR budget entry at channel index " + std::to_string(c.channel)});
        }
        if (!(c.eta_total >= 0.0) || !(c.power > 0.0)) {
            throw NumericalError("negative NLI efficiency at channel index " + std::to_string(c.channel));
        }
        c.snr_nli = 1.0 / (c.eta_total * c.power * c.power);
        c.snr_total = 1.0 / (1.0 / c.snr_nli + 1.0 / c.snr_ase + 1.0 / c.snr_trx);
    }
    return report;
}

double to_db(double linear) { return 10.0 * std::log10(linear); }

void write_nli_report_csv(std::ostream& os, const NliReport& report) {
    os << "channel,frequency_Hz,eta_spm_per_W2,eta_xpm_per_W2,eta_total_per_W2,snr_nli,snr_nli_dB,snr,snr_dB\n";
    for (const auto& c : report.channels) {
        os << c.channel << ',' << format_number(c.frequency) << ',' << format_number(c.eta_spm) << ','
           << format_number(c.eta_xpm) << ',' << format_number(c.eta_total) << ',' << format_number(c.snr_nli) << ','
           << format_number(to_db(c.snr_nli)) << ',' << format_number(c.snr_total) << ','
           << format_number(to_db(c.snr_total)) << '\n';
    }
}

void write_nli_report_json(std::ostream& os, const NliReport& report) {
    nlohmann::ordered_json j;
    auto& arr = j["channels"] = nlohmann::ordered_json::array();
    for (const auto& c : report.channels) {
        arr.push_back({{"channel", c.channel},
                       {"frequency_Hz", c.frequency},
                       {"power_W", c.power},
                       {"eta_spm_per_W2", c.eta_spm},
                       {"eta_xpm_per_W2", c.eta_xpm},
                       {"eta_total_per_W2", c.eta_total},
                       {"snr_nli", c.snr_nli},
                       {"snr_nli_dB", to_db(c.snr_nli)},
                       {"snr", c.snr_total},
                       {"snr_dB", to_db(c.snr_total)}});
    }
    auto& deg = j["degenerate_pairs"] = nlohmann::ordered_json::array();
    for (const auto& [i, k] : report.degenerate_pairs) deg.push_back({i, k});
    os << j.dump(2) << '\n';
}

}  // namespace ramannli
