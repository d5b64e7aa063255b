// Acceptance gates. `ramannli_acceptance N` runs criterion N, no argument runs
// all of them. One PASS/FAIL line per criterion; exit status 1 on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "ramannli/closed_form.hpp"
#include "ramannli/comparison.hpp"
#include "ramannli/errors.hpp"
#include "ramannli/identities.hpp"
#include "ramannli/oracle.hpp"
#include "ramannli/profile.hpp"
#include "ramannli/raman_solver.hpp"
#include "ramannli/scenario.hpp"
#include "ramannli/units.hpp"

using namespace ramannli;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string data_file(const char* name) { return std::string(RAMANNLI_TEST_DATA) + "/" + name; }

bool report(int n, const char* name, bool pass, const std::string& detail) {
    std::printf("criterion %d %s: %s (%s)\n", n, name, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    return pass;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

FitReport reference_fit(const Scenario& sc) {
    const auto evo = solve_power_evolution(sc.link, 0, sc.solver);
    return fit_profile(evo, sc.link, sc.fit);
}

// 1: closed-form link function against adaptive quadrature of the same profile.
bool link_function() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(1);
    const double a0 = convert_units(0.2, "dB/km");
    std::uniform_real_distribution<double> ua(0.2, 5.0), uc(-3.0, 3.0), uf(191.4e12, 195.4e12), ul(-7.0, -2.0),
        upb(0.0, 1.0), upf(0.0, 0.3), ulen(40e3, 120e3);
    QuadratureSpec spec;
    spec.rel_tol = 1e-12;
    double worst = 0.0;
    int draws = 0;
    for (int n = 0; n < 200; ++n) {
        const bool pumped = n % 2 == 0;
        const ProfileContext ctx{0.04 + (pumped ? upf(rng) : 0.0), pumped ? upb(rng) : 0.0,
                                 pumped ? 206.6e12 : 193.4e12};
        const ProfileParams p{ua(rng) * a0, uc(rng) * 2.8e-17, pumped ? uc(rng) * 2.8e-17 : 0.0, ua(rng) * a0,
                              ua(rng) * a0};
        const double f = uf(rng);
        const double len = ulen(rng);
        const double phi = (n % 4 < 2 ? 1.0 : -1.0) * std::pow(10.0, ul(rng));
        const ProfileField rho = [&](double z, double) { return eval_profile_taylor(p, ctx, z, f, len); };
        ClosedFormTerms terms;
        try {
            terms = closed_form_terms(p, ctx, f, len);
        } catch (const DegenerateError&) {
            continue;
        }
        bool positive = true;
        for (int k = 0; k <= 64 && positive; ++k) positive = rho(len * k / 64.0, f) > 0.0;
        if (!positive) continue;
        const auto num = mu_numeric(f, f, f, rho, phi, len, spec);
        const double closed = mu_closed(terms, phi);
        worst = std::max(worst, std::abs(closed - num.value) / num.value);
        ++draws;
    }
    const double t = seconds_since(t0);
    return report(1, "link function", worst <= 1e-9 && draws >= 100 && t <= 30.0,
                  fmt("%.0f draws, max rel %.2e <= 1e-9, %.1f s <= 30 s", draws, worst, t));
}

// 2: integral identities and algebraic rules.
bool identity_suite() {
    const auto t0 = Clock::now();
    IdentityOptions o;
    o.draws = 100;
    const auto r = verify_identities(o);
    const double t = seconds_since(t0);
    double worst = 0.0;
    for (const auto& c : r.checks) worst = std::max(worst, c.rel_error);
    std::size_t fewest = std::numeric_limits<std::size_t>::max();
    for (const char* name : {"atan-integral", "sin2-integral", "asinh-integral", "cos-tail-integral",
                             "sin-tail-integral", "multinomial", "complex-modulus", "complex-cross-sum"}) {
        fewest = std::min(fewest, r.count(name));
    }
    for (const auto* f : r.failures()) {
        std::printf("  failed %s [%s] rel %.3e\n", f->name.c_str(), f->parameters.c_str(), f->rel_error);
    }
    return report(2, "identity suite", r.all_passed() && fewest >= 100 && t <= 60.0,
                  fmt("%.0f checks, >= %.0f draws each, max rel %.2e <= 1e-8, %.1f s <= 60 s",
                      static_cast<double>(r.checks.size()), static_cast<double>(fewest), worst, t));
}

// 3: pump-free pipeline against a single-exponential formula written here.
bool lumped_reduction() {
    const auto sc = parse_scenario(data_file("reference_unpumped.json"));
    const auto fit = reference_fit(sc);
    const auto nli = eta_total(sc.link, fit);
    const auto& s = sc.link.span;
    const auto& g = sc.link.grid;
    const double pi = 3.14159265358979323846;
    double worst = 0.0;
    bool shape = g.size() == 9;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double a = s.attenuation(g[i].center_frequency);
        const double e2 = std::exp(-2.0 * a * s.length);
        const double fi = g[i].center_frequency - s.dispersion_reference;
        const double b = g[i].bandwidth;
        const double phi_i = -4.0 * pi * pi * (s.beta2 + 2.0 * pi * s.beta3 * fi);
        const double sgn_i = phi_i > 0 ? 1.0 : -1.0;
        const double spm = 16.0 / 27.0 * pi * s.gamma * s.gamma / (b * b * phi_i * a) *
                           (2.0 * (1.0 + e2) * std::asinh(3.0 * phi_i * b * b / (8.0 * pi * a)) -
                            8.0 * sgn_i * e2 * std::log(std::sqrt(std::abs(phi_i) * s.length / (2.0 * pi)) * b));
        double xpm = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) {
            if (k == i) continue;
            const double fk = g[k].center_frequency - s.dispersion_reference;
            const double phi = -4.0 * pi * pi * (fk - fi) * (s.beta2 + pi * s.beta3 * (fi + fk));
            const double ratio = g[k].launch_power() / g[i].launch_power();
            xpm += 32.0 / 27.0 * s.gamma * s.gamma * ratio * ratio / (phi * g[k].bandwidth * a) *
                   (2.0 * (1.0 + e2) * std::atan(phi * b / (2.0 * a)) - 2.0 * pi * (phi > 0 ? 1.0 : -1.0) * e2);
        }
        worst = std::max({worst, std::abs(nli.channels[i].eta_spm / spm - 1.0),
                          std::abs(nli.channels[i].eta_xpm / xpm - 1.0)});
        shape = shape && fit.channels[i].params.c_f == 0.0 && fit.channels[i].params.c_b == 0.0;
    }
    return report(3, "lumped reduction", shape && worst <= 1e-9,
                  fmt("%.0f channels, max rel %.2e <= 1e-9", static_cast<double>(g.size()), worst));
}

// 4: profile fit residual on the reference link.
bool fit_gate() {
    const auto sc = parse_scenario(data_file("reference_pumped.json"));
    const auto fit = reference_fit(sc);
    std::size_t worst_ch = 0;
    for (const auto& c : fit.channels) {
        if (c.rms_db > fit.channels[worst_ch].rms_db) worst_ch = c.channel;
    }
    const double worst = fit.max_rms_db();
    return report(4, "profile fit", worst <= 0.1,
                  fmt("worst channel %.0f at %.3f THz, RMS %.4f dB <= 0.1 dB", static_cast<double>(worst_ch),
                      fit.channels[worst_ch].frequency * 1e-12, worst));
}

// 5: closed form against the 2D quadrature oracle on the reference link.
bool oracle_gate() {
    const auto t0 = Clock::now();
    const auto sc = parse_scenario(data_file("reference_pumped.json"));
    const auto fit = reference_fit(sc);
    CompareOptions co;
    co.oracle = sc.oracle;
    const auto rep = compare_closed_form(sc.link, fit, co);
    const double t = seconds_since(t0);
    bool converged = true;
    for (const auto& p : rep.pairs) converged = converged && p.converged && !p.degenerate;
    const double ch = rep.max_channel_delta_db();
    const double far = rep.max_pair_delta_db(3.0);
    return report(5, "closed form vs oracle", converged && ch <= 0.5 && far <= 0.2 && t <= 600.0,
                  fmt("per channel %.4f dB <= 0.5, pairs >= 3B %.4f dB <= 0.2, %.0f s <= 600 s", ch, far, t) +
                      (converged ? "" : ", oracle not converged"));
}

// 6: closed-form NLI of a 100-channel link.
bool performance() {
    LinkConfig c;
    c.span.length = 80e3;
    c.span.beta2 = convert_units(-21.7, "ps^2/km");
    c.span.beta3 = convert_units(0.14, "ps^3/km");
    c.span.gamma = convert_units(1.3, "1/(W*km)");
    c.span.attenuation = AttenuationProfile(convert_units(0.2, "dB/km"));
    c.span.raman_slope = convert_units(0.028, "1/(W*km*THz)");
    c.span.dispersion_reference = 193.4e12;
    c.grid = make_uniform_grid(100, 193.4e12, 100e9, 100e9, 1e-3);
    c.pumps.push_back({206.6e12, 0.6, PumpDirection::Backward, convert_units(0.25, "dB/km")});
    const auto fit = fit_profile(solve_power_evolution(c, 0), c);
    double sink = 0.0;
    sink += eta_total(c, fit).channels[0].eta_total;  // warm-up
    std::vector<double> times;
    for (int r = 0; r < 21; ++r) {
        const auto t0 = Clock::now();
        const auto rep = eta_total(c, fit);
        times.push_back(seconds_since(t0));
        sink += rep.channels[50].eta_total;
    }
    std::sort(times.begin(), times.end());
    const double median = times[times.size() / 2];
    return report(6, "performance", median <= 10e-3 && std::isfinite(sink),
                  fmt("100 channels, median %.3f ms <= 10 ms (%.2f us/channel)", median * 1e3, median * 1e4));
}

// 7: SNR arithmetic and the launch-power sweep slope.
bool snr_budget() {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ue(-2.0, 4.0), up(-5.0, -1.0), us(1.0, 4.0);
    double worst = 0.0;
    for (int n = 0; n < 1000; ++n) {
        NliReport r;
        SnrBudget b;
        b.snr_ase.clear();
        b.snr_trx.clear();
        for (std::size_t i = 0; i < 8; ++i) {
            ChannelNli c;
            c.channel = i;
            c.power = std::pow(10.0, up(rng));
            c.eta_total = std::pow(10.0, ue(rng));
            r.channels.push_back(c);
            b.snr_ase.push_back(std::pow(10.0, us(rng)));
            b.snr_trx.push_back(n % 3 == 0 ? std::numeric_limits<double>::infinity() : std::pow(10.0, us(rng)));
        }
        const auto out = assemble_snr(r, b);
        for (std::size_t i = 0; i < 8; ++i) {
            const double nli = r.channels[i].eta_total * r.channels[i].power * r.channels[i].power;
            const double inv = nli + 1.0 / b.snr_ase[i] + 1.0 / b.snr_trx[i];
            worst = std::max(worst, std::abs(out.channels[i].snr_total * inv - 1.0));
        }
    }

    const auto sc = parse_scenario(data_file("small_pumped.json"));
    const auto fit = reference_fit(sc);
    double slope_err = 0.0;
    std::vector<double> prev;
    for (int s = -4; s <= 4; ++s) {
        LinkConfig link = sc.link;
        for (auto& ch : link.grid.channels) {
            for (auto& p : ch.launch_power_per_span) p *= std::pow(10.0, s / 10.0);
        }
        const auto rep = assemble_snr(eta_total(link, fit), sc.budget);
        std::vector<double> db;
        for (const auto& c : rep.channels) db.push_back(to_db(c.snr_nli));
        if (!prev.empty()) {
            for (std::size_t i = 0; i < db.size(); ++i) slope_err = std::max(slope_err, std::abs(db[i] - prev[i] + 2.0));
        }
        prev = db;
    }
    return report(7, "SNR budget", worst <= 1e-12 && slope_err <= 0.01,
                  fmt("reciprocal sum max rel %.2e <= 1e-12, sweep slope off by %.2e dB/dB <= 0.01", worst, slope_err));
}

// 8: RK4 convergence order from step halving.
bool solver_order() {
    LinkConfig c;
    c.span.length = 80e3;
    c.span.beta2 = convert_units(-21.7, "ps^2/km");
    c.span.gamma = 1.3e-3;
    c.span.attenuation = AttenuationProfile(convert_units(0.5, "dB/km"));
    c.span.raman_slope = 2.8e-17;
    c.span.dispersion_reference = 193.4e12;
    c.grid = make_uniform_grid(3, 193.4e12, 2e12, 100e9, 0.5);
    SolverOptions o;
    o.steps = 6400;
    const auto ref = solve_power_evolution(c, 0, o);
    std::vector<double> lh, le;
    for (int steps : {100, 200, 400, 800}) {
        o.steps = steps;
        const auto evo = solve_power_evolution(c, 0, o);
        const std::size_t stride = 6400 / static_cast<std::size_t>(steps);
        double e = 0.0;
        for (std::size_t r = 0; r < evo.rows(); ++r) {
            for (std::size_t k = 0; k < evo.cols(); ++k) {
                e = std::max(e, std::abs(evo.at(r, k) / ref.at(r, k * stride) - 1.0));
            }
        }
        lh.push_back(std::log(c.span.length / steps));
        le.push_back(std::log(e));
    }
    const double n = static_cast<double>(lh.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < lh.size(); ++k) {
        sx += lh[k];
        sy += le[k];
        sxx += lh[k] * lh[k];
        sxy += lh[k] * le[k];
    }
    const double order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return report(8, "RK4 order", std::abs(order - 4.0) <= 0.3,
                  fmt("fitted order %.3f, |order - 4| <= 0.3, errors %.2e .. %.2e", order, std::exp(le.front()),
                      std::exp(le.back())));
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::function<bool()>> criteria{link_function, identity_suite, lumped_reduction, fit_gate,
                                                      oracle_gate,   performance,    snr_budget,       solver_order};
    std::vector<int> which;
    if (argc > 1) {
        const int n = std::atoi(argv[1]);
        if (n < 1 || n > static_cast<int>(criteria.size())) {
            std::fprintf(stderr, "usage: %s [1-%zu]\n", argv[0], criteria.size());
            return 2;
        }
        which.push_back(n);
    } else {
        for (int n = 1; n <= static_cast<int>(criteria.size()); ++n) which.push_back(n);
    }
    bool all = true;
    for (int n : which) {
        try {
            all = criteria[static_cast<std::size_t>(n - 1)]() && all;
        } catch (const std::exception& e) {
            report(n, "exception", false, e.what());
            all = false;
        }
    }
    return all ? 0 : 1;
}
