#include "commands.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "ramannli/closed_form.hpp"
#include "ramannli/comparison.hpp"
#include "ramannli/errors.hpp"
#include "ramannli/report_io.hpp"

namespace ramannli::cli {

namespace {

std::filesystem::path out_dir(const Scenario& sc, const CommandOptions& opt) { return opt.out ? *opt.out : sc.output_dir; }

SolverOptions solver_options(const Scenario& sc, const CommandOptions& opt) {
    auto s = sc.solver;
    if (opt.steps) s.steps = *opt.steps;
    if (s.steps < 100) throw ValidationError({"--steps must be at least 100"});
    return s;
}

FitReport solve_and_fit(const Scenario& sc, const CommandOptions& opt) {
    const auto evo = solve_power_evolution(sc.link, 0, solver_options(sc, opt));
    return fit_profile(evo, sc.link, sc.fit);
}

std::string fixed(double v, int digits = 3) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

}  // namespace

SweepRange parse_sweep(const std::string& text) {
    SweepRange r;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &r.lo, &r.hi, &r.step, &tail) != 3) {
        throw ParseError("--sweep expects lo:hi:step in dB, got '" + text + "'");
    }
    if (!(r.step > 0.0) || !(r.hi >= r.lo)) throw ParseError("--sweep needs step > 0 and hi >= lo");
    return r;
}

int cmd_solve(const Scenario& sc, const CommandOptions& opt, std::ostream& log) {
    const auto evo = solve_power_evolution(sc.link, 0, solver_options(sc, opt));
    std::ostringstream csv;
    write_power_evolution_csv(csv, evo);
    const auto path = out_dir(sc, opt) / "power_evolution.csv";
    write_text_file(path, csv.str());
    log << "solve: " << evo.rows() << " lines x " << evo.cols() << " samples -> " << path.string() << '\n';
    return kOk;
}

int cmd_fit(const Scenario& sc, const CommandOptions& opt, std::ostream& log) {
    const auto fit = solve_and_fit(sc, opt);
    std::ostringstream js;
    write_fit_report_json(js, fit);
    const auto path = out_dir(sc, opt) / "fit_report.json";
    write_text_file(path, js.str());
    std::size_t unconverged = 0;
    for (const auto& c : fit.channels) unconverged += c.converged ? 0 : 1;
    log << "fit: " << fit.channels.size() << " channels, max RMS residual " << fixed(fit.max_rms_db(), 4) << " dB";
    if (unconverged) log << ", " << unconverged << " not converged";
    log << " -> " << path.string() << '\n';
    return kOk;
}

int cmd_nli(const Scenario& sc, const CommandOptions& opt, std::ostream& log) {
    const auto fit = solve_and_fit(sc, opt);
    const auto report = assemble_snr(eta_total(sc.link, fit), sc.budget);
    std::ostringstream csv, js;
    write_nli_report_csv(csv, report);
    write_nli_report_json(js, report);
    const auto dir = out_dir(sc, opt);
    write_text_file(dir / "nli_report.csv", csv.str());
    write_text_file(dir / "nli_report.json", js.str());
    double worst = INFINITY;
    for (const auto& c : report.channels) worst = std::min(worst, to_db(c.snr_total));
    log << "nli: " << report.channels.size() << " channels, worst SNR " << fixed(worst) << " dB";
    if (!report.degenerate_pairs.empty()) log << ", " << report.degenerate_pairs.size() << " degenerate pairs skipped";
    log << " -> " << (dir / "nli_report.csv").string() << '\n';
    return kOk;
}

int cmd_compare(const Scenario& sc, const CommandOptions& opt, std::ostream& log) {
    const auto fit = solve_and_fit(sc, opt);
    CompareOptions co;
    co.oracle = sc.oracle;
    const auto rep = compare_closed_form(sc.link, fit, co);
    std::ostringstream csv, pairs;
    write_comparison_csv(csv, rep);
    write_pair_comparison_csv(pairs, rep);
    const auto dir = out_dir(sc, opt);
    write_text_file(dir / "compare_report.csv", csv.str());
    write_text_file(dir / "compare_pairs.csv", pairs.str());
    const double worst = rep.max_channel_delta_db();
    log << "compare: max |delta| " << fixed(worst, 4) << " dB per channel, " << fixed(rep.max_pair_delta_db(3.0), 4)
        << " dB for pairs >= 3 bandwidths apart\n";
    if (opt.gate_db) {
        const bool pass = worst <= *opt.gate_db;
        log << "gate " << fixed(*opt.gate_db, 4) << " dB: " << (pass ? "PASS" : "FAIL") << '\n';
        if (!pass) return kGate;
    }
    return kOk;
}

int cmd_sweep(const Scenario& sc, const CommandOptions& opt, std::ostream& log) {
    // The profile is fitted once at the nominal launch power and held fixed.
    const auto fit = solve_and_fit(sc, opt);
    std::ostringstream csv;
    csv << "offset_dB,channel,frequency_Hz,launch_power_dBm,snr_nli_dB,snr_dB\n";
    const auto& r = opt.sweep;
    const int count = static_cast<int>(std::floor((r.hi - r.lo) / r.step + 1e-9)) + 1;
    for (int s = 0; s < count; ++s) {
        const double offset = r.lo + s * r.step;
        const double scale = std::pow(10.0, offset / 10.0);
        LinkConfig link = sc.link;
        for (auto& ch : link.grid.channels) {
            for (auto& p : ch.launch_power_per_span) p *= scale;
        }
        const auto rep = assemble_snr(eta_total(link, fit), sc.budget);
        for (const auto& c : rep.channels) {
            csv << format_number(offset) << ',' << c.channel << ',' << format_number(c.frequency) << ','
                << format_number(10.0 * std::log10(c.power / 1e-3)) << ',' << format_number(to_db(c.snr_nli)) << ','
                << format_number(to_db(c.snr_total)) << '\n';
        }
    }
    const auto path = out_dir(sc, opt) / "sweep.csv";
    write_text_file(path, csv.str());
    log << "sweep: " << count << " launch-power offsets -> " << path.string() << '\n';
    return kOk;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Closed-form NLI estimation for Raman-amplified wideband links"};
    std::string command;
    std::string scenario_path;
    std::string out_path;
    std::string sweep_text = "-4:4:1";
    double gate = 0.0;
    int steps = 0;
    app.add_option("command", command, "solve | fit | nli | compare | sweep")
        ->required()
        ->check(CLI::IsMember({"solve", "fit", "nli", "compare", "sweep"}));
    app.add_option("--scenario", scenario_path, "scenario file (JSON)")->required();
    auto* out_opt = app.add_option("--out", out_path, "output directory");
    auto* gate_opt = app.add_option("--gate-db", gate, "compare: fail (exit 5) above this per-channel |delta| in dB");
    auto* steps_opt = app.add_option("--steps", steps, "RK4 steps per span (>= 100)");
    app.add_option("--sweep", sweep_text, "sweep: lo:hi:step launch-power offset in dB");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kParse;
    }

    try {
        CommandOptions opt;
        if (*out_opt) opt.out = out_path;
        if (*gate_opt) opt.gate_db = gate;
        if (*steps_opt) opt.steps = steps;
        opt.sweep = parse_sweep(sweep_text);
        const auto sc = parse_scenario(scenario_path);
        if (command == "solve") return cmd_solve(sc, opt, out);
        if (command == "fit") return cmd_fit(sc, opt, out);
        if (command == "nli") return cmd_nli(sc, opt, out);
        if (command == "compare") return cmd_compare(sc, opt, out);
        return cmd_sweep(sc, opt, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        switch (e.error_class()) {
            case ErrorClass::Parse: return kParse;
            case ErrorClass::Validation: return kValidation;
            case ErrorClass::Numerical: return kNumerical;
            case ErrorClass::Gate: return kGate;
        }
        return kNumerical;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    }
}

}  // namespace ramannli::cli
