#include "ramannli/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "ramannli/errors.hpp"
#include "ramannli/units.hpp"

namespace ramannli {

namespace {

using json = nlohmann::json;

/// Tracks the key path for error messages and maps it back to a line of
/// the source text (first occurrence of the innermost key).
class Context {
public:
    Context(std::string_view text, std::string_view source) : text_(text), source_(source) {}

    [[noreturn]] void fail(const std::string& path, const std::string& msg) const {
        throw ParseError(std::string(source_) + ":" + std::to_string(line_of(path)) + ": " + path + ": " + msg);
    }

    std::size_t line_of(const std::string& path) const {
        // Innermost object key of the path, e.g. "grid.channels[3].power" -> "power".
        std::string key = path.substr(path.find_last_of('.') == std::string::npos ? 0 : path.find_last_of('.') + 1);
        key = key.substr(0, key.find('['));
        const auto pos = text_.find("\"" + key + "\"");
        if (pos == std::string_view::npos) return 1;
        return 1 + static_cast<std::size_t>(std::count(text_.begin(), text_.begin() + static_cast<long>(pos), '\n'));
    }

private:
    std::string_view text_;
    std::string_view source_;
};

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void check_keys(const Context& ctx, const json& obj, const std::string& path,
                std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) ctx.fail(path, "expected an object");
    for (const auto& [k, v] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
            ctx.fail(join(path, k), "unknown key");
        }
    }
}

const json& require(const Context& ctx, const json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key)) ctx.fail(join(path, key), "missing required key");
    return obj.at(key);
}

/// "<number> <unit>" with the unit restricted to `allowed`.
double quantity(const Context& ctx, const json& v, const std::string& path, std::initializer_list<Unit> allowed) {
    if (!v.is_string()) ctx.fail(path, "expected a quantity string \"<number> <unit>\"");
    const auto s = v.get<std::string>();
    const auto space = s.find(' ');
    if (space == std::string::npos) ctx.fail(path, "quantity '" + s + "' has no unit");
    const std::string num = s.substr(0, space);
    std::string tag = s.substr(space + 1);
    tag.erase(0, tag.find_first_not_of(' '));
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), value);
    if (ec != std::errc() || ptr != num.data() + num.size() || !std::isfinite(value)) {
        ctx.fail(path, "malformed number '" + num + "'");
    }
    Unit unit{};
    try {
        unit = parse_unit(tag);
    } catch (const ParseError& e) {
        ctx.fail(path, e.what());
    }
    if (std::find(allowed.begin(), allowed.end(), unit) == allowed.end()) {
        std::string list;
        for (auto u : allowed) list += (list.empty() ? "" : ", ") + std::string(unit_tag(u));
        ctx.fail(path, "unit '" + tag + "' not allowed here (expected " + list + ")");
    }
    return to_si(value, unit);
}

const std::initializer_list<Unit> kFreq{Unit::Terahertz, Unit::Gigahertz};
const std::initializer_list<Unit> kPower{Unit::Dbm, Unit::MilliWatt};
const std::initializer_list<Unit> kLoss{Unit::DbPerKm};

double number(const Context& ctx, const json& v, const std::string& path) {
    if (!v.is_number()) ctx.fail(path, "expected a number");
    return v.get<double>();
}

int integer(const Context& ctx, const json& v, const std::string& path) {
    if (!v.is_number_integer()) ctx.fail(path, "expected an integer");
    return v.get<int>();
}

bool boolean(const Context& ctx, const json& v, const std::string& path) {
    if (!v.is_boolean()) ctx.fail(path, "expected true or false");
    return v.get<bool>();
}

std::vector<double> quantity_list(const Context& ctx, const json& v, const std::string& path,
                                  std::initializer_list<Unit> allowed) {
    if (!v.is_array() || v.empty()) ctx.fail(path, "expected a non-empty list of quantities");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(quantity(ctx, v[i], path + "[" + std::to_string(i) + "]", allowed));
    }
    return out;
}

void parse_fiber(const Context& ctx, const json& j, FiberSpan& span, bool& has_reference) {
    const std::string p = "fiber";
    check_keys(ctx, j, p,
               {"length", "attenuation", "attenuation_table", "beta2", "beta3", "gamma", "raman_slope",
                "raman_gain_table", "dispersion_reference"});
    span.length = quantity(ctx, require(ctx, j, p, "length"), p + ".length", {Unit::Kilometre});
    if (j.contains("attenuation") == j.contains("attenuation_table")) {
        ctx.fail(p + ".attenuation", "give exactly one of attenuation or attenuation_table");
    }
    if (j.contains("attenuation")) {
        span.attenuation = AttenuationProfile(quantity(ctx, j["attenuation"], p + ".attenuation", kLoss));
    } else {
        const std::string tp = p + ".attenuation_table";
        const auto& t = j["attenuation_table"];
        check_keys(ctx, t, tp, {"frequency", "value"});
        auto f = quantity_list(ctx, require(ctx, t, tp, "frequency"), tp + ".frequency", kFreq);
        auto v = quantity_list(ctx, require(ctx, t, tp, "value"), tp + ".value", kLoss);
        if (f.size() != v.size()) ctx.fail(tp, "frequency and value lists differ in length");
        if (!std::is_sorted(f.begin(), f.end())) ctx.fail(tp + ".frequency", "frequencies must be ascending");
        span.attenuation = AttenuationProfile(std::move(f), std::move(v));
    }
    span.beta2 = quantity(ctx, require(ctx, j, p, "beta2"), p + ".beta2", {Unit::Ps2PerKm});
    span.beta3 = j.contains("beta3") ? quantity(ctx, j["beta3"], p + ".beta3", {Unit::Ps3PerKm}) : 0.0;
    span.gamma = quantity(ctx, require(ctx, j, p, "gamma"), p + ".gamma", {Unit::PerWattKm});
    span.raman_slope =
        j.contains("raman_slope") ? quantity(ctx, j["raman_slope"], p + ".raman_slope", {Unit::PerWattKmTerahertz}) : 0.0;
    if (j.contains("raman_gain_table")) {
        const std::string tp = p + ".raman_gain_table";
        const auto& t = j["raman_gain_table"];
        check_keys(ctx, t, tp, {"shift", "gain"});
        RamanGainTable table;
        table.frequency_shift = quantity_list(ctx, require(ctx, t, tp, "shift"), tp + ".shift", kFreq);
        table.gain = quantity_list(ctx, require(ctx, t, tp, "gain"), tp + ".gain", {Unit::PerWattKm});
        span.gain_table = std::move(table);
    }
    has_reference = j.contains("dispersion_reference");
    if (has_reference) {
        span.dispersion_reference = quantity(ctx, j["dispersion_reference"], p + ".dispersion_reference", kFreq);
    }
}

std::vector<double> power_list(const Context& ctx, const json& v, const std::string& path, int spans) {
    if (v.is_array()) return quantity_list(ctx, v, path, kPower);
    return std::vector<double>(static_cast<std::size_t>(std::max(spans, 1)), quantity(ctx, v, path, kPower));
}

WdmGrid parse_grid(const Context& ctx, const json& j, int spans) {
    const std::string p = "grid";
    check_keys(ctx, j, p, {"uniform", "channels"});
    if (j.contains("uniform") == j.contains("channels")) ctx.fail(p, "give exactly one of uniform or channels");
    WdmGrid grid;
    if (j.contains("uniform")) {
        const std::string up = p + ".uniform";
        const auto& u = j["uniform"];
        check_keys(ctx, u, up, {"count", "center", "spacing", "bandwidth", "power"});
        const int count = integer(ctx, require(ctx, u, up, "count"), up + ".count");
        if (count < 1) ctx.fail(up + ".count", "channel count must be at least 1");
        const double center = quantity(ctx, require(ctx, u, up, "center"), up + ".center", kFreq);
        const double spacing = quantity(ctx, require(ctx, u, up, "spacing"), up + ".spacing", kFreq);
        const double bw = quantity(ctx, require(ctx, u, up, "bandwidth"), up + ".bandwidth", kFreq);
        const auto powers = power_list(ctx, require(ctx, u, up, "power"), up + ".power", spans);
        grid = make_uniform_grid(static_cast<std::size_t>(count), center, spacing, bw, powers.front(),
                                 static_cast<std::size_t>(std::max(spans, 1)));
        for (auto& ch : grid.channels) ch.launch_power_per_span = powers;
    } else {
        const auto& list = j["channels"];
        if (!list.is_array() || list.empty()) ctx.fail(p + ".channels", "expected a non-empty list");
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string cp = p + ".channels[" + std::to_string(i) + "]";
            const auto& c = list[i];
            check_keys(ctx, c, cp, {"frequency", "bandwidth", "power"});
            grid.channels.push_back(Channel{quantity(ctx, require(ctx, c, cp, "frequency"), cp + ".frequency", kFreq),
                                            quantity(ctx, require(ctx, c, cp, "bandwidth"), cp + ".bandwidth", kFreq),
                                            power_list(ctx, require(ctx, c, cp, "power"), cp + ".power", spans)});
        }
    }
    return grid;
}

std::vector<Pump> parse_pumps(const Context& ctx, const json& j, const FiberSpan& span) {
    if (!j.is_array()) ctx.fail("pumps", "expected a list");
    std::vector<Pump> pumps;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string pp = "pumps[" + std::to_string(i) + "]";
        const auto& q = j[i];
        check_keys(ctx, q, pp, {"frequency", "power", "direction", "attenuation"});
        Pump pump;
        pump.frequency = quantity(ctx, require(ctx, q, pp, "frequency"), pp + ".frequency", kFreq);
        pump.input_power = quantity(ctx, require(ctx, q, pp, "power"), pp + ".power", kPower);
        const auto& dir = require(ctx, q, pp, "direction");
        if (dir == "forward") {
            pump.direction = PumpDirection::Forward;
        } else if (dir == "backward") {
            pump.direction = PumpDirection::Backward;
        } else {
            ctx.fail(pp + ".direction", "expected \"forward\" or \"backward\"");
        }
        pump.attenuation = q.contains("attenuation") ? quantity(ctx, q["attenuation"], pp + ".attenuation", kLoss)
                                                     : span.attenuation(pump.frequency);
        pumps.push_back(pump);
    }
    return pumps;
}

std::vector<double> snr_entries(const Context& ctx, const json& v, const std::string& path) {
    if (v == "infinite") return {std::numeric_limits<double>::infinity()};
    if (v.is_array()) return quantity_list(ctx, v, path, {Unit::Decibel});
    return {quantity(ctx, v, path, {Unit::Decibel})};
}

SnrBudget parse_budget(const Context& ctx, const json& j) {
    if (j == "infinite") return SnrBudget::infinite();
    check_keys(ctx, j, "budget", {"snr_ase", "snr_trx"});
    SnrBudget b;
    if (j.contains("snr_ase")) b.snr_ase = snr_entries(ctx, j["snr_ase"], "budget.snr_ase");
    if (j.contains("snr_trx")) b.snr_trx = snr_entries(ctx, j["snr_trx"], "budget.snr_trx");
    return b;
}

}  // namespace

Scenario parse_scenario_text(std::string_view text, std::string_view source) {
    const Context ctx(text, source);
    json root;
    try {
        root = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const auto byte = std::min<std::size_t>(e.byte, text.size());
        const auto line =
            1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(byte), '\n'));
        throw ParseError(std::string(source) + ":" + std::to_string(line) + ": syntax error: " + e.what());
    }
    check_keys(ctx, root, "",
               {"fiber", "spans", "coherence_epsilon", "grid", "pumps", "budget", "solver", "fit", "quadrature",
                "output"});

    Scenario sc;
    auto& link = sc.link;
    link.span_count = root.contains("spans") ? integer(ctx, root["spans"], "spans") : 1;
    if (link.span_count < 1) ctx.fail("spans", "span count must be at least 1");
    link.coherence_epsilon = root.contains("coherence_epsilon") ? number(ctx, root["coherence_epsilon"], "coherence_epsilon") : 0.0;
    bool has_reference = false;
    parse_fiber(ctx, require(ctx, root, "", "fiber"), link.span, has_reference);
    link.grid = parse_grid(ctx, require(ctx, root, "", "grid"), link.span_count);
    if (!has_reference) link.span.dispersion_reference = link.grid.band_center();
    if (root.contains("pumps")) link.pumps = parse_pumps(ctx, root["pumps"], link.span);
    if (root.contains("budget")) sc.budget = parse_budget(ctx, root["budget"]);

    if (root.contains("solver")) {
        const auto& s = root["solver"];
        check_keys(ctx, s, "solver", {"steps", "photon_factors", "gain_model"});
        if (s.contains("steps")) sc.solver.steps = integer(ctx, s["steps"], "solver.steps");
        if (s.contains("photon_factors")) {
            sc.solver.photon_factors = boolean(ctx, s["photon_factors"], "solver.photon_factors");
        }
        if (s.contains("gain_model")) {
            const auto& g = s["gain_model"];
            if (g == "triangular") {
                sc.solver.gain_model = GainModel::Triangular;
            } else if (g == "tabulated") {
                sc.solver.gain_model = GainModel::Tabulated;
            } else {
                ctx.fail("solver.gain_model", "expected \"triangular\" or \"tabulated\"");
            }
        }
    }
    if (root.contains("fit")) {
        const auto& f = root["fit"];
        check_keys(ctx, f, "fit", {"max_iterations", "step_tol", "cost_tol", "alpha_b_starts"});
        if (f.contains("max_iterations")) sc.fit.max_iterations = integer(ctx, f["max_iterations"], "fit.max_iterations");
        if (f.contains("step_tol")) sc.fit.step_tol = number(ctx, f["step_tol"], "fit.step_tol");
        if (f.contains("cost_tol")) sc.fit.cost_tol = number(ctx, f["cost_tol"], "fit.cost_tol");
        if (f.contains("alpha_b_starts")) {
            const auto& a = f["alpha_b_starts"];
            if (!a.is_array() || a.empty()) ctx.fail("fit.alpha_b_starts", "expected a non-empty list of numbers");
            sc.fit.alpha_b_starts.clear();
            for (std::size_t i = 0; i < a.size(); ++i) {
                sc.fit.alpha_b_starts.push_back(number(ctx, a[i], "fit.alpha_b_starts[" + std::to_string(i) + "]"));
            }
        }
    }
    if (root.contains("quadrature")) {
        const auto& q = root["quadrature"];
        check_keys(ctx, q, "quadrature", {"rel_tol", "abs_tol", "max_subdivisions", "window", "phase"});
        if (q.contains("rel_tol")) sc.oracle.quad.rel_tol = number(ctx, q["rel_tol"], "quadrature.rel_tol");
        if (q.contains("abs_tol")) sc.oracle.quad.abs_tol = number(ctx, q["abs_tol"], "quadrature.abs_tol");
        if (q.contains("max_subdivisions")) {
            sc.oracle.quad.max_subdivisions = integer(ctx, q["max_subdivisions"], "quadrature.max_subdivisions");
        }
        if (q.contains("window")) sc.oracle.window = boolean(ctx, q["window"], "quadrature.window");
        if (q.contains("phase")) {
            const auto& ph = q["phase"];
            if (ph == "exact") {
                sc.oracle.phase = PhaseModel::Exact;
            } else if (ph == "approximate") {
                sc.oracle.phase = PhaseModel::Approximate;
            } else {
                ctx.fail("quadrature.phase", "expected \"exact\" or \"approximate\"");
            }
        }
        if (!(sc.oracle.quad.rel_tol > 0.0) || sc.oracle.quad.abs_tol < 0.0 || sc.oracle.quad.max_subdivisions < 1) {
            ctx.fail("quadrature", "tolerances must be positive and the subdivision cap at least 1");
        }
    }
    if (root.contains("output")) {
        const auto& o = root["output"];
        check_keys(ctx, o, "output", {"directory"});
        if (o.contains("directory")) {
            if (!o["directory"].is_string()) ctx.fail("output.directory", "expected a path string");
            sc.output_dir = o["directory"].get<std::string>();
        }
    }

    std::vector<std::string> extra;
    if (sc.solver.steps < 100) extra.push_back("solver needs at least 100 steps per span");
    for (std::size_t i = 0; i < sc.budget.snr_ase.size(); ++i) {
        if (!(sc.budget.snr_ase[i] > 0.0)) extra.push_back("non-positive ASE SNR at index " + std::to_string(i));
    }
    auto diagnostics = link_diagnostics(link);
    diagnostics.insert(diagnostics.end(), extra.begin(), extra.end());
    if (!diagnostics.empty()) throw ValidationError(std::move(diagnostics));
    return sc;
}

Scenario parse_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read scenario file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario_text(ss.str(), path.string());
}

}  // namespace ramannli
