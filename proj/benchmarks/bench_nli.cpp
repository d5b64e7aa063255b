#include <benchmark/benchmark.h>

#include "ramannli/closed_form.hpp"
#include "ramannli/oracle.hpp"
#include "ramannli/profile.hpp"
#include "ramannli/raman_solver.hpp"
#include "ramannli/units.hpp"

using namespace ramannli;

namespace {

LinkConfig pumped_link(std::size_t channels) {
    LinkConfig c;
    c.span.length = 80e3;
    c.span.beta2 = convert_units(-21.7, "ps^2/km");
    c.span.beta3 = convert_units(0.14, "ps^3/km");
    c.span.gamma = convert_units(1.3, "1/(W*km)");
    c.span.attenuation = AttenuationProfile(convert_units(0.2, "dB/km"));
    c.span.raman_slope = convert_units(0.028, "1/(W*km*THz)");
    c.span.dispersion_reference = 193.4e12;
    c.grid = make_uniform_grid(channels, 193.4e12, 100e9, 100e9, 1e-3);
    c.pumps.push_back({206.6e12, 0.6, PumpDirection::Backward, convert_units(0.25, "dB/km")});
    return c;
}

struct Fixture {
    LinkConfig link;
    FitReport fit;
    explicit Fixture(std::size_t n) : link(pumped_link(n)), fit(fit_profile(solve_power_evolution(link, 0), link)) {}
};

const Fixture& fixture(std::size_t n) {
    static const Fixture f40(40), f100(100);
    return n == 40 ? f40 : f100;
}

void BM_EtaTotal(benchmark::State& state) {
    const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto r = eta_total(f.link, f.fit);
        benchmark::DoNotOptimize(r.channels.data());
    }
    state.counters["us_per_channel"] =
        benchmark::Counter(static_cast<double>(state.range(0)),
                           benchmark::Counter::kIsIterationInvariantRate | benchmark::Counter::kInvert);
    state.counters["us_per_channel"] = state.counters["us_per_channel"] * 1e6;
}
BENCHMARK(BM_EtaTotal)->Arg(40)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_MuClosed(benchmark::State& state) {
    const auto& f = fixture(40);
    const auto t = closed_form_terms(f.fit.channels[3].params, f.fit.context, f.link.grid[3].center_frequency, 80e3);
    double phi = 1e-4;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mu_closed(t, phi));
        phi += 1e-9;
    }
}
BENCHMARK(BM_MuClosed);

void BM_ExponentialSumLink(benchmark::State& state) {
    const auto& f = fixture(40);
    const auto link = taylor_profile_link(f.fit.channels[3].params, f.fit.context, f.link.grid[3].center_frequency, 80e3);
    double phi = 1e-4;
    for (auto _ : state) {
        benchmark::DoNotOptimize(link(phi));
        phi += 1e-9;
    }
}
BENCHMARK(BM_ExponentialSumLink);

void BM_SolvePowerEvolution(benchmark::State& state) {
    const auto link = pumped_link(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto evo = solve_power_evolution(link, 0);
        benchmark::DoNotOptimize(evo.row(0).data());
    }
}
BENCHMARK(BM_SolvePowerEvolution)->Arg(40)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
