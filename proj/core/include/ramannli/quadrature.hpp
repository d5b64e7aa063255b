#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <queue>
#include <span>
#include <vector>

#include "ramannli/units.hpp"

namespace ramannli {

struct QuadratureSpec {
    double rel_tol = 1e-8;
    double abs_tol = 0.0;
    int max_subdivisions = 20000;
    /// Improper integrals over [0, inf) are split at truncation_factor * scale.
    double truncation_factor = 50.0;
};

template <class T>
struct BasicQuadResult {
    T value{};
    double error = 0.0;  ///< estimated absolute error
    long evaluations = 0;
    bool converged = true;
};

using QuadResult = BasicQuadResult<double>;
using ComplexQuadResult = BasicQuadResult<std::complex<double>>;

namespace detail {

// 7-point Gauss / 15-point Kronrod nodes on [-1, 1] (QUADPACK qk15).
inline constexpr std::array<double, 8> kXgk{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

template <class T>
struct Panel {
    double a, b;
    T value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class T, class F>
Panel<T> kronrod15(F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const T fc = f(c);
    T gauss = fc * kWg[3];
    T kron = fc * kWgk[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[static_cast<std::size_t>(j)];
        const T f1 = f(c - dx);
        const T f2 = f(c + dx);
        kron += (f1 + f2) * kWgk[static_cast<std::size_t>(j)];
        if (j % 2 == 1) gauss += (f1 + f2) * kWg[static_cast<std::size_t>(j / 2)];
    }
    const T value = kron * h;
    double err = magnitude((kron - gauss) * h);
    // QUADPACK-style sharpening of the raw Gauss/Kronrod difference.
    const double mag = magnitude(value);
    if (err > 0.0 && mag > 0.0) {
        const double scaled = 200.0 * err / mag;
        if (scaled < 1.0) err = std::min(err, mag * scaled * std::sqrt(scaled));
    }
    err = std::max(err, 50.0 * 2.2e-16 * mag);
    return {a, b, value, err};
}

}  // namespace detail

/// Globally adaptive G7K15 over the panels delimited by `edges` (ascending,
/// at least two entries). Works for real and complex integrands.
template <class T, class F>
BasicQuadResult<T> integrate_panels(F&& f, std::span<const double> edges, const QuadratureSpec& spec) {
    std::priority_queue<detail::Panel<T>> heap;
    BasicQuadResult<T> out;
    T total{};
    double err = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        if (!(edges[i + 1] > edges[i])) continue;
        auto p = detail::kronrod15<T>(f, edges[i], edges[i + 1]);
        total += p.value;
        err += p.error;
        heap.push(p);
    }
    out.evaluations = 15 * static_cast<long>(heap.size());
    int splits = 0;
    while (!heap.empty() && err > std::max(spec.abs_tol, spec.rel_tol * detail::magnitude(total))) {
        if (splits >= spec.max_subdivisions) {
            out.converged = false;
            break;
        }
        auto worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            out.converged = false;  // panel can no longer be split in floating point
            break;
        }
        heap.pop();
        auto left = detail::kronrod15<T>(f, worst.a, mid);
        auto right = detail::kronrod15<T>(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        out.evaluations += 30;
        ++splits;
    }
    // Re-sum to shed the drift of the running updates.
    T sum{};
    double esum = 0.0;
    while (!heap.empty()) {
        sum += heap.top().value;
        esum += heap.top().error;
        heap.pop();
    }
    out.value = sum;
    out.error = esum;
    return out;
}

/// Adaptive integral over [a, b] starting from `panels` equal pieces, with
/// extra breakpoints merged in.
template <class T, class F>
BasicQuadResult<T> integrate(F&& f, double a, double b, const QuadratureSpec& spec, int panels = 1,
                             std::span<const double> breakpoints = {}) {
    std::vector<double> edges;
    panels = std::max(panels, 1);
    edges.reserve(static_cast<std::size_t>(panels) + 1 + breakpoints.size());
    for (int i = 0; i <= panels; ++i) edges.push_back(a + (b - a) * static_cast<double>(i) / panels);
    edges.back() = b;
    for (double x : breakpoints) {
        if (x > a && x < b) edges.push_back(x);
    }
    std::sort(edges.begin(), edges.end());
    return integrate_panels<T>(std::forward<F>(f), std::span<const double>(edges), spec);
}

/// Wynn epsilon-algorithm limit of a sequence of partial sums. Returns the
/// extrapolated limit and an error estimate from the last two diagonals.
struct ExtrapolationResult {
    double limit = 0.0;
    double error = 0.0;
};
ExtrapolationResult wynn_epsilon(std::span<const double> partial_sums);

/// Integral of f over [start, inf) for an integrand that oscillates with
/// angular frequency `omega` (period 2*pi/|omega|) and decays: cycle-by-cycle
/// integration accelerated with the epsilon algorithm.
QuadResult integrate_oscillatory_tail(const std::function<double(double)>& f, double start, double omega,
                                      const QuadratureSpec& spec, int max_cycles = 200);

}  // namespace ramannli
