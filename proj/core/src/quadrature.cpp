#include "ramannli/quadrature.hpp"

#include <limits>

namespace ramannli {

ExtrapolationResult wynn_epsilon(std::span<const double> s) {
    const std::size_t n = s.size();
    if (n == 0) return {};
    if (n < 3) return {s.back(), n == 2 ? std::abs(s[1] - s[0]) : std::numeric_limits<double>::infinity()};

    // Columns of the epsilon table; prev = eps_{j-1}, cur = eps_j.
    std::vector<double> prev(n + 1, 0.0);
    std::vector<double> cur(s.begin(), s.end());
    double best = s.back();
    double best_err = std::abs(s[n - 1] - s[n - 2]);
    for (std::size_t j = 1; cur.size() >= 2; ++j) {
        std::vector<double> next(cur.size() - 1);
        for (std::size_t k = 0; k + 1 < cur.size(); ++k) {
            const double d = cur[k + 1] - cur[k];
            if (d == 0.0) return {cur[k + 1], best_err};
            next[k] = prev[k + 1] + 1.0 / d;
        }
        prev = std::move(cur);
        cur = std::move(next);
        if (j % 2 == 0 && cur.size() >= 2) {
            const double est = cur.back();
            const double err = std::abs(cur.back() - cur[cur.size() - 2]);
            if (std::isfinite(est) && err < best_err) {
                best = est;
                best_err = err;
            }
        }
    }
    return {best, best_err};
}

QuadResult integrate_oscillatory_tail(const std::function<double(double)>& f, double start, double omega,
                                      const QuadratureSpec& spec, int max_cycles) {
    const double half = kPi / std::abs(omega);
    QuadratureSpec piece = spec;
    piece.abs_tol = spec.abs_tol * 1e-2;
    QuadResult out;
    std::vector<double> sums;
    double running = 0.0;
    double piece_err = 0.0;
    double a = start;
    for (int c = 0; c < 2 * max_cycles; ++c) {
        auto r = integrate<double>(f, a, a + half, piece);
        out.evaluations += r.evaluations;
        out.converged = out.converged && r.converged;
        piece_err += r.error;
        running += r.value;
        sums.push_back(running);
        a += half;
        if (sums.size() >= 9 && sums.size() % 2 == 1) {
            auto ex = wynn_epsilon(sums);
            const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(ex.limit));
            if (ex.error <= tol) {
                out.value = ex.limit;
                out.error = ex.error + piece_err;
                return out;
            }
        }
    }
    auto ex = wynn_epsilon(sums);
    out.value = ex.limit;
    out.error = ex.error + piece_err;
    out.converged = false;
    return out;
}

}  // namespace ramannli
