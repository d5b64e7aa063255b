#include "ramannli/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <Eigen/Dense>
#include <json.hpp>

#include "ramannli/errors.hpp"

namespace ramannli {

ProfileContext profile_context(const LinkConfig& config, std::size_t span_index) {
    ProfileContext ctx;
    ctx.p_f = config.grid.total_power(span_index);
    double f_sum = 0.0;
    for (const auto& pump : config.pumps) {
        (pump.direction == PumpDirection::Forward ? ctx.p_f : ctx.p_b) += pump.input_power;
        f_sum += pump.frequency;
    }
    ctx.f_hat = config.pumps.empty() ? config.grid.band_center() : f_sum / static_cast<double>(config.pumps.size());
    return ctx;
}

double effective_length(double alpha_f, double z) { return -std::expm1(-alpha_f * z) / alpha_f; }

double backward_effective_length(double alpha_b, double z, double length) {
    return (std::exp(-alpha_b * (length - z)) - std::exp(-alpha_b * length)) / alpha_b;
}

namespace {

double tilt_x(const ProfileParams& p, const ProfileContext& ctx, double z, double length) {
    return p.c_f * ctx.p_f * effective_length(p.alpha_f, z) +
           p.c_b * ctx.p_b * backward_effective_length(p.alpha_b, z, length);
}

}  // namespace

double eval_profile_taylor(const ProfileParams& params, const ProfileContext& ctx, double z, double f_i,
                           double length) {
    return std::exp(-params.alpha * z) * (1.0 - tilt_x(params, ctx, z, length) * (f_i - ctx.f_hat));
}

double eval_profile_exact(const ProfileParams& params, const ProfileContext& ctx, double z, double f_i,
                          double length, double total_bandwidth) {
    const double x = tilt_x(params, ctx, z, length);
    const double xb = x * total_bandwidth;
    // xB / (2 sinh(xB/2)) -> 1 - (xB)^2/24 near zero.
    const double ratio = std::abs(xb) < 1e-6 ? 1.0 - xb * xb / 24.0 : xb / (2.0 * std::sinh(0.5 * xb));
    return std::exp(-params.alpha * z) * ratio * std::exp(-x * (f_i - ctx.f_hat));
}

double FitReport::max_rms_db() const {
    double m = 0.0;
    for (const auto& c : channels) m = std::max(m, c.rms_db);
    return m;
}

namespace {

constexpr double kDb = 4.342944819032518;  // 10 / ln(10)

using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat5 = Eigen::Matrix<double, 5, 5>;

/// Residuals and Jacobian of the dB objective in scaled coordinates
/// q_j = param_j / scale_j.
struct Problem {
    std::span<const double> z;
    std::vector<double> target_db;
    double f_i;
    ProfileContext ctx;
    double length;
    Vec5 scale;
    Vec5 lower, upper;
    std::array<bool, 5> frozen{};

    ProfileParams params(const Vec5& q) const {
        return {q[0] * scale[0], q[1] * scale[1], q[2] * scale[2], q[3] * scale[3], q[4] * scale[4]};
    }

    /// Summed squared residual; +inf when the model leaves rho > 0.
    double cost(const Vec5& q) const {
        const auto p = params(q);
        double c = 0.0;
        for (std::size_t s = 0; s < z.size(); ++s) {
            const double m = eval_profile_taylor(p, ctx, z[s], f_i, length);
            if (!(m > 0.0)) return std::numeric_limits<double>::infinity();
            const double r = kDb * std::log(m) - target_db[s];
            c += r * r;
        }
        return std::isfinite(c) ? c : std::numeric_limits<double>::infinity();
    }

    void linearize(const Vec5& q, Mat5& h, Vec5& g) const {
        const auto p = params(q);
        const double d = f_i - ctx.f_hat;
        h.setZero();
        g.setZero();
        for (std::size_t s = 0; s < z.size(); ++s) {
            const double zz = z[s];
            const double le = effective_length(p.alpha_f, zz);
            const double lt = backward_effective_length(p.alpha_b, zz, length);
            const double u = 1.0 - d * (p.c_f * ctx.p_f * le + p.c_b * ctx.p_b * lt);
            const double ef = std::exp(-p.alpha_f * zz);
            const double dle = (zz * ef - le) / p.alpha_f;
            const double eb = std::exp(-p.alpha_b * (length - zz));
            const double dlt = (-(length - zz) * eb + length * std::exp(-p.alpha_b * length)) / p.alpha_b - lt / p.alpha_b;
            Vec5 j;
            j[0] = -zz;
            j[1] = -d * ctx.p_f * le / u;
            j[2] = -d * ctx.p_b * lt / u;
            j[3] = -d * p.c_f * ctx.p_f * dle / u;
            j[4] = -d * p.c_b * ctx.p_b * dlt / u;
            j = (kDb * j).cwiseProduct(scale);
            const double r = kDb * std::log(std::exp(-p.alpha * zz) * u) - target_db[s];
            h.noalias() += j * j.transpose();
            g += r * j;
        }
    }
};

struct LmOutcome {
    Vec5 q;
    double cost;
    int iterations;
    bool converged;
};

LmOutcome levenberg_marquardt(const Problem& pb, Vec5 q, const FitOptions& opt) {
    q = q.cwiseMax(pb.lower).cwiseMin(pb.upper);
    double cost = pb.cost(q);
    double lambda = 1e-3;
    Mat5 h;
    Vec5 g;
    for (int it = 1; it <= opt.max_iterations; ++it) {
        pb.linearize(q, h, g);
        std::array<bool, 5> free{};
        for (int j = 0; j < 5; ++j) {
            const auto jj = static_cast<std::size_t>(j);
            const bool at_lo = q[j] <= pb.lower[j] && g[j] > 0.0;
            const bool at_hi = q[j] >= pb.upper[j] && g[j] < 0.0;
            free[jj] = !pb.frozen[jj] && h(j, j) > 0.0 && !at_lo && !at_hi;
        }
        if (std::none_of(free.begin(), free.end(), [](bool b) { return b; })) return {q, cost, it, true};

        double dmax = 0.0;
        for (int j = 0; j < 5; ++j) dmax = std::max(dmax, h(j, j));
        for (;;) {
            Mat5 a = h;
            Vec5 rhs = -g;
            for (int j = 0; j < 5; ++j) {
                if (!free[static_cast<std::size_t>(j)]) {
                    a.row(j).setZero();
                    a.col(j).setZero();
                    a(j, j) = 1.0;
                    rhs[j] = 0.0;
                } else {
                    a(j, j) += lambda * std::max(h(j, j), 1e-12 * dmax);
                }
            }
            const Vec5 step = a.ldlt().solve(rhs);
            const Vec5 trial = (q + step).cwiseMax(pb.lower).cwiseMin(pb.upper);
            const double trial_cost = pb.cost(trial);
            if (trial_cost < cost) {
                const double rel_step = (trial - q).norm() / (q.norm() + 1e-300);
                const double drop = cost - trial_cost;
                q = trial;
                cost = trial_cost;
                lambda = std::max(lambda / 3.0, 1e-12);
                if (rel_step < opt.step_tol || drop < opt.cost_tol) return {q, cost, it, true};
                break;
            }
            lambda *= 4.0;
            // No descent left at any damping: stationary to working precision.
            if (lambda > 1e16) return {q, cost, it, true};
        }
    }
    return {q, cost, opt.max_iterations, false};
}

}  // namespace

ChannelFit fit_channel(std::span<const double> z, std::span<const double> rho, double f_i, double alpha_phys,
                       double raman_slope, const ProfileContext& ctx, double length, const FitOptions& options) {
    if (z.size() != rho.size()) throw ValidationError({"fit needs matching z and rho samples"});
    if (z.size() < 50) throw ValidationError({"fit needs at least 50 z samples"});
    Problem pb{z, {}, f_i, ctx, length, {}, {}, {}, {}};
    pb.target_db.resize(rho.size());
    for (std::size_t s = 0; s < rho.size(); ++s) {
        if (!(rho[s] > 0.0)) {
            throw ValidationError({"non-positive rho sample at z = " + std::to_string(z[s]) + " m"});
        }
        pb.target_db[s] = kDb * std::log(rho[s]);
    }
    const bool no_raman = !(raman_slope > 0.0);
    const double c_scale = no_raman ? 1.0 : raman_slope;
    pb.scale << alpha_phys, c_scale, c_scale, alpha_phys, alpha_phys;
    pb.lower << 0.2, -10.0, -10.0, 0.2, 0.2;
    pb.upper << 5.0, 10.0, 10.0, 5.0, 5.0;
    if (no_raman) pb.frozen = {false, true, true, false, false};

    const auto& s = options.initial_scale;
    const double c0 = no_raman ? 0.0 : 1.0;
    std::vector<double> starts = options.alpha_b_starts.empty() ? std::vector<double>{1.0} : options.alpha_b_starts;

    ChannelFit best;
    best.channel = 0;
    best.frequency = f_i;
    double best_cost = std::numeric_limits<double>::infinity();
    for (double ab : starts) {
        Vec5 q0;
        q0 << s[0], c0 * s[1], c0 * s[2], s[3], ab * s[4];
        if (!std::isfinite(pb.cost(q0.cwiseMax(pb.lower).cwiseMin(pb.upper)))) {
            q0[1] = 0.0;
            q0[2] = 0.0;
        }
        if (!std::isfinite(pb.cost(q0.cwiseMax(pb.lower).cwiseMin(pb.upper)))) continue;
        const auto out = levenberg_marquardt(pb, q0, options);
        if (out.cost < best_cost) {
            best_cost = out.cost;
            best.params = pb.params(out.q);
            best.iterations = out.iterations;
            best.converged = out.converged;
        }
    }
    if (!std::isfinite(best_cost)) {
        throw NumericalError("profile fit found no admissible starting point for the channel at " +
                             std::to_string(f_i) + " Hz");
    }
    best.rms_db = std::sqrt(best_cost / static_cast<double>(z.size()));
    return best;
}

FitReport fit_profile(const PowerEvolution& evolution, const LinkConfig& config, const FitOptions& options,
                      std::size_t span_index) {
    if (evolution.cols() < 50) throw ValidationError({"fit needs at least 50 z samples"});
    const std::size_t n = config.grid.size();
    if (evolution.channel_count() != n) throw ValidationError({"evolution does not cover every channel"});
    FitReport report;
    report.context = profile_context(config, span_index);
    report.length = evolution.length();
    report.channels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double f_i = config.grid[i].center_frequency;
        const auto rho = normalized_profile(evolution, i);
        auto fit = fit_channel(evolution.z(), rho, f_i, config.span.attenuation(f_i), config.span.raman_slope,
                               report.context, report.length, options);
        fit.channel = i;
        report.channels.push_back(fit);
    }
    return report;
}

void write_fit_report_json(std::ostream& os, const FitReport& report) {
    nlohmann::ordered_json j;
    j["context"] = {{"p_f_W", report.context.p_f}, {"p_b_W", report.context.p_b}, {"f_hat_Hz", report.context.f_hat}};
    j["length_m"] = report.length;
    j["max_rms_dB"] = report.max_rms_db();
    auto& arr = j["channels"] = nlohmann::ordered_json::array();
    for (const auto& c : report.channels) {
        arr.push_back({{"channel", c.channel},
                       {"frequency_Hz", c.frequency},
                       {"alpha_Np_per_m", c.params.alpha},
                       {"c_f_per_W_m_Hz", c.params.c_f},
                       {"c_b_per_W_m_Hz", c.params.c_b},
                       {"alpha_f_Np_per_m", c.params.alpha_f},
                       {"alpha_b_Np_per_m", c.params.alpha_b},
                       {"rms_dB", c.rms_db},
                       {"iterations", c.iterations},
                       {"converged", c.converged}});
    }
    os << j.dump(2) << '\n';
}

}  // namespace ramannli
