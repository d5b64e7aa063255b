#include "ramannli/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <tuple>

#include <boost/math/tools/roots.hpp>

#include "ramannli/errors.hpp"
#include "ramannli/units.hpp"

namespace ramannli {

MuResult mu_numeric(double f1, double f2, double f_i, const ProfileField& rho, double phi, double length,
                    const QuadratureSpec& spec) {
    const double f3 = f1 + f2 - f_i;
    auto integrand = [&](double z) {
        const double r1 = rho(z, f1), r2 = rho(z, f2), r3 = rho(z, f3), ri = rho(z, f_i);
        if (r1 < 0.0 || r2 < 0.0 || r3 < 0.0 || !(ri > 0.0)) {
            throw DomainError("negative power profile at zeta = " + std::to_string(z) + " m", z);
        }
        const double a = std::sqrt(r1 * r2 * r3 / ri);
        return std::complex<double>(a * std::cos(phi * z), a * std::sin(phi * z));
    };
    const double cycles = std::abs(phi) * length / (2.0 * kPi);
    const int panels = static_cast<int>(std::min(std::ceil(cycles), 1e5));
    QuadratureSpec inner = spec;
    // |I|^2 doubles the relative error of I.
    inner.rel_tol = 0.5 * spec.rel_tol;
    const auto r = integrate<std::complex<double>>(integrand, 0.0, length, inner, panels);
    const double m = std::abs(r.value);
    return {m * m, 2.0 * m * r.error + r.error * r.error, r.converged};
}

QuadratureLink::QuadratureLink(std::function<double(double)> rho, double length, QuadratureSpec spec)
    : field_([rho = std::move(rho)](double z, double) { return rho(z); }), length_(length), spec_(spec) {}

double QuadratureLink::operator()(double phi) const {
    return mu_numeric(0.0, 0.0, 0.0, field_, phi, length_, spec_).value;
}

namespace {

/// (e^{x} - 1)/x for |x| < 1e-3.
std::complex<double> series(std::complex<double> x) {
    return 1.0 + x * (1.0 / 2.0 + x * (1.0 / 6.0 + x * (1.0 / 24.0 + x / 120.0)));
}

}  // namespace

ExponentialSumLink::ExponentialSumLink(std::vector<std::pair<double, double>> terms, double length)
    : terms_(std::move(terms)), length_(length) {
    decay_.reserve(terms_.size());
    for (const auto& [c, s] : terms_) decay_.push_back(std::exp(-s * length_));
}

std::complex<double> ExponentialSumLink::field_integral(double phi) const {
    const std::complex<double> rot(std::cos(phi * length_), std::sin(phi * length_));
    std::complex<double> acc{};
    for (std::size_t m = 0; m < terms_.size(); ++m) {
        const auto [c, s] = terms_[m];
        if (c == 0.0) continue;
        const std::complex<double> w(-s, phi);
        const std::complex<double> wl = w * length_;
        if (std::norm(wl) < 1e-6) {
            acc += c * length_ * series(wl);
        } else {
            acc += c * (decay_[m] * rot - 1.0) / w;
        }
    }
    return acc;
}

double ExponentialSumLink::operator()(double phi) const {
    // Hot path of the 2D oracle: the same sum as field_integral with the
    // complex division written out (the library version guards inf/nan).
    const double c = std::cos(phi * length_);
    const double s = std::sin(phi * length_);
    double re = 0.0, im = 0.0;
    for (std::size_t m = 0; m < terms_.size(); ++m) {
        const auto [cm, sm] = terms_[m];
        if (cm == 0.0) continue;
        const double den = sm * sm + phi * phi;
        if (den * length_ * length_ < 1e-6) {
            const auto v = cm * length_ * series(std::complex<double>(-sm, phi) * length_);
            re += v.real();
            im += v.imag();
            continue;
        }
        // (a + jb) / (-s + j phi) with a = k cos - 1, b = k sin
        const double a = decay_[m] * c - 1.0;
        const double b = decay_[m] * s;
        re += cm * (-a * sm + b * phi) / den;
        im += cm * (b * -sm - a * phi) / den;
    }
    return re * re + im * im;
}

double ExponentialSumLink::profile(double zeta) const {
    double r = 0.0;
    for (const auto& [c, s] : terms_) r += c * std::exp(-s * zeta);
    return r;
}

ExponentialSumLink taylor_profile_link(const ProfileParams& p, const ProfileContext& ctx, double f_i,
                                       double length) {
    const double d = f_i - ctx.f_hat;
    const double a_f = p.c_f * ctx.p_f / p.alpha_f;
    const double a_b = p.c_b * ctx.p_b / p.alpha_b;
    const double eb = std::exp(-p.alpha_b * length);
    return ExponentialSumLink({{1.0 - d * a_f + d * a_b * eb, p.alpha},
                               {d * a_f, p.alpha + p.alpha_f},
                               {-d * a_b * eb, p.alpha - p.alpha_b}},
                              length);
}

namespace {

/// Phase of the triplet (f_i + f1, f_k + f2, ...) with f1, f2 measured from
/// the channel centres. For fixed f2 it is a(f2) f1 + b(f2) f1^2.
struct TripletPhase {
    double c4 = 4.0 * kPi * kPi;
    double fi = 0.0, fk = 0.0;  // offsets from the dispersion reference
    double beta2 = 0.0, beta3 = 0.0;
    double phi_ik = 0.0, phi_i = 0.0;
    bool exact = true;
    bool self = false;

    double operator()(double f1, double f2) const {
        if (exact) return -c4 * f1 * (f2 + fk - fi) * (beta2 + kPi * beta3 * (f1 + f2 + fi + fk));
        return self ? phi_i * f1 * f2 : phi_ik * f1;
    }
    double a(double f2) const {
        return exact ? -c4 * (f2 + fk - fi) * (beta2 + kPi * beta3 * (f2 + fi + fk)) : phi_ik;
    }
    double b(double f2) const { return exact ? -c4 * (f2 + fk - fi) * kPi * beta3 : 0.0; }
    double d_f1(double f1, double f2) const { return a(f2) + 2.0 * b(f2) * f1; }
    /// Root of phase(f1, f2) = phi continuous with phi / a(f2).
    double solve_f1(double phi, double f2) const {
        const double av = a(f2), bv = b(f2);
        const double disc = std::max(av * av + 4.0 * bv * phi, 0.0);
        const double den = av + std::copysign(std::sqrt(disc), av);
        return den == 0.0 ? std::numeric_limits<double>::infinity() : 2.0 * phi / den;
    }
};

TripletPhase make_phase(const OracleChannel& cut, const OracleChannel& k, const FiberSpan& span,
                        const OracleOptions& opt, bool self) {
    TripletPhase ph;
    ph.fi = cut.frequency - span.dispersion_reference;
    ph.fk = k.frequency - span.dispersion_reference;
    ph.beta2 = span.beta2;
    ph.beta3 = span.beta3;
    ph.phi_ik = -ph.c4 * (ph.fk - ph.fi) * (span.beta2 + kPi * span.beta3 * (ph.fi + ph.fk));
    ph.phi_i = -ph.c4 * (span.beta2 + 2.0 * kPi * span.beta3 * ph.fi);
    ph.exact = opt.phase == PhaseModel::Exact;
    ph.self = self;
    return ph;
}

/// Integration domain in (f1, f2): the two channel boxes, cut by the window.
struct Domain {
    double bi = 0.0, bk = 0.0;
    bool window = true;

    double lo(double f2) const { return window ? std::max(-0.5 * bi, -0.5 * bk - f2) : -0.5 * bi; }
    double hi(double f2) const { return window ? std::min(0.5 * bi, 0.5 * bk - f2) : 0.5 * bi; }

    /// Vertices (f1, f2), counter-clockwise.
    std::vector<std::array<double, 2>> polygon() const {
        std::vector<std::array<double, 2>> poly{
            {-0.5 * bi, -0.5 * bk}, {0.5 * bi, -0.5 * bk}, {0.5 * bi, 0.5 * bk}, {-0.5 * bi, 0.5 * bk}};
        if (!window) return poly;
        // keep s (f1 + f2) <= bk / 2
        for (double s : {1.0, -1.0}) {
            std::vector<std::array<double, 2>> next;
            auto val = [&](const std::array<double, 2>& p) { return s * (p[0] + p[1]) - 0.5 * bk; };
            for (std::size_t j = 0; j < poly.size(); ++j) {
                const auto& p = poly[j];
                const auto& q = poly[(j + 1) % poly.size()];
                const double vp = val(p), vq = val(q);
                if (vp <= 0.0) next.push_back(p);
                if ((vp < 0.0 && vq > 0.0) || (vp > 0.0 && vq < 0.0)) {
                    const double t = vp / (vp - vq);
                    next.push_back({p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])});
                }
            }
            poly = std::move(next);
        }
        return poly;
    }
};

OracleResult finish(double value, double error, const OracleChannel& cut, const OracleChannel& k,
                    const FiberSpan& span, bool converged, long evaluations, OracleMethod method) {
    const double ratio = k.power / cut.power;
    const double pre = 32.0 / 27.0 * span.gamma * span.gamma / (k.bandwidth * k.bandwidth) * ratio * ratio;
    OracleResult out;
    out.eta = pre * value;
    out.error = pre * error;
    out.converged = converged;
    out.evaluations = evaluations;
    out.method = method;
    return out;
}

int panels_for(double slope, double width, double length) {
    return static_cast<int>(std::clamp(std::ceil(slope * width * length / (4.0 * kPi)), 1.0, 1e6));
}

OracleResult tensor_integral(const OracleChannel& cut, const OracleChannel& k, const LinkFunction& link,
                             const FiberSpan& span, const OracleOptions& opt, const TripletPhase& phase) {
    const Domain dom{cut.bandwidth, k.bandwidth, opt.window};
    const double bi = dom.bi, bk = dom.bk;
    const double len = span.length;

    // f2 inside, f1 outside. Initial panels span about two oscillations of
    // cos(phi L); adaptivity refines from there.
    auto slope_f1 = [&](double f2) {
        return std::max(std::abs(phase(0.5 * bi, f2) - phase(0.5 * bi - 1.0, f2)),
                        std::abs(phase(-0.5 * bi + 1.0, f2) - phase(-0.5 * bi, f2)));
    };

    QuadratureSpec inner = opt.quad;
    inner.rel_tol = opt.quad.rel_tol / 10.0;
    long evaluations = 0;
    bool converged = true;
    const double inner_break[] = {-(phase.fk - phase.fi)};

    auto outer = [&](double f1) {
        double lo = -0.5 * bk, hi = 0.5 * bk;
        if (opt.window) {
            lo = std::max(lo, -0.5 * bk - f1);
            hi = std::min(hi, 0.5 * bk - f1);
        }
        if (!(hi > lo)) return 0.0;
        const double slope = std::max(std::abs(phase(f1, lo + 1.0) - phase(f1, lo)),
                                      std::abs(phase(f1, hi) - phase(f1, hi - 1.0)));
        auto r = integrate<double>([&](double f2) { return link(phase(f1, f2)); }, lo, hi, inner,
                                   panels_for(slope, hi - lo, len), std::span<const double>(inner_break));
        evaluations += r.evaluations;
        converged = converged && r.converged;
        return r.value;
    };

    const double slope = std::max(slope_f1(-0.5 * bk), slope_f1(0.5 * bk));
    const double outer_break[] = {0.0};
    const auto r = integrate<double>(outer, -0.5 * bi, 0.5 * bi, opt.quad, panels_for(slope, bi, len),
                                     std::span<const double>(outer_break));
    return finish(r.value, r.error, cut, k, span, converged && r.converged, evaluations + r.evaluations,
                  OracleMethod::Tensor);
}

/// f1 traded for phi at fixed f2, so the integral becomes the 1D integral of
/// mu(phi) W(phi) with W(phi) = int df2 / |d phi / d f1| along the level set.
/// Needs d phi / d f1 of one sign on the whole domain.
std::optional<OracleResult> level_set_integral(const OracleChannel& cut, const OracleChannel& k,
                                               const LinkFunction& link, const FiberSpan& span,
                                               const OracleOptions& opt, const TripletPhase& phase) {
    if (phase.self) return std::nullopt;
    const Domain dom{cut.bandwidth, k.bandwidth, opt.window};
    const auto poly = dom.polygon();

    // d phi / d f1 = -c4 (f2 + fk - fi) (beta2 + pi beta3 (2 f1 + f2 + fi + fk)) for the
    // exact phase; both factors are affine, so one sign at every vertex is enough.
    {
        int s1 = 0, s2 = 0;
        for (const auto& [f1, f2] : poly) {
            const double g1 = phase.exact ? f2 + phase.fk - phase.fi : phase.phi_ik;
            const double g2 =
                phase.exact ? phase.beta2 + kPi * phase.beta3 * (2.0 * f1 + f2 + phase.fi + phase.fk) : 1.0;
            const int t1 = (g1 > 0.0) - (g1 < 0.0), t2 = (g2 > 0.0) - (g2 < 0.0);
            if (t1 == 0 || t2 == 0 || (s1 != 0 && (t1 != s1 || t2 != s2))) return std::nullopt;
            s1 = t1;
            s2 = t2;
        }
    }

    std::vector<double> f2_edges;
    std::vector<double> phi_breaks;
    double phi_min = std::numeric_limits<double>::infinity();
    double phi_max = -phi_min;
    constexpr int kEdgeSamples = 64;
    for (std::size_t j = 0; j < poly.size(); ++j) {
        const auto& p = poly[j];
        const auto& q = poly[(j + 1) % poly.size()];
        f2_edges.push_back(p[1]);
        phi_breaks.push_back(phase(p[0], p[1]));
        for (int m = 0; m <= kEdgeSamples; ++m) {
            const double t = static_cast<double>(m) / kEdgeSamples;
            const double v = phase(p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]));
            phi_min = std::min(phi_min, v);
            phi_max = std::max(phi_max, v);
        }
    }
    std::sort(f2_edges.begin(), f2_edges.end());
    f2_edges.erase(std::unique(f2_edges.begin(), f2_edges.end()), f2_edges.end());
    // Sampled extremes may sit slightly inside the true range; W vanishes outside it.
    const double pad = 1e-3 * (phi_max - phi_min);
    phi_min -= pad;
    phi_max += pad;
    if (phi_min < 0.0 && phi_max > 0.0) phi_breaks.push_back(0.0);

    QuadratureSpec wspec{1e-11, 0.0, 2000, 50.0};
    constexpr int kSamples = 16;
    bool converged = true;
    std::vector<double> cuts;

    auto weight = [&](double phi) {
        double total = 0.0;
        for (std::size_t e = 0; e + 1 < f2_edges.size(); ++e) {
            const double p0 = f2_edges[e], p1 = f2_edges[e + 1];
            if (!(p1 > p0)) continue;
            auto d_lo = [&](double f2) { return phase.solve_f1(phi, f2) - dom.lo(f2); };
            auto d_hi = [&](double f2) { return dom.hi(f2) - phase.solve_f1(phi, f2); };
            cuts.assign({p0, p1});
            double x0 = p0, lo0 = d_lo(p0), hi0 = d_hi(p0);
            for (int m = 1; m <= kSamples; ++m) {
                const double x1 = p0 + (p1 - p0) * m / kSamples;
                const double lo1 = d_lo(x1), hi1 = d_hi(x1);
                for (auto [fa, fb, g] : {std::tuple{lo0, lo1, 0}, std::tuple{hi0, hi1, 1}}) {
                    if ((fa < 0.0) == (fb < 0.0)) continue;
                    std::uintmax_t iters = 100;
                    const auto tol = boost::math::tools::eps_tolerance<double>(50);
                    const auto root = g == 0 ? boost::math::tools::toms748_solve(d_lo, x0, x1, fa, fb, tol, iters)
                                             : boost::math::tools::toms748_solve(d_hi, x0, x1, fa, fb, tol, iters);
                    cuts.push_back(0.5 * (root.first + root.second));
                }
                x0 = x1;
                lo0 = lo1;
                hi0 = hi1;
            }
            std::sort(cuts.begin(), cuts.end());
            for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
                const double a = cuts[c], b = cuts[c + 1];
                if (!(b > a)) continue;
                const double mid = 0.5 * (a + b);
                if (d_lo(mid) < 0.0 || d_hi(mid) < 0.0) continue;
                const auto r = integrate<double>(
                    [&](double f2) { return 1.0 / std::abs(phase.d_f1(phase.solve_f1(phi, f2), f2)); }, a, b,
                    wspec);
                converged = converged && r.converged;
                total += r.value;
            }
        }
        return total;
    };

    const double slope = 1.0;  // the outer variable is phi itself
    const auto r = integrate<double>([&](double phi) { return link(phi) * weight(phi); }, phi_min, phi_max,
                                     opt.quad, panels_for(slope, phi_max - phi_min, span.length),
                                     std::span<const double>(phi_breaks));
    return finish(r.value, r.error, cut, k, span, converged && r.converged, r.evaluations,
                  OracleMethod::LevelSet);
}

OracleResult xpm_integral(const OracleChannel& cut, const OracleChannel& k, const LinkFunction& link,
                          const FiberSpan& span, const OracleOptions& opt, bool self) {
    const TripletPhase phase = make_phase(cut, k, span, opt, self);
    if (opt.method != OracleMethod::Tensor) {
        if (auto r = level_set_integral(cut, k, link, span, opt, phase)) return *r;
        if (opt.method == OracleMethod::LevelSet) {
            throw DegenerateError("level-set oracle needs a phase monotone in f1 over the channel pair");
        }
    }
    return tensor_integral(cut, k, link, span, opt, phase);
}

}  // namespace

OracleResult eta_xpm_numeric(const OracleChannel& cut, const OracleChannel& interferer, const LinkFunction& link,
                             const FiberSpan& span, const OracleOptions& options) {
    return xpm_integral(cut, interferer, link, span, options, cut.frequency == interferer.frequency);
}

OracleResult eta_spm_numeric(const OracleChannel& cut, const LinkFunction& link, const FiberSpan& span,
                             const OracleOptions& options) {
    auto r = xpm_integral(cut, cut, link, span, options, true);
    r.eta *= 0.5;
    r.error *= 0.5;
    return r;
}

}  // namespace ramannli
