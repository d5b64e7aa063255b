#include "ramannli/identities.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <random>

#include "ramannli/units.hpp"

namespace ramannli {

bool IdentityReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

std::vector<const IdentityCheck*> IdentityReport::failures() const {
    std::vector<const IdentityCheck*> out;
    for (const auto& c : checks) {
        if (!c.pass) out.push_back(&c);
    }
    return out;
}

double IdentityReport::max_error(const std::string& name) const {
    double m = 0.0;
    for (const auto& c : checks) {
        if (c.name == name) m = std::max(m, c.rel_error);
    }
    return m;
}

std::size_t IdentityReport::count(const std::string& name) const {
    return static_cast<std::size_t>(
        std::count_if(checks.begin(), checks.end(), [&](const auto& c) { return c.name == name; }));
}

namespace {

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

std::string params(std::initializer_list<std::pair<const char*, double>> kv) {
    std::string s;
    char buf[64];
    for (const auto& [k, v] : kv) {
        std::snprintf(buf, sizeof buf, "%s%s=%.17g", s.empty() ? "" : " ", k, v);
        s += buf;
    }
    return s;
}

double relative(double lhs, double rhs) {
    if (lhs == rhs) return 0.0;
    return std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300);
}

struct Draw {
    double a, b, c, d, x, l;
};

/// Head on [0, T] plus oscillatory tail on [T, inf).
struct ImproperResult {
    double value, tail, tail_error;
};

template <class F>
ImproperResult improper(F f, double a, double b, double c, double l, const QuadratureSpec& spec) {
    const double cut = spec.truncation_factor * std::max(a, b) / std::abs(c);
    const double omega = c * l;
    const int panels = static_cast<int>(std::ceil(std::abs(omega) * cut / (2.0 * kPi))) + 1;
    const auto head = integrate<double>(f, 0.0, cut, spec, panels);
    QuadratureSpec tail_spec = spec;
    tail_spec.abs_tol = spec.rel_tol * std::abs(head.value);
    const auto tail = integrate_oscillatory_tail(f, cut, omega, tail_spec);
    return {head.value + tail.value, tail.value, tail.error};
}

}  // namespace

IdentityReport verify_identities(const IdentityOptions& opt) {
    IdentityReport rep;
    rep.tolerance = opt.tolerance;
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> u(0.2, 3.0);
    std::uniform_real_distribution<double> cplx(-2.0, 2.0);
    const auto& q = opt.quad;

    auto push = [&](IdentityCheck c, double tol) {
        c.rel_error = relative(c.lhs, c.rhs);
        c.pass = c.rel_error <= tol;
        rep.checks.push_back(std::move(c));
    };

    for (int n = 0; n < opt.draws; ++n) {
        Draw dr{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
        // Every other draw flips the sign of c (and d).
        if (n % 2 == 1) {
            dr.c = -dr.c;
            dr.d = -dr.d;
        }
        const double a = dr.a, b = dr.b, c = dr.c, d = dr.d, x_end = dr.x, l = dr.l;

        {
            auto f = [=](double x) {
                const double c2x2 = c * c * x * x;
                return (a * b + c2x2) / ((a * a + c2x2) * (b * b + c2x2));
            };
            const auto lhs = integrate<double>(f, 0.0, x_end, q);
            const double rhs = (std::atan(c * x_end / a) + std::atan(c * x_end / b)) / (c * (a + b));
            push({"atan-integral", params({{"a", a}, {"b", b}, {"c", c}, {"X", x_end}}), lhs.value, rhs}, opt.tolerance);
        }
        {
            auto f = [=](double x) {
                const double s = std::sin(x);
                const double c2s2 = c * c * s * s;
                return (a * b + c2s2) / ((a * a + c2s2) * (b * b + c2s2));
            };
            const auto lhs = integrate<double>(f, 0.0, 0.5 * kPi, q);
            const double rhs =
                kPi / (2.0 * (a + b)) * (1.0 / std::sqrt(a * a + c * c) + 1.0 / std::sqrt(b * b + c * c));
            push({"sin2-integral", params({{"a", a}, {"b", b}, {"c", c}}), lhs.value, rhs}, opt.tolerance);
        }
        {
            auto f = [=](double x) { return x / std::sqrt(1.0 + d * d * x * x * x * x); };
            const auto lhs = integrate<double>(f, 0.0, x_end, q);
            const double rhs = std::asinh(d * x_end * x_end) / (2.0 * d);
            push({"asinh-integral", params({{"d", d}, {"X", x_end}}), lhs.value, rhs}, opt.tolerance);
        }
        {
            auto f = [=](double x) {
                const double c2x2 = c * c * x * x;
                return (a * b + c2x2) / ((a * a + c2x2) * (b * b + c2x2)) * std::cos(c * x * l);
            };
            const auto r = improper(f, a, b, c, l, q);
            const double rhs = 0.5 * kPi *
                               (std::exp(-std::abs(a * l)) * sign(c / a) + std::exp(-std::abs(b * l)) * sign(c / b)) /
                               (c * (a + b));
            IdentityCheck chk{"cos-tail-integral", params({{"a", a}, {"b", b}, {"c", c}, {"L", l}}), r.value, rhs};
            chk.tail = r.tail;
            chk.tail_error = r.tail_error;
            push(std::move(chk), opt.tolerance);
        }
        {
            double bb = b;
            // Keep the prefactor (a - b) away from zero; a = b is checked separately.
            if (std::abs(a - bb) < 0.1) bb = a + (a < 1.6 ? 0.5 : -0.5);
            auto f = [=](double x) {
                const double c2x2 = c * c * x * x;
                return (a - bb) * c * x / ((a * a + c2x2) * (bb * bb + c2x2)) * std::sin(c * x * l);
            };
            const auto r = improper(f, a, bb, c, l, q);
            const double rhs =
                0.5 * kPi * (std::exp(-std::abs(a * l)) * sign(-c) + std::exp(-std::abs(bb * l)) * sign(c)) /
                (c * (a + bb));
            IdentityCheck chk{"sin-tail-integral", params({{"a", a}, {"b", bb}, {"c", c}, {"L", l}}), r.value, rhs};
            chk.tail = r.tail;
            chk.tail_error = r.tail_error;
            push(std::move(chk), opt.tolerance);
        }
        {
            // a = b: the integrand vanishes identically and the right side is
            // sign(-c) + sign(c) = 0; both must be exactly zero.
            auto f = [=](double x) {
                const double c2x2 = c * c * x * x;
                return (a - a) * c * x / ((a * a + c2x2) * (a * a + c2x2)) * std::sin(c * x * l);
            };
            const auto r = improper(f, a, a, c, l, q);
            const double rhs =
                0.5 * kPi * (std::exp(-std::abs(a * l)) * sign(-c) + std::exp(-std::abs(a * l)) * sign(c)) /
                (c * (a + a));
            IdentityCheck chk{"sin-tail-integral-equal", params({{"a", a}, {"c", c}, {"L", l}}), r.value, rhs};
            chk.rel_error = std::abs(r.value - rhs);
            chk.pass = r.value == 0.0 && rhs == 0.0;
            rep.checks.push_back(std::move(chk));
        }
        {
            // Multinomial expansion for i = 1, 2 against the direct power.
            const double x = cplx(rng), y = cplx(rng), z = cplx(rng);
            for (int i = 1; i <= 2; ++i) {
                double sum = 0.0;
                for (int l1 = 0; l1 <= i; ++l1) {
                    for (int l2 = 0; l1 + l2 <= i; ++l2) {
                        const int l3 = i - l1 - l2;
                        const double coef = std::tgamma(i + 1.0) /
                                            (std::tgamma(l1 + 1.0) * std::tgamma(l2 + 1.0) * std::tgamma(l3 + 1.0));
                        sum += coef * std::pow(x, l1) * std::pow(y, l2) * std::pow(z, l3);
                    }
                }
                const double direct = std::pow(x + y + z, i);
                IdentityCheck chk{"multinomial", params({{"x", x}, {"y", y}, {"z", z}, {"i", i}}), sum, direct};
                // Exact up to rounding of the individual terms.
                const double scale = std::pow(std::abs(x) + std::abs(y) + std::abs(z), i);
                chk.rel_error = std::abs(sum - direct) / scale;
                chk.pass = chk.rel_error <= 1e-14;
                rep.checks.push_back(std::move(chk));
            }
        }
        {
            const std::complex<double> zi(cplx(rng), cplx(rng)), zj(cplx(rng), cplx(rng));
            const double mod2 = std::abs(zi) * std::abs(zi);
            const std::complex<double> prod = zi * std::conj(zi);
            IdentityCheck m{"complex-modulus", params({{"re", zi.real()}, {"im", zi.imag()}}), mod2, prod.real()};
            m.rel_error = relative(mod2, prod.real());
            m.pass = m.rel_error <= 1e-14 && prod.imag() == 0.0;
            rep.checks.push_back(std::move(m));

            const std::complex<double> cross = zi * std::conj(zj) + zj * std::conj(zi);
            const double twice = 2.0 * (zi * std::conj(zj)).real();
            IdentityCheck s{"complex-cross-sum",
                            params({{"re_i", zi.real()}, {"im_i", zi.imag()}, {"re_j", zj.real()}, {"im_j", zj.imag()}}),
                            cross.real(), twice};
            s.rel_error = relative(cross.real(), twice);
            s.pass = s.rel_error <= 1e-14 && cross.imag() == 0.0;
            rep.checks.push_back(std::move(s));
        }
    }
    return rep;
}

}  // namespace ramannli
