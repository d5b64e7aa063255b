#include <doctest.h>

#include "ramannli/identities.hpp"

using namespace ramannli;

TEST_SUITE("identities") {
    TEST_CASE("every identity holds on a short random run") {
        IdentityOptions o;
        o.draws = 20;
        o.seed = 99;
        const auto r = verify_identities(o);
        for (const auto* f : r.failures()) {
            MESSAGE(f->name << " " << f->parameters << " rel " << f->rel_error);
        }
        CHECK(r.all_passed());
        for (const char* name : {"atan-integral", "sin2-integral", "asinh-integral", "cos-tail-integral",
                                 "sin-tail-integral", "multinomial", "complex-modulus", "complex-cross-sum"}) {
            CAPTURE(name);
            CHECK(r.count(name) >= 20);
            CHECK(r.max_error(name) <= 1e-8);
        }
        CHECK(r.count("sin-tail-integral-equal") >= 1);
    }

    TEST_CASE("same seed, same draws") {
        IdentityOptions o;
        o.draws = 5;
        const auto a = verify_identities(o);
        const auto b = verify_identities(o);
        REQUIRE(a.checks.size() == b.checks.size());
        for (std::size_t n = 0; n < a.checks.size(); ++n) {
            CHECK(a.checks[n].parameters == b.checks[n].parameters);
            CHECK(a.checks[n].lhs == b.checks[n].lhs);
        }
    }

    TEST_CASE("tail pieces are reported for the improper integrals") {
        IdentityOptions o;
        o.draws = 4;
        const auto r = verify_identities(o);
        bool saw_tail = false;
        for (const auto& c : r.checks) {
            if (c.name == "cos-tail-integral" && c.tail != 0.0) {
                saw_tail = true;
                CHECK(c.tail_error < 1e-6 * std::abs(c.rhs) + 1e-300);
            }
        }
        CHECK(saw_tail);
    }

    TEST_CASE("an impossible tolerance fails honestly") {
        IdentityOptions o;
        o.draws = 3;
        o.tolerance = 0.0;
        o.quad.rel_tol = 1e-6;
        CHECK_FALSE(verify_identities(o).all_passed());
    }
}
