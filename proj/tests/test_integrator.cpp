#include <doctest.h>

#include <algorithm>
#include <limits>

#include "hqn/errors.hpp"
#include "hqn/integrator.hpp"
#include "hqn/oracles.hpp"
#include "support.hpp"

using namespace hqn;

namespace {

double sup_state_diff(const ProfileCurve& a, const ProfileCurve& b) {
    const std::size_t n = std::min(a.uniform.size(), b.uniform.size());
    double m = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const auto& x = a.uniform[k].state;
        const auto& y = b.uniform[k].state;
        m = std::max({m, std::fabs(x.c1 - y.c1), std::fabs(x.c2 - y.c2), std::fabs(x.sigma - y.sigma)});
    }
    return m;
}

IntegrationOptions with(double smax, double tol) {
    IntegrationOptions o;
    o.s_max = smax;
    o.tol = tol;
    return o;
}

}  // namespace

TEST_SUITE("integrator") {
    TEST_CASE("elliptic curve stays in the half-strip with increasing r") {
        const ReducedCase cs(CaseKind::elliptic, 2, 1);
        const ProfileCurve c = integrate_profile(cs, 1.0, with(20.0, 1e-10));
        CHECK(c.termination == Termination::reached_smax);
        REQUIRE(c.uniform.size() == 2001);
        CHECK(c.uniform.front().state.sigma == doctest::Approx(M_PI / 2));
        for (std::size_t k = 1; k < c.uniform.size(); ++k) {
            CHECK(c.uniform[k].s > c.uniform[k - 1].s);
            CHECK(c.uniform[k].state.c1 > c.uniform[k - 1].state.c1);
            CHECK(std::fabs(c.uniform[k].state.sigma) < M_PI / 2);
        }
        for (std::size_t k = 1; k < c.samples.size(); ++k) CHECK(c.samples[k].s > c.samples[k - 1].s);
    }

    TEST_CASE("parabolic monotonicity triple") {
        const ReducedCase cs(CaseKind::parabolic, 2, 1);
        const ProfileCurve c = integrate_profile(cs, 1.0, with(40.0, 1e-10));
        CHECK(c.termination == Termination::alpha_threshold);
        CHECK(c.uniform.back().state.c1 < 1e-4);
        for (std::size_t k = 1; k < c.uniform.size(); ++k) {
            CHECK(c.uniform[k].state.c1 < c.uniform[k - 1].state.c1);
            CHECK(c.uniform[k].state.c2 > c.uniform[k - 1].state.c2);
            CHECK(c.uniform[k].state.sigma > c.uniform[k - 1].state.sigma);
            CHECK(c.uniform[k].state.sigma < M_PI);
        }
    }

    TEST_CASE("special loxodromic line and mirror family") {
        const ReducedCase cs(CaseKind::special_loxodromic, 2);
        const auto fam = generate_family(cs, {-0.5, 0.0, 0.5}, with(10.0, 1e-10), 2);
        REQUIRE(fam.size() == 3);
        CHECK(fam[0].a == -0.5);
        double dev = 0.0;
        for (const auto& s : fam[1].uniform) dev = std::max(dev, std::fabs(s.state.c2 - M_PI / 2));
        CHECK(dev < 1e-12);
        const ProfileCurve m = mirror_curve(fam[2]);
        REQUIRE(m.uniform.size() == fam[0].uniform.size());
        CHECK(sup_state_diff(m, fam[0]) < 1e-12);
        const ProfileCurve direct = integrate_profile(cs, -0.5, with(10.0, 1e-10));
        CHECK(sup_state_diff(direct, fam[0]) < 1e-7);
    }

    TEST_CASE("family order is independent of the thread count") {
        const ReducedCase cs(CaseKind::elliptic, 2, 1);
        const auto a = generate_family(cs, {2.0, 0.5, 1.0}, with(5.0, 1e-9), 1);
        const auto b = generate_family(cs, {2.0, 0.5, 1.0}, with(5.0, 1e-9), 3);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(a[i].a == b[i].a);
            CHECK(sup_state_diff(a[i], b[i]) == 0.0);
        }
    }

    TEST_CASE("parabolic dilation invariance") {
        const ReducedCase cs(CaseKind::parabolic, 2, 1);
        const double tol = 1e-10;
        const auto fam = generate_family(cs, {1.0, std::exp(2.0)}, with(20.0, tol), 2);
        const std::size_t n = std::min(fam[0].uniform.size(), fam[1].uniform.size());
        double dev = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const auto& x = fam[0].uniform[k].state;
            const auto& y = fam[1].uniform[k].state;
            dev = std::max({dev, std::fabs(std::log(y.c1) - std::log(x.c1) - 2.0), std::fabs(y.c2 - std::exp(1.0) * x.c2),
                            std::fabs(y.sigma - x.sigma)});
        }
        CHECK(dev < 10 * tol);
    }

    TEST_CASE("elliptic curves from distinct starts do not meet") {
        const ReducedCase cs(CaseKind::elliptic, 2, 1);
        const auto fam = generate_family(cs, {0.5, 1.0}, with(20.0, 1e-10), 2);
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < fam[0].uniform.size(); i += 2) {
            const auto& p = fam[0].uniform[i].state;
            for (std::size_t j = 0; j < fam[1].uniform.size(); j += 2) {
                const auto& q = fam[1].uniform[j].state;
                // Disc coordinates tanh(r/2)(cos θ, sin θ).
                const double a = std::tanh(p.c1 / 2), b = std::tanh(q.c1 / 2);
                best = std::min(best, std::hypot(a * std::cos(p.c2) - b * std::cos(q.c2), a * std::sin(p.c2) - b * std::sin(q.c2)));
            }
        }
        CHECK(best > 0.0);
        MESSAGE("minimum disc distance " << best);
    }

    TEST_CASE("step halving") {
        const double tol = 1e-8;
        for (const auto& [cs, a, smax] : {std::tuple{ReducedCase(CaseKind::elliptic, 2, 1), 1.0, 10.0},
                                          std::tuple{ReducedCase(CaseKind::parabolic, 2, 1), 1.0, 10.0},
                                          std::tuple{ReducedCase(CaseKind::special_loxodromic, 2), 0.5, 10.0}}) {
            const ProfileCurve c = integrate_profile(cs, a, with(smax, tol));
            const ProfileCurve f = integrate_profile(cs, a, with(smax, tol / 16));
            const double d = sup_state_diff(c, f);
            CAPTURE(cs.key());
            CHECK(d < 10 * tol);
        }
    }

    TEST_CASE("special parabolic first integral and terminal rho") {
        const ReducedCase cs(CaseKind::special_parabolic, 2);
        const ProfileCurve c = integrate_profile(cs, 1.0, with(20.0, 1e-11));
        CHECK(c.termination == Termination::alpha_threshold);
        double worst = 0.0;
        for (const auto& s : c.samples) worst = std::max(worst, std::fabs(s.I1 - 1.0));
        CHECK(worst < 1e-8);
        const EndpointLimit lim = limit_endpoint(c);
        CHECK(lim.converged);
        CHECK(std::fabs(lim.c1) < 1e-6);
        CHECK(std::fabs(lim.c2 - elliptic_integral_R(2)) < 1e-6);
        const ProfileCurve full = reflection_continuation(c);
        CHECK(full.uniform.front().s == doctest::Approx(-c.uniform.back().s));
        CHECK(full.uniform.front().state.c2 == doctest::Approx(-c.uniform.back().state.c2));
    }

    TEST_CASE("parabolic terminal rho lies within the bounds") {
        const ReducedCase cs(CaseKind::parabolic, 2, 1);
        const EndpointLimit lim = limit_endpoint(integrate_profile(cs, 1.0, with(40.0, 1e-10)));
        CHECK(lim.converged);
        CHECK(lim.c2 >= std::sqrt(1.0 / 3.0));
        CHECK(lim.c2 <= std::sqrt(2.0 / 5.0));
    }

    TEST_CASE("polar endpoint is not converged") {
        const ReducedCase cs(CaseKind::elliptic, 2, 1);
        const ProfileCurve c = integrate_profile(cs, 1.0, with(5.0, 1e-9));
        const EndpointLimit lim = limit_endpoint(c);
        CHECK(!lim.converged);
        CHECK(lim.c1 == c.uniform.back().state.c1);
    }

    TEST_CASE("elliptic integral") {
        CHECK(elliptic_integral_R(2) == doctest::Approx(0.1471).epsilon(1e-3));
        for (int n = 1; n <= 8; ++n) {
            CHECK(std::fabs(elliptic_integral_R(n) - elliptic_integral_R_beta(n)) < 1e-10);
            CHECK(elliptic_integral_R(n + 1) < elliptic_integral_R(n));
            CHECK(rho_special_parabolic(n, 1.0) == 0.0);
        }
        CHECK(rho_special_parabolic(2, 0.0) == doctest::Approx(elliptic_integral_R(2)).epsilon(1e-12));
        CHECK(rho_special_parabolic(2, 0.5) < elliptic_integral_R(2));
    }

    TEST_CASE("invalid parameters") {
        CHECK_THROWS_AS(integrate_profile(ReducedCase(CaseKind::elliptic, 2, 1), -1.0), DomainError);
        CHECK_THROWS_AS(integrate_profile(ReducedCase(CaseKind::parabolic, 2, 1), 0.0), DomainError);
        IntegrationOptions o;
        o.tol = 1e-10;
        o.max_steps = 3;
        CHECK_THROWS_AS(integrate_profile(ReducedCase(CaseKind::elliptic, 2, 1), 1.0, o), StepSizeUnderflow);
        CHECK_THROWS_AS(integrate_from_state(ReducedCase(CaseKind::elliptic, 2, 1), {1.0, 0.0, 0.0}), DomainError);
    }

    TEST_CASE("termination names") {
        CHECK(to_string(Termination::reached_smax) == "reached-smax");
        CHECK(to_string(Termination::sigma_reached_pi) != to_string(Termination::domain_exit));
    }
}
