#include <doctest.h>

#include "hqn/errors.hpp"
#include "hqn/integrator.hpp"
#include "hqn/isometries.hpp"
#include "hqn/reduction.hpp"
#include "support.hpp"

using namespace hqn;
using namespace test_support;

namespace {

double coth(double x) { return 1.0 / std::tanh(x); }

}  // namespace

TEST_SUITE("reduction") {
    TEST_CASE("admissible cases") {
        CHECK_NOTHROW(ReducedCase(CaseKind::elliptic, 3, 2));
        CHECK_THROWS_AS(ReducedCase(CaseKind::elliptic, 2, 2), DomainError);
        CHECK_THROWS_AS(ReducedCase(CaseKind::loxodromic, 2, 2), DomainError);
        CHECK_NOTHROW(ReducedCase(CaseKind::loxodromic, 3, 2));
        CHECK_THROWS_AS(ReducedCase(CaseKind::parabolic, 2, 0), DomainError);
        CHECK_THROWS_AS(ReducedCase(CaseKind::special_parabolic, 1), DomainError);
        CHECK(parse_case_kind("special-loxodromic") == CaseKind::special_loxodromic);
        CHECK_THROWS_AS(parse_case_kind("hyperbolic"), DomainError);
    }

    TEST_CASE("volume exponents") {
        for (int n = 2; n <= 6; ++n) {
            for (int m = 1; m < n; ++m) {
                const auto e = ReducedCase(CaseKind::elliptic, n, m).coefficients().value();
                CHECK(e.A == 4 * n - 5);
                CHECK(e.B == 3);
                CHECK(e.C == 4 * n - 8 * m);
                CHECK(e.D == 4 * m - 1);
                CHECK(e.A + 2 * e.B == 4 * n + 1);
                CHECK(e.C + e.D == 4 * n - 4 * m - 1);
                if (m < 2) continue;
                const auto l = ReducedCase(CaseKind::loxodromic, n, m).coefficients().value();
                CHECK(l.A == 4 * n - 8 * m + 3);
                CHECK(l.B == 4 * m - 1);
                CHECK(l.C == 4 * n - 4 * m - 4);
                CHECK(l.D == 3);
                CHECK(l.A + 2 * l.B == 4 * n + 1);
                CHECK(l.C + l.D == 4 * n - 4 * m - 1);
            }
        }
        CHECK(!ReducedCase(CaseKind::parabolic, 2, 1).coefficients());
    }

    TEST_CASE("orbit projection") {
        const ReducedCase el(CaseKind::elliptic, 2, 1);
        const Vec2 uv = orbit_project(el, BallPoint(QVector{Quaternion(0.5), Quaternion()}));
        CHECK(uv[0] == doctest::Approx(0.5));
        CHECK(uv[1] == doctest::Approx(0.0));
        const ReducedCase sl(CaseKind::special_loxodromic, 2);
        const Vec2 z = orbit_project(sl, BallPoint(QVector(2)));
        CHECK(std::fabs(z[0]) < 1e-15);
        CHECK(std::fabs(z[1]) < 1e-15);
        const ReducedCase sp(CaseKind::special_parabolic, 2);
        const Vec2 ar = orbit_project(sp, HoroPoint(QVector{Quaternion(2, 1, 0, 0)}, 1.0, Quaternion(0, 0.3, 0, 0)));
        CHECK(ar[0] == doctest::Approx(1.0));
        CHECK(ar[1] == doctest::Approx(2.0));
    }

    TEST_CASE("section point projects back") {
        std::mt19937_64 rng(41);
        std::uniform_real_distribution<double> u(0.1, 0.9);
        for (const auto& cs : {ReducedCase(CaseKind::elliptic, 3, 1), ReducedCase(CaseKind::elliptic, 3, 2),
                               ReducedCase(CaseKind::loxodromic, 3, 2), ReducedCase(CaseKind::special_loxodromic, 3),
                               ReducedCase(CaseKind::parabolic, 3, 2), ReducedCase(CaseKind::special_parabolic, 3)}) {
            for (int t = 0; t < 20; ++t) {
                Vec2 c = cs.polar() ? Vec2{2 * u(rng), u(rng) * std::min(cs.c2_max(), 3.0)} : Vec2{2 * u(rng), u(rng)};
                const Vec2 back = phase_coordinates(cs, section_point(cs, c));
                CHECK(std::fabs(back[0] - c[0]) < 1e-10);
                CHECK(std::fabs(back[1] - c[1]) < 1e-10);
            }
        }
    }

    TEST_CASE("projection is constant on orbits of the rotation part") {
        std::mt19937_64 rng(42);
        const ReducedCase el(CaseKind::elliptic, 3, 1);
        for (int t = 0; t < 20; ++t) {
            const BallPoint p = random_ball(rng, 3, 0.8);
            QMatrix B(3, 3);
            const QMatrix b1 = random_symplectic(1, rng), b2 = random_symplectic(2, rng);
            B(0, 0) = b1(0, 0);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) B(1 + i, 1 + j) = b2(i, j);
            const ChartPoint q = act(make_isometry(Rotation{B, random_unit_quaternion(rng)}), p);
            const Vec2 a = orbit_project(el, p), b = orbit_project(el, q);
            CHECK(std::fabs(a[0] - b[0]) < 1e-12);
            CHECK(std::fabs(a[1] - b[1]) < 1e-12);
        }
    }

    TEST_CASE("orbital metric") {
        const ReducedCase el(CaseKind::elliptic, 2, 1);
        CHECK(orbital_metric(el, {0.8, 0.3}, {1, 0}, {1, 0}) == doctest::Approx(4.0));
        CHECK(orbital_metric(el, {0.8, 0.3}, {0, 1}, {0, 1}) == doctest::Approx(4 * std::pow(std::sinh(0.8), 2)));
        const ReducedCase pa(CaseKind::parabolic, 2, 1);
        CHECK(orbital_metric(pa, {1.0, 0.4}, {0, 1}, {0, 1}) == doctest::Approx(4.0));
        CHECK(orbital_metric(pa, {2.0, 0.4}, {1, 0}, {1, 0}) == doctest::Approx(0.25));
    }

    TEST_CASE("volume functional") {
        const ReducedCase el(CaseKind::elliptic, 2, 1);
        const double expect = std::pow(std::sinh(1.0), 3) * std::pow(std::sinh(2.0), 3);
        CHECK(volume_functional(el, {1.0, M_PI / 4}) == doctest::Approx(expect).epsilon(1e-13));
        CHECK(expect == doctest::Approx(77.44).epsilon(1e-3));
        CHECK(volume_functional(ReducedCase(CaseKind::parabolic, 2, 1), {1.0, 1.0}) == doctest::Approx(1.0));

        std::mt19937_64 rng(43);
        std::uniform_real_distribution<double> u(0.1, 0.9);
        for (const auto& cs : {ReducedCase(CaseKind::special_loxodromic, 2), ReducedCase(CaseKind::special_loxodromic, 3),
                               ReducedCase(CaseKind::elliptic, 3, 2), ReducedCase(CaseKind::loxodromic, 3, 2)}) {
            double ref = 0.0;
            for (int t = 0; t < 30; ++t) {
                const Vec2 rt{2 * u(rng), u(rng) * cs.c2_max()};
                const double ratio = volume_functional_cartesian(cs, cartesian_from_polar(rt)) / volume_functional(cs, rt);
                if (t == 0) ref = ratio;
                CHECK(ratio == doctest::Approx(ref).epsilon(1e-10));
            }
        }
    }

    TEST_CASE("stationary states of the reduced equation") {
        const ReducedCase el(CaseKind::elliptic, 2, 1);
        for (double r : {0.3, 1.0, 4.0}) CHECK(std::fabs(ode_rhs(el, {r, M_PI / 4, 0.0}, 0.0)[2]) < 1e-14);
        const ReducedCase pa(CaseKind::parabolic, 2, 1);
        for (double rho : {0.2, 1.0}) CHECK(std::fabs(ode_rhs(pa, {1.3, rho, M_PI / 2}, -5.0)[2]) < 1e-14);
        const ReducedCase sp(CaseKind::special_parabolic, 2);
        const Vec3 f = ode_rhs(sp, {0.7, elliptic_integral_R(2), 0.0}, 0.0);
        CHECK(f[1] == 0.0);
        CHECK(f[2] == 0.0);
        const ReducedCase sl(CaseKind::special_loxodromic, 3);
        CHECK(std::fabs(ode_rhs(sl, {1.1, M_PI / 2, 0.0}, 0.0)[1]) < 1e-15);
        CHECK(std::fabs(ode_rhs(sl, {1.1, M_PI / 2, 0.0}, 0.0)[2]) < 1e-14);
    }

    TEST_CASE("unit speed") {
        std::mt19937_64 rng(44);
        std::uniform_real_distribution<double> u(0.1, 0.9), us(-3.0, 3.0);
        for (const auto& cs : {ReducedCase(CaseKind::elliptic, 2, 1), ReducedCase(CaseKind::parabolic, 2, 1),
                               ReducedCase(CaseKind::special_parabolic, 2)}) {
            for (int t = 0; t < 20; ++t) {
                const PhaseState s{1 + u(rng), cs.polar() ? u(rng) : cs.kind() == CaseKind::special_parabolic ? us(rng) : u(rng), us(rng)};
                const Vec3 f = ode_rhs(cs, s, 0.0);
                CHECK(orbital_metric(cs, {s.c1, s.c2}, {f[0], f[1]}, {f[0], f[1]}) == doctest::Approx(1.0).epsilon(1e-13));
            }
        }
    }

    TEST_CASE("boundary sigma rate") {
        const double e = -(2 * coth(1.0) + 3 * coth(2.0)) / 4;
        CHECK(boundary_sigma_rate(ReducedCase(CaseKind::elliptic, 2, 1), 1.0) == doctest::Approx(e).epsilon(1e-13));
        CHECK(e == doctest::Approx(-1.4345).epsilon(1e-4));
        for (double a : {0.5, 1.0, 3.0})
            CHECK(boundary_sigma_rate(ReducedCase(CaseKind::parabolic, 2, 1), a) == doctest::Approx(1.25));
        for (int n : {2, 3})
            for (double a : {0.4, 1.5}) {
                const double k = 4.0 * n - 4.0;
                CHECK(boundary_sigma_rate(ReducedCase(CaseKind::special_loxodromic, n), a) ==
                      doctest::Approx(-(k * coth(a) + 6 * std::tanh(2 * a)) / (2 * k)).epsilon(1e-12));
            }
    }

    TEST_CASE("explicit solutions") {
        const auto el = explicit_solutions(ReducedCase(CaseKind::elliptic, 2, 1));
        bool cone = false, sphere = false;
        for (const auto& s : el) {
            if (s.name == "cone") {
                cone = true;
                CHECK(s.parameter == doctest::Approx(M_PI / 4));
            }
            if (s.name == "sphere") {
                sphere = true;
                CHECK(std::fabs(s.h) == doctest::Approx(2 * coth(1.0) + 3 * coth(2.0)));
                CHECK(std::fabs(s.h) == doctest::Approx(5.7380).epsilon(1e-5));
            }
        }
        CHECK(cone);
        CHECK(sphere);
        bool tube = false;
        for (const auto& s : explicit_solutions(ReducedCase(CaseKind::loxodromic, 3, 2)))
            if (s.name == "tube") {
                tube = true;
                CHECK(std::fabs(s.h) == doctest::Approx(7 * coth(2.0)));
                CHECK(std::fabs(s.h) == doctest::Approx(7.2612).epsilon(1e-5));
            }
        CHECK(tube);
        for (const auto& cs : {ReducedCase(CaseKind::elliptic, 3, 2), ReducedCase(CaseKind::parabolic, 3, 1),
                               ReducedCase(CaseKind::special_loxodromic, 2), ReducedCase(CaseKind::special_parabolic, 3)}) {
            for (const auto& s : explicit_solutions(cs)) {
                for (double t : {0.0, 0.4, 1.3}) {
                    const Vec3 f = ode_rhs(cs, s.state(t), s.h), v = s.velocity(t);
                    for (int i = 0; i < 3; ++i) CHECK(std::fabs(f[i] - v[i]) < 1e-12);
                }
            }
        }
    }
}
