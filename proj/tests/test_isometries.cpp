#include <doctest.h>

#include "hqn/errors.hpp"
#include "hqn/isometries.hpp"
#include "support.hpp"

using namespace hqn;
using namespace test_support;

namespace {

double horo_diff(const HoroPoint& a, const HoroPoint& b) { return vdist(coordinates(a), coordinates(b)); }

HeisenbergElement random_heis(std::mt19937_64& rng, std::size_t n) {
    return HeisenbergElement(random_vec(rng, n - 1, 0.7), random_im(rng, 0.7));
}

}  // namespace

TEST_SUITE("isometries") {
    TEST_CASE("identity elements") {
        const auto I = QMatrix::identity(3);
        CHECK((make_isometry(HeisenbergElement::identity(2)).matrix() - I).max_abs() < 1e-15);
        CHECK((make_isometry(Transvection{0.0}, 2).matrix() - I).max_abs() < 1e-15);
        CHECK_THROWS_AS(Isometry(2.0 * I), NotSymplecticError);
    }

    TEST_CASE("membership of Iwasawa factors") {
        std::mt19937_64 rng(21);
        for (std::size_t n : {2u, 3u, 4u}) {
            for (int t = 0; t < 50; ++t) {
                CHECK(symplectic_defect(make_isometry(random_heis(rng, n)).matrix()) < 1e-12);
                std::normal_distribution<double> nd;
                CHECK(symplectic_defect(make_isometry(Transvection{nd(rng)}, n).matrix()) < 1e-12);
                CHECK(unitary_defect(random_symplectic(n - 1, rng)) < 1e-12);
            }
        }
    }

    TEST_CASE("transvection moves the origin along the axis") {
        for (double t : {0.3, 1.2}) {
            const BallPoint b = to_ball(act(make_isometry(Transvection{t}, 2), BallPoint(QVector(2))));
            CHECK(qdist(b.x()[1], Quaternion(std::tanh(t))) < 1e-14);
            CHECK(b.x()[0].norm() < 1e-15);
        }
    }

    TEST_CASE("closed-form horospherical actions") {
        const HoroPoint base(QVector(1), 1.0, Quaternion());
        const HoroPoint moved = act_horo_closed(Transvection{1.0}, base);
        CHECK(moved.alpha() == doctest::Approx(std::exp(2.0)));
        CHECK(norm(moved.omega()) == 0.0);

        const QVector xi{Quaternion(0.1, 0.2, 0.3, 0.4)};
        const Quaternion nu(0, 0.5, -0.1, 0.2);
        const HoroPoint hp = act_horo_closed(HeisenbergElement(xi, nu), HoroPoint(QVector(1), 2.0, Quaternion()));
        CHECK(qdist(hp.omega()[0], xi[0]) < 1e-15);
        CHECK(hp.alpha() == doctest::Approx(2.0));
        CHECK(qdist(hp.beta(), nu) < 1e-15);

        const HoroPoint rp = act_horo_closed(HoroRotation{QMatrix::identity(1), Quaternion::unit_k()},
                                             HoroPoint(QVector(1), 1.0, Quaternion::unit_i()));
        CHECK(qdist(rp.beta(), -Quaternion::unit_i()) < 1e-15);
    }

    TEST_CASE("matrix and closed-form actions agree") {
        std::mt19937_64 rng(22);
        std::normal_distribution<double> nd;
        for (std::size_t n : {2u, 3u}) {
            for (int t = 0; t < 50; ++t) {
                const HoroPoint p = random_horo(rng, n);
                const HoroMotion motions[] = {random_heis(rng, n), Transvection{0.5 * nd(rng)},
                                              HoroRotation{random_symplectic(n - 1, rng), random_unit_quaternion(rng)}};
                for (const auto& g : motions) {
                    const HoroPoint a = to_horo(act(make_isometry(g, n), p));
                    const HoroPoint b = act_horo_closed(g, p);
                    CHECK(horo_diff(a, b) < 1e-10 * (1 + norm(QVector::from_reals(coordinates(b)))));
                }
            }
        }
    }

    TEST_CASE("Heisenberg group law") {
        const QVector xi{Quaternion(0.3, 0.1, 0, 0.2)};
        const Quaternion nu(0, 0.4, 0, 0);
        const auto prod = heis_mul(HeisenbergElement(xi, Quaternion()), HeisenbergElement(QVector(1), nu));
        CHECK(qdist(prod.xi[0], xi[0]) < 1e-15);
        CHECK(qdist(prod.nu, nu) < 1e-15);

        const HeisenbergElement a(QVector{Quaternion(1.0), Quaternion()}, Quaternion());
        const HeisenbergElement b(QVector{Quaternion::unit_i(), Quaternion()}, Quaternion());
        CHECK(qdist(heis_mul(a, b).nu, Quaternion(0, 2, 0, 0)) < 1e-15);
        CHECK(qdist(heis_mul(b, a).nu, Quaternion(0, -2, 0, 0)) < 1e-15);

        std::mt19937_64 rng(23);
        for (int t = 0; t < 20; ++t) {
            const auto g = random_heis(rng, 3), h = random_heis(rng, 3);
            const auto e = heis_mul(g, heis_inverse(g));
            CHECK(norm(e.xi) < 1e-15);
            CHECK(e.nu.norm() < 1e-15);
            const auto m = make_isometry(g) * make_isometry(h);
            CHECK((m.matrix() - make_isometry(heis_mul(g, h)).matrix()).max_abs() < 1e-12);
        }
    }

    TEST_CASE("isometries preserve distance") {
        std::mt19937_64 rng(24);
        std::normal_distribution<double> nd;
        for (int t = 0; t < 100; ++t) {
            const std::size_t n = 2 + t % 2;
            Isometry g = make_isometry(random_heis(rng, n)) * make_isometry(Transvection{0.5 * nd(rng)}, n) *
                         make_isometry(Rotation{random_symplectic(n, rng), random_unit_quaternion(rng)});
            const ChartPoint p = random_ball(rng, n, 0.8), q = random_ball(rng, n, 0.8);
            CHECK(std::fabs(dist(act(g, p), act(g, q)) - dist(p, q)) < 1e-9);
            CHECK(vdist(coordinates(act(g.inverse(), act(g, p))), coordinates(p)) < 1e-10);
        }
    }

    TEST_CASE("inversion") {
        const HoroPoint one = inversion_horo(HoroPoint(QVector(1), 1.0, Quaternion()));
        CHECK(one.alpha() == doctest::Approx(1.0));
        CHECK(inversion_horo(HoroPoint(QVector(1), 4.0, Quaternion())).alpha() == doctest::Approx(0.25));
        std::mt19937_64 rng(25);
        for (int t = 0; t < 100; ++t) {
            const HoroPoint p = random_horo(rng, 3);
            CHECK(horo_diff(inversion_horo(inversion_horo(p)), p) < 1e-11);
        }
        const BoundaryPoint inf = BoundaryPoint::at_infinity(2);
        const BoundaryPoint zero = inversion_horo(inf);
        CHECK(!zero.infinity);
        CHECK(inversion_horo(zero).infinity);
    }

    TEST_CASE("reflection in a positive vector") {
        std::mt19937_64 rng(26);
        const std::size_t n = 3;
        QVector lam(n + 1, FormKind::lorentz);
        lam[0] = 1.0;
        lam[1] = 0.3;
        const QVector ml = inversion_at_hyperplane(lam, lam);
        for (std::size_t i = 0; i <= n; ++i) CHECK(qdist(ml[i], -lam[i]) < 1e-15);
        QVector perp(n + 1, FormKind::lorentz);
        perp[2] = Quaternion(0.2, 0.4, 0, 0);
        perp[3] = 1.0;
        const QVector fixed = inversion_at_hyperplane(lam, perp);
        for (std::size_t i = 0; i <= n; ++i) CHECK(qdist(fixed[i], perp[i]) < 1e-15);
        for (int t = 0; t < 50; ++t) {
            const QVector X = random_vec(rng, n + 1).with_kind(FormKind::lorentz);
            const QVector Y = inversion_at_hyperplane(lam, X);
            CHECK(qdist(herm_lorentz(Y, Y), herm_lorentz(X, X)) < 1e-12 * (1 + X.euclidean_norm2()));
        }
        QVector neg(n + 1, FormKind::lorentz);
        neg[n] = 1.0;
        CHECK_THROWS_AS(inversion_at_hyperplane(neg, perp), NotPolarError);
    }
}
