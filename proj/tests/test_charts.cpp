#include <doctest.h>

#include "hqn/charts.hpp"
#include "hqn/errors.hpp"
#include "support.hpp"

using namespace hqn;
using namespace test_support;

namespace {

BallPoint on_axis(std::size_t n, double t) {
    QVector x(n);
    x[n - 1] = t;
    return BallPoint(x);
}

}  // namespace

TEST_SUITE("charts") {
    TEST_CASE("domain checks") {
        CHECK_THROWS_AS(on_axis(2, 1.0), NotInteriorError);
        QVector z(2);
        z[1] = -0.1;
        CHECK_THROWS_AS(SiegelPoint{z}, NotInteriorError);
        CHECK_THROWS_AS(HoroPoint(QVector(1), 0.0, Quaternion()), NotInteriorError);
        CHECK_THROWS_AS(HoroPoint(QVector(1), 1.0, Quaternion(1.0)), DomainError);
    }

    TEST_CASE("lift and projection") {
        const std::size_t n = 3;
        QVector X(n + 1, FormKind::lorentz);
        const Quaternion q(0.2, 0.1, -0.3, 0.4);
        X[n - 1] = q;
        X[n] = 1.0;
        const BallPoint b = ball_from_lift(X);
        CHECK(qdist(b.x()[n - 1], q) < 1e-15);
        CHECK(b.x()[0] == Quaternion());
        const BallPoint bj = ball_from_lift(X.right_mul(Quaternion::unit_j()));
        CHECK(vdist(b.x().to_reals(), bj.x().to_reals()) < 1e-15);
        QVector inf(n + 1, FormKind::lorentz);
        inf[n - 1] = 1.0;
        inf[n] = 1.0;
        CHECK_THROWS_AS(ball_from_lift(inf), NotInteriorError);
    }

    TEST_CASE("distance") {
        const ChartPoint o = BallPoint(QVector(2));
        CHECK(dist(o, o) == doctest::Approx(0.0));
        CHECK(dist(o, on_axis(2, 0.5)) == doctest::Approx(std::log(3.0)).epsilon(1e-14));
        for (double s : {0.1, 0.7, 2.0}) CHECK(dist(o, on_axis(2, std::tanh(s))) == doctest::Approx(2 * s).epsilon(1e-12));
        std::mt19937_64 rng(11);
        for (int t = 0; t < 50; ++t) {
            const ChartPoint p = random_ball(rng, 3), q = random_ball(rng, 3);
            CHECK(std::fabs(dist(p, q) - dist(q, p)) < 1e-12);
            CHECK(std::fabs(dist(convert(p, Chart::horo), convert(q, Chart::siegel)) - dist(p, q)) < 1e-9);
        }
    }

    TEST_CASE("cayley transform") {
        const SiegelPoint z = cayley(BallPoint(QVector(2)));
        CHECK(qdist(z.zeta()[1], Quaternion(0.5)) < 1e-15);
        CHECK(z.zeta()[0] == Quaternion());
        for (double s : {0.3, 1.0}) {
            const SiegelPoint w = cayley(on_axis(2, std::tanh(s)));
            CHECK(qdist(w.zeta()[1], Quaternion(0.5 * std::exp(2 * s))) < 1e-13);
        }
        QVector zz(2);
        zz[1] = 0.5;
        CHECK(norm(cayley_inv(SiegelPoint(zz)).x()) < 1e-15);
        zz[1] = 0.5 * std::exp(2.0);
        CHECK(qdist(cayley_inv(SiegelPoint(zz)).x()[1], Quaternion(std::tanh(1.0))) < 1e-14);
    }

    TEST_CASE("horospherical coordinates") {
        QVector zz(3);
        zz[2] = 0.5;
        const HoroPoint h = horo_from_siegel(SiegelPoint(zz));
        CHECK(h.alpha() == doctest::Approx(1.0));
        CHECK(norm(h.omega()) < 1e-15);
        CHECK(h.beta().norm() < 1e-15);
        zz[2] = 0.5 * std::exp(1.4);
        CHECK(horo_from_siegel(SiegelPoint(zz)).alpha() == doctest::Approx(std::exp(1.4)).epsilon(1e-14));
    }

    TEST_CASE("round trips on random points") {
        std::mt19937_64 rng(12);
        for (std::size_t n : {2u, 3u, 4u}) {
            for (int t = 0; t < 100; ++t) {
                const BallPoint b = random_ball(rng, n);
                const SiegelPoint z = cayley(b);
                CHECK(vdist(cayley_inv(z).x().to_reals(), b.x().to_reals()) < 1e-12);
                const HoroPoint h = horo_from_siegel(z);
                CHECK(vdist(siegel_from_horo(h).zeta().to_reals(), z.zeta().to_reals()) < 1e-12 * (1 + norm(z.zeta())));
                CHECK(vdist(coordinates(to_ball(to_horo(to_siegel(ChartPoint(b))))), coordinates(b)) < 1e-12);
                CHECK(vdist(coordinates(from_coordinates(Chart::horo, coordinates(h))), coordinates(h)) == 0.0);
            }
        }
    }

    TEST_CASE("busemann function") {
        CHECK(busemann(HoroPoint(QVector(1), 1.0, Quaternion())) == doctest::Approx(0.0));
        CHECK(busemann(HoroPoint(QVector(1), std::exp(2.0), Quaternion())) == doctest::Approx(-2.0));
        std::mt19937_64 rng(13);
        for (int t = 0; t < 20; ++t) {
            const HoroPoint p(random_vec(rng, 2), 0.7, random_im(rng));
            CHECK(busemann(to_ball(p)) == doctest::Approx(-std::log(0.7)).epsilon(1e-10));
        }
    }

    TEST_CASE("metric") {
        std::vector<double> u = {0.3, -0.2, 0.5, 0.1, 0.7, 0.0, 0.2, -0.4};
        double u2 = 0.0;
        for (double c : u) u2 += c * c;
        const ChartPoint o = BallPoint(QVector(2));
        CHECK(metric_eval(o, {Chart::ball, u}, {Chart::ball, u}) == doctest::Approx(4 * u2));
        const double t = 0.6;
        std::vector<double> en(8, 0.0);
        en[4] = 1.0;
        CHECK(metric_eval(on_axis(2, t), {Chart::ball, en}, {Chart::ball, en}) ==
              doctest::Approx(4 / std::pow(1 - t * t, 2)).epsilon(1e-13));
        std::vector<double> bk(8, 0.0);
        bk[7] = 1.0;
        const ChartPoint h = HoroPoint(QVector(1), 1.0, Quaternion());
        CHECK(metric_eval(h, {Chart::horo, bk}, {Chart::horo, bk}) == doctest::Approx(1.0).epsilon(1e-12));
    }

    TEST_CASE("metric is chart independent") {
        std::mt19937_64 rng(14);
        std::normal_distribution<double> nd;
        for (int t = 0; t < 10; ++t) {
            const ChartPoint b = random_ball(rng, 2, 0.7);
            std::vector<double> u(8);
            for (auto& c : u) c = nd(rng);
            const Tangent tb{Chart::ball, u};
            const double g = metric_eval(b, tb, tb);
            const ChartPoint h = convert(b, Chart::horo);
            const Tangent th = pushforward(b, tb, Chart::horo);
            CHECK(metric_eval(h, th, th) == doctest::Approx(g).epsilon(1e-6));
        }
    }
}
