#include "hqn/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "hqn/errors.hpp"
#include "hqn/integrator.hpp"
#include "hqn/isometries.hpp"
#include "hqn/loci.hpp"
#include "hqn/oracles.hpp"
#include "hqn/reduction.hpp"

namespace hqn {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kSeed = 20240917;

std::string tag(const ReducedCase& cs) {
    std::string s = cs.key() + " n=" + std::to_string(cs.n());
    if (cs.kind() == CaseKind::elliptic || cs.kind() == CaseKind::loxodromic || cs.kind() == CaseKind::parabolic)
        s += " m=" + std::to_string(cs.m());
    return s;
}

std::vector<ReducedCase> cases_for(int n) {
    std::vector<ReducedCase> out;
    for (int m = 1; m <= n - 1; ++m) out.emplace_back(CaseKind::elliptic, n, m);
    for (int m = 2; m <= n - 1; ++m) out.emplace_back(CaseKind::loxodromic, n, m);
    out.emplace_back(CaseKind::special_loxodromic, n);
    for (int m = 1; m <= n - 1; ++m) out.emplace_back(CaseKind::parabolic, n, m);
    out.emplace_back(CaseKind::special_parabolic, n);
    return out;
}

Quaternion random_quaternion(std::mt19937_64& rng, double scale) {
    std::normal_distribution<double> nd(0.0, scale);
    return {nd(rng), nd(rng), nd(rng), nd(rng)};
}

Quaternion random_imaginary(std::mt19937_64& rng, double scale) {
    std::normal_distribution<double> nd(0.0, scale);
    return {0.0, nd(rng), nd(rng), nd(rng)};
}

QVector random_qvector(std::mt19937_64& rng, std::size_t n, double scale) {
    QVector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = random_quaternion(rng, scale);
    return v;
}

HoroPoint random_horo(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> ua(0.2, 3.0);
    return HoroPoint(random_qvector(rng, n - 1, 0.7), ua(rng), random_imaginary(rng, 0.7));
}

// Points at moderate distance from the base point, where step-1e-3 differences stay accurate.
HoroPoint random_horo_moderate(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> ua(0.5, 2.0);
    const double w = 0.5 / std::sqrt(double(n - 1));
    return HoroPoint(random_qvector(rng, n - 1, w), ua(rng), random_imaginary(rng, 0.5));
}

BallPoint random_ball(std::mt19937_64& rng, std::size_t n) {
    QVector v = random_qvector(rng, n, 1.0);
    std::uniform_real_distribution<double> ur(0.0, 0.9);
    const double r = ur(rng) / std::sqrt(v.euclidean_norm2());
    return BallPoint(r * v);
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::fabs(a[i] - b[i]));
    return d;
}

double rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double scale = 1.0;
    for (double x : b) scale = std::max(scale, std::fabs(x));
    return max_abs_diff(a, b) / scale;
}

double matrix_diff(const QMatrix& a, const QMatrix& b) { return (a - b).max_abs(); }

HoroMotion random_motion(std::mt19937_64& rng, std::size_t n, int kind) {
    std::uniform_real_distribution<double> ut(-2.0, 2.0);
    switch (kind) {
        case 0: return HeisenbergElement(random_qvector(rng, n - 1, 0.7), random_imaginary(rng, 0.7));
        case 1: return Transvection{ut(rng)};
        default: return HoroRotation{random_symplectic(n - 1, rng), random_unit_quaternion(rng)};
    }
}

SuiteResult suite_group(int n_) {
    const std::size_t n = static_cast<std::size_t>(n_);
    std::mt19937_64 rng(kSeed);
    SuiteResult r{"group", n_, {}};
    const int samples = 50;
    const char* names[3] = {"heisenberg", "transvection", "horo-rotation"};
    for (int kind = 0; kind < 3; ++kind) {
        double defect = 0.0, action = 0.0;
        for (int k = 0; k < samples; ++k) {
            const HoroMotion g = random_motion(rng, n, kind);
            const Isometry A = make_isometry(g, n);
            defect = std::max(defect, symplectic_defect(A.matrix()) / std::max(1.0, std::pow(A.matrix().max_abs(), 2)));
            const HoroPoint p = random_horo(rng, n);
            action = std::max(action, rel_diff(coordinates(act(A, p)), coordinates(act_horo_closed(g, p))));
        }
        r.checks.push_back(make_check(std::string(names[kind]) + " matrices in Sp(n,1)", defect, 1e-12));
        r.checks.push_back(make_check(std::string(names[kind]) + " matrix vs closed-form action", action, 1e-10));
    }
    {
        double defect = 0.0;
        for (int k = 0; k < samples; ++k) {
            const Isometry A = make_isometry(Rotation{random_symplectic(n, rng), random_unit_quaternion(rng)});
            defect = std::max(defect, symplectic_defect(A.matrix()));
        }
        r.checks.push_back(make_check("rotation matrices in Sp(n,1)", defect, 1e-12));
    }
    {
        double law = 0.0;
        for (int k = 0; k < samples; ++k) {
            const HeisenbergElement a(random_qvector(rng, n - 1, 0.7), random_imaginary(rng, 0.7));
            const HeisenbergElement b(random_qvector(rng, n - 1, 0.7), random_imaginary(rng, 0.7));
            law = std::max(law, matrix_diff(make_isometry(heis_mul(a, b)).matrix(),
                                            (make_isometry(a) * make_isometry(b)).matrix()));
        }
        r.checks.push_back(make_check("Heisenberg group law", law, 1e-12));
    }
    {
        double bs = 0.0, di = 0.0, inv = 0.0;
        std::uniform_real_distribution<double> ut(-2.0, 2.0);
        for (int k = 0; k < samples; ++k) {
            const double t = ut(rng);
            const HoroPoint p = random_horo(rng, n);
            const ChartPoint q = act(make_isometry(Transvection{t}, n), p);
            bs = std::max(bs, std::fabs(busemann(q) - (busemann(p) - 2 * t)));
            const Isometry g = make_isometry(random_motion(rng, n, 0), n) * make_isometry(random_motion(rng, n, 1), n) *
                               make_isometry(Rotation{random_symplectic(n, rng), random_unit_quaternion(rng)});
            const ChartPoint a = random_ball(rng, n), b = random_ball(rng, n);
            const double d0 = dist(a, b);
            di = std::max(di, std::fabs(dist(act(g, a), act(g, b)) - d0) / std::max(1.0, d0));
            const HoroPoint ip = inversion_horo(inversion_horo(p));
            inv = std::max(inv, rel_diff(coordinates(ip), coordinates(p)));
        }
        r.checks.push_back(make_check("busemann shift under transvection", bs, 1e-12));
        r.checks.push_back(make_check("distance invariance", di, 1e-9));
        r.checks.push_back(make_check("horospherical inversion is an involution", inv, 1e-12));
    }
    {
        double bb = 0.0, hh = 0.0, bh = 0.0;
        for (int k = 0; k < samples; ++k) {
            const BallPoint x = random_ball(rng, n);
            bb = std::max(bb, max_abs_diff(coordinates(cayley_inv(cayley(x))), coordinates(x)));
            bh = std::max(bh, max_abs_diff(coordinates(to_ball(to_horo(x))), coordinates(x)));
            const HoroPoint h = random_horo(rng, n);
            hh = std::max(hh, rel_diff(coordinates(to_horo(to_ball(h))), coordinates(h)));
        }
        r.checks.push_back(make_check("ball->siegel->ball round trip", bb, 1e-12));
        r.checks.push_back(make_check("ball->horo->ball round trip", bh, 1e-12));
        r.checks.push_back(make_check("horo->ball->horo round trip", hh, 1e-12));
    }
    return r;
}

SuiteResult suite_reduction(int n) {
    SuiteResult r{"reduction", n, {}};
    std::mt19937_64 rng(kSeed + 1);
    std::uniform_real_distribution<double> us(-kPi, kPi), uh(-2.0, 2.0);
    for (const ReducedCase& cs : cases_for(n)) {
        const auto pts = principal_samples(cs, 100, kSeed + 2);
        double worst = 0.0, speed = 0.0;
        const Vec2 e1{1, 0}, e2{0, 1};
        for (const Vec2& c : pts) {
            const PhaseState s{c[0], c[1], us(rng)};
            const double h = uh(rng);
            const Vec3 f = ode_rhs(cs, s, h);
            const double g = reconstructed_sigma_rate(cs, s, h);
            worst = std::max(worst, std::fabs(f[2] - g) / std::max(1.0, std::fabs(f[2])));
            const double E = orbital_metric(cs, c, e1, e1), G = orbital_metric(cs, c, e2, e2);
            speed = std::max({speed, std::fabs(f[0] * std::sqrt(E) - std::cos(s.sigma)),
                              std::fabs(f[1] * std::sqrt(G) - std::sin(s.sigma))});
        }
        r.checks.push_back(make_check(tag(cs) + ": ode_rhs vs volume-functional reconstruction", worst, 1e-6));
        r.checks.push_back(make_check(tag(cs) + ": unit speed in the orbital metric", speed, 1e-12));
        if (cs.polar()) {
            double ratio_lo = INFINITY, ratio_hi = -INFINITY, metric = 0.0;
            for (const Vec2& c : pts) {
                const Vec2 uv = cartesian_from_polar(c);
                const double q = volume_functional_cartesian(cs, uv) / volume_functional(cs, c);
                ratio_lo = std::min(ratio_lo, q);
                ratio_hi = std::max(ratio_hi, q);
                // Polar metric against the disc form through the Jacobian.
                const double t = std::tanh(c[0]), sech2 = 1.0 - t * t;
                const Vec2 dr{sech2 * std::cos(c[1]), sech2 * std::sin(c[1])};
                const Vec2 dt{-t * std::sin(c[1]), t * std::cos(c[1])};
                for (const auto& [a, b] : {std::pair{e1, e1}, std::pair{e1, e2}, std::pair{e2, e2}}) {
                    const Vec2 pa{a[0] * dr[0] + a[1] * dt[0], a[0] * dr[1] + a[1] * dt[1]};
                    const Vec2 pb{b[0] * dr[0] + b[1] * dt[0], b[0] * dr[1] + b[1] * dt[1]};
                    const double gp = orbital_metric(cs, c, a, b);
                    const double gc = orbital_metric_cartesian(uv, pa, pb);
                    metric = std::max(metric, std::fabs(gp - gc) / std::max(1.0, std::fabs(gp)));
                }
            }
            r.checks.push_back(
                make_check(tag(cs) + ": disc and polar volume functionals proportional", (ratio_hi - ratio_lo) / ratio_hi, 1e-12));
            r.checks.push_back(make_check(tag(cs) + ": disc and polar orbital metrics agree", metric, 1e-12));
        }
    }
    return r;
}

SuiteResult suite_killing(int n, unsigned threads) {
    SuiteResult r{"killing", n, {}};
    for (const ReducedCase& cs : cases_for(n)) {
        const KillingOracle oracle(cs);
        r.checks.push_back(make_check(tag(cs) + ": reference condition number", oracle.reference_condition_number(), 1e6));
        r.checks.push_back(make_check(tag(cs) + ": orbit dimension 4n-2",
                                      std::fabs(double(oracle.orbit_dimension()) - (4.0 * n - 2)), 0.5));
        const auto pts = principal_samples(cs, 50, kSeed + 3);
        const RatioSpread rs = killing_ratio_spread(cs, pts, {}, threads);
        r.checks.push_back(make_check(tag(cs) + ": Killing/V ratio spread", rs.spread, 1e-5));
        if (cs.kind() != CaseKind::special_parabolic) {
            const Vec2 near = cs.polar() ? Vec2{0.8, 1e-3 * cs.c2_max()} : Vec2{1.0, 1e-3};
            const double q = oracle.volume(section_point(cs, near)) / volume_functional(cs, near);
            r.checks.push_back(make_check(tag(cs) + ": near-stratum ratio matches", std::fabs(q / rs.mean - 1.0), 1e-4));
        }
        if (cs.kind() == CaseKind::special_loxodromic) {
            const int e = 4 * n - 5;
            auto linear = [e](const Vec2& c) {
                const double sh = std::sinh(c[0]), ch = std::cosh(c[0]), ct = std::cos(c[1]);
                return (ch * ch + sh * sh * ct * ct) * std::pow(sh, e) * std::pow(std::sin(c[1]), e);
            };
            const RatioSpread wrong = killing_ratio_spread(cs, pts, linear, threads);
            r.checks.push_back(make_check(tag(cs) + ": exponent-1 variant is rejected", wrong.spread, 0.1, ">"));
        }
    }
    return r;
}

double max_abs_mean_curvature(const BallResidual& F, const std::vector<ChartPoint>& pts, double target) {
    double worst = 0.0;
    for (const auto& p : pts) worst = std::max(worst, std::fabs(ambient_mean_curvature(F, p) - target));
    return worst;
}

// Bisection on a ball segment from a to b for a root of f.
BallPoint segment_root(const BallResidual& f, const BallPoint& a, const BallPoint& b) {
    double lo = 0.0, hi = 1.0;
    const QVector& xa = a.x();
    const QVector& xb = b.x();
    auto at = [&](double t) { return BallPoint((1.0 - t) * xa + t * xb); };
    const double flo = f(a);
    for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((f(at(mid)) > 0.0) == (flo > 0.0))
            lo = mid;
        else
            hi = mid;
    }
    const BallPoint p0 = at(lo), p1 = at(hi);
    return std::fabs(f(p0)) < std::fabs(f(p1)) ? p0 : p1;
}

SuiteResult suite_minimality(int n_) {
    const std::size_t n = static_cast<std::size_t>(n_);
    SuiteResult r{"minimality", n_, {}};
    std::mt19937_64 rng(kSeed + 4);
    const int count = 20;
    auto horo_points = [&](auto&& adjust) {
        std::vector<ChartPoint> pts;
        for (int k = 0; k < count; ++k) {
            HoroPoint p = random_horo_moderate(rng, n);
            pts.push_back(adjust(p));
        }
        return pts;
    };
    {
        auto pts = horo_points([](HoroPoint p) {
            Quaternion b = p.beta();
            b.q3 = 0.0;
            return HoroPoint(p.omega(), p.alpha(), b);
        });
        const BallResidual F = [](const BallPoint& b) { return canonical_bisector_residual(to_horo(b)); };
        r.checks.push_back(make_check("canonical bisector |H|", max_abs_mean_curvature(F, pts, 0.0), 1e-3));
    }
    {
        const Fan fan = standard_fan(n);
        auto pts = horo_points([](HoroPoint p) {
            QVector w = p.omega();
            w[w.size() - 1].q0 = 0.0;
            return HoroPoint(w, p.alpha(), p.beta());
        });
        const BallResidual F = [fan](const BallPoint& b) { return fan_residual(to_horo(b), fan); };
        r.checks.push_back(make_check("fan Re(w_{n-1}) = 0 |H|", max_abs_mean_curvature(F, pts, 0.0), 1e-3));
    }
    {
        auto pts = horo_points([](HoroPoint p) { return HoroPoint(p.omega(), 1.0, p.beta()); });
        const BallResidual F = [](const BallPoint& b) { return to_horo(b).alpha() - 1.0; };
        r.checks.push_back(make_check("horosphere alpha = 1 |H - (2n+1)|",
                                      max_abs_mean_curvature(F, pts, 2.0 * n_ + 1.0), 1e-3));
    }
    {
        const double t = 0.5;
        auto pts = horo_points([t](HoroPoint p) {
            Quaternion b = p.beta();
            b.q3 = 2 * t * p.omega()[p.omega().size() - 1].q3;
            return HoroPoint(p.omega(), p.alpha(), b);
        });
        const BallResidual F = [t](const BallPoint& b) { return bisector_family_residual(to_horo(b), t); };
        r.checks.push_back(make_check("bisector family t=1/2 |H|", max_abs_mean_curvature(F, pts, 0.0), 1e-3));
    }
    {
        auto pts = horo_points([](HoroPoint p) {
            QVector w = p.omega();
            w[w.size() - 1].q3 = 0.0;
            return inversion_horo(HoroPoint(w, p.alpha(), p.beta()));
        });
        double res = 0.0;
        for (const auto& p : pts) res = std::max(res, std::fabs(fan_at_origin_residual(std::get<HoroPoint>(p))));
        r.checks.push_back(make_check("inverted fan lies on the fan-at-origin locus", res, 1e-10));
        const BallResidual F = [](const BallPoint& b) { return fan_at_origin_residual(to_horo(b)); };
        r.checks.push_back(make_check("fan at origin |H|", max_abs_mean_curvature(F, pts, 0.0), 1e-3));
    }
    {
        const BallPoint p1 = random_ball(rng, n), p2 = random_ball(rng, n);
        const BallResidual F = [&](const BallPoint& b) { return bisector_residual(b, p1, p2); };
        std::vector<ChartPoint> pts;
        while (pts.size() < static_cast<std::size_t>(count)) {
            const BallPoint q = random_ball(rng, n);
            const double fq = F(q);
            if (fq == 0.0) continue;
            pts.push_back(segment_root(F, fq > 0.0 ? p1 : p2, q));
        }
        double res = 0.0;
        for (const auto& p : pts) res = std::max(res, std::fabs(F(std::get<BallPoint>(p))));
        r.checks.push_back(make_check("sampled points on bisector of two random points", res, 1e-10));
        r.checks.push_back(make_check("bisector of two random points |H|", max_abs_mean_curvature(F, pts, 0.0), 1e-3));
    }
    return r;
}

// Central-difference rate of the I1 column on uniform samples.
template <class Fn>
void for_each_interior_rate(const ProfileCurve& c, Fn&& fn) {
    const auto& u = c.uniform;
    for (std::size_t k = 1; k + 1 < u.size(); ++k)
        fn(u[k], (u[k + 1].I1 - u[k - 1].I1) / (u[k + 1].s - u[k - 1].s), (u[k + 1].I2 - u[k - 1].I2) / (u[k + 1].s - u[k - 1].s));
}

SuiteResult suite_growth(int n, unsigned threads) {
    SuiteResult r{"growth", n, {}};
    IntegrationOptions opt;
    opt.s_max = 20.0;
    opt.tol = 1e-10;
    const std::vector<double> grid{0.5, 1.0, 2.0};
    for (const ReducedCase& cs : cases_for(n)) {
        if (cs.kind() != CaseKind::elliptic && cs.kind() != CaseKind::loxodromic) continue;
        const auto curves = generate_family(cs, grid, opt, threads);
        for (const auto& c : curves) {
            const std::string t = tag(cs) + " a=" + std::to_string(c.a).substr(0, 3);
            double sig = -INFINITY, mono = INFINITY, growth = -INFINITY;
            for (const auto& s : c.samples)
                if (s.s > 0.0) sig = std::max(sig, std::fabs(s.state.sigma));
            for (std::size_t k = 1; k < c.uniform.size(); ++k)
                mono = std::min(mono, c.uniform[k].state.c1 - c.uniform[k - 1].state.c1);
            const double lam = (4.0 * n + 1.0) / 2.0;
            for_each_interior_rate(c, [&](const Sample& s, double dI, double) {
                growth = std::max(growth, (lam * s.I1 - dI) / (lam * std::fabs(s.I1)));
            });
            r.checks.push_back(make_check(t + ": max |sigma| (s > 0)", sig, kPi / 2));
            r.checks.push_back(make_check(t + ": min increment of r", mono, 0.0, ">"));
            r.checks.push_back(make_check(t + ": growth deficit ((4n+1)/2 I - dI/ds)/((4n+1)/2 I)", growth, 0.0, "<="));
            // I2 holds the exact rate dI/ds; the inequality is asymptotically sharp, so allow rounding.
            double exact = -INFINITY;
            for (const auto& s : c.samples)
                if (s.s > 0.0 && s.I1 > 0.0) exact = std::max(exact, (lam * s.I1 - s.I2) / (lam * s.I1));
            r.checks.push_back(make_check(t + ": exact-rate growth deficit on accepted steps", exact, 1e-8, "<="));
            r.checks.push_back(make_check(t + ": reached smax", c.termination == Termination::reached_smax ? 0.0 : 1.0, 0.5));
        }
    }
    return r;
}

double sup_state_diff(const ProfileCurve& a, const ProfileCurve& b) {
    const std::size_t k = std::min(a.uniform.size(), b.uniform.size());
    double d = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const auto& x = a.uniform[i].state;
        const auto& y = b.uniform[i].state;
        d = std::max({d, std::fabs(x.c1 - y.c1), std::fabs(x.c2 - y.c2), std::fabs(x.sigma - y.sigma)});
    }
    return d;
}

// Sup distance in disc coordinates and tangent direction angle θ + σ.
double sup_disc_diff(const ProfileCurve& a, const ProfileCurve& b) {
    const std::size_t k = std::min(a.uniform.size(), b.uniform.size());
    double d = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const auto& x = a.uniform[i].state;
        const auto& y = b.uniform[i].state;
        const Vec2 p = cartesian_from_polar({x.c1, x.c2}), q = cartesian_from_polar({y.c1, y.c2});
        double dpsi = std::remainder((x.c2 + x.sigma) - (y.c2 + y.sigma), 2 * kPi);
        d = std::max({d, std::fabs(p[0] - q[0]), std::fabs(p[1] - q[1]), std::fabs(dpsi)});
    }
    return d;
}

SuiteResult suite_family(int n, unsigned threads) {
    SuiteResult r{"family", n, {}};
    const ReducedCase cs(CaseKind::special_loxodromic, n);
    IntegrationOptions opt;
    opt.tol = 1e-10;
    {
        const ProfileCurve c0 = integrate_profile(cs, 0.0, opt);
        double dev = 0.0;
        for (const auto& s : c0.samples) dev = std::max(dev, std::fabs(s.state.c2 - kPi / 2));
        for (const auto& s : c0.uniform) dev = std::max(dev, std::fabs(s.state.c2 - kPi / 2));
        r.checks.push_back(make_check("a=0 stays on theta = pi/2", dev, 1e-12));
    }
    const std::vector<double> grid{-1.0, -0.5, 0.5, 1.0};
    const auto fam = generate_family(cs, grid, opt, threads);
    {
        double dev = 0.0;
        for (std::size_t i = 0; i < 2; ++i) {
            const ProfileCurve& neg = fam[i];
            const ProfileCurve& pos = fam[3 - i];
            const std::size_t k = std::min(neg.uniform.size(), pos.uniform.size());
            for (std::size_t j = 0; j < k; ++j) {
                const auto& x = neg.uniform[j].state;
                const auto& y = pos.uniform[j].state;
                dev = std::max({dev, std::fabs(x.c1 - y.c1), std::fabs(x.c2 - (kPi - y.c2)), std::fabs(x.sigma + y.sigma)});
            }
        }
        r.checks.push_back(make_check("family mirror symmetry gamma_{-a} vs gamma_a", dev, 1e-12));
    }
    {
        double dev = 0.0, scale = 1.0;
        for (double a : {0.5, 1.0}) {
            const ProfileCurve direct = integrate_profile(cs, -a, opt);
            const ProfileCurve mirrored = mirror_curve(integrate_profile(cs, a, opt));
            dev = std::max(dev, sup_state_diff(direct, mirrored));
            scale = std::max(scale, direct.uniform.back().state.c1);
        }
        r.checks.push_back(make_check("direct a<0 integration vs mirror (relative)", dev / scale, 1e-8));
    }
    {
        double worst = 0.0;
        for (double a : {-0.5, 0.0, 0.5, 1.0}) {
            const double b = a + 1e-3;
            auto curve = [&](double x) {
                return x < 0.0 ? mirror_curve(integrate_profile(cs, -x, opt)) : integrate_profile(cs, x, opt);
            };
            worst = std::max(worst, sup_disc_diff(curve(a), curve(b)));
        }
        r.checks.push_back(make_check("neighbouring a (da = 1e-3) sup distance", worst, 1e-2));
    }
    return r;
}

SuiteResult suite_foliation(int n, unsigned threads) {
    SuiteResult r{"foliation", n, {}};
    IntegrationOptions opt;
    opt.tol = 1e-10;
    opt.s_max = 60.0;
    for (int m = 1; m <= n - 1; ++m) {
        const ReducedCase cs(CaseKind::parabolic, n, m);
        const std::vector<double> grid{0.5, 1.0, 2.0};
        const auto fam = generate_family(cs, grid, opt, threads);
        for (const auto& c : fam) {
            const std::string t = tag(cs) + " a=" + std::to_string(c.a).substr(0, 3);
            const double k = 4.0 * n - 4.0 * m;
            const double lo = std::sqrt(c.a * (k - 1) / (4.0 * n + 1)), hi = std::sqrt(c.a * k / (4.0 * n + 2));
            const EndpointLimit lim = limit_endpoint(c);
            r.checks.push_back(make_check(t + ": limit rho minus lower bound", lim.c2 - lo, 0.0, ">"));
            r.checks.push_back(make_check(t + ": limit rho minus upper bound", lim.c2 - hi, 0.0, "<"));
            double signI = -INFINITY, signJ = -INFINITY, dI = -INFINITY, dJ = -INFINITY;
            for (const auto& s : c.uniform) {
                if (s.s <= 0.0) continue;
                signI = std::max(signI, -s.I1);
                signJ = std::max(signJ, s.I2);
            }
            for_each_interior_rate(c, [&](const Sample&, double rI, double rJ) {
                dI = std::max(dI, -rI);
                dJ = std::max(dJ, rJ);
            });
            r.checks.push_back(make_check(t + ": max(-I) for s > 0", signI, 0.0));
            r.checks.push_back(make_check(t + ": max J for s > 0", signJ, 0.0));
            r.checks.push_back(make_check(t + ": max(-dI/ds)", dI, 0.0));
            r.checks.push_back(make_check(t + ": max dJ/ds", dJ, 0.0));
        }
        const FoliationReport rep = foliation_report(fam, {0.5, 1.0, 2.0, 4.0}, opt.tol);
        int bad = 0;
        for (const auto& e : rep.crossings)
            if (e.crossings != 1 || !e.transversal) ++bad;
        double dev = 0.0;
        for (const auto& d : rep.dilations) dev = std::max(dev, d.deviation);
        r.checks.push_back(make_check(tag(cs) + ": curves with crossing count != 1", bad, 0.5));
        r.checks.push_back(make_check(tag(cs) + ": dilation deviation", dev, rep.tolerance));
    }
    {
        const ReducedCase cs(CaseKind::special_parabolic, n);
        IntegrationOptions o = opt;
        o.tol = 1e-11;
        const ProfileCurve c = integrate_profile(cs, 1.0, o);
        double drift = 0.0;
        for (const auto& s : c.samples) drift = std::max(drift, std::fabs(s.I1 - 1.0));
        for (const auto& s : c.uniform) drift = std::max(drift, std::fabs(s.I1 - 1.0));
        const double length = std::max(1.0, c.samples.back().s);
        r.checks.push_back(make_check(tag(cs) + ": |alpha^{-2n-1} sin sigma - 1|", drift, 1e-8));
        r.checks.push_back(make_check(tag(cs) + ": first-integral drift per unit length", drift / length, 1e-9));
        const double R = elliptic_integral_R(n), Rb = elliptic_integral_R_beta(n);
        r.checks.push_back(make_check(tag(cs) + ": quadrature vs Beta identity", std::fabs(R - Rb), 1e-9));
        r.checks.push_back(make_check(tag(cs) + ": ODE limit rho vs R", std::fabs(limit_endpoint(c).c2 - Rb), 1e-6));
        r.checks.push_back(make_check(tag(cs) + ": terminated at the ideal boundary",
                                      c.termination == Termination::reached_smax ? 1.0 : 0.0, 0.5));

        double fan = 0.0;
        for (double R0 : {-1.0, 0.0, 0.3, 2.0}) {
            for (double a : {0.1, 1.0, 10.0}) {
                const Vec3 f = ode_rhs(cs, {a, R0, 0.0}, 0.0);
                fan = std::max({fan, std::fabs(f[1]), std::fabs(f[2]), std::fabs(f[0] - a)});
            }
        }
        r.checks.push_back(make_check(tag(cs) + ": fan lines are stationary (ode_rhs)", fan, 1e-15, "<="));
        IntegrationOptions fo = opt;
        fo.s_max = 10.0;
        const ProfileCurve line = integrate_from_state(cs, {1.0, 0.3, 0.0}, fo);
        r.checks.push_back(make_check(tag(cs) + ": fan line ode_residual", ode_residual(line), 1e-12));

        std::mt19937_64 rng(kSeed + 5);
        const GeneratorBasis basis(cs);
        QVector normal(static_cast<std::size_t>(n) - 1);
        normal[static_cast<std::size_t>(n) - 2] = 1.0;
        const Fan spec{normal, 0.3};
        double inv = 0.0;
        for (int k = 0; k < 50; ++k) {
            HoroPoint p = random_horo(rng, static_cast<std::size_t>(n));
            QVector w = p.omega();
            w[w.size() - 1].q0 = 0.3;
            const HoroPoint q(w, p.alpha(), p.beta());
            const Isometry g = basis.random_element(rng, 0.7);
            inv = std::max(inv, std::fabs(fan_residual(to_horo(act(g, q)), spec)));
        }
        r.checks.push_back(make_check(tag(cs) + ": fan invariant under the acting group", inv, 1e-10));
    }
    return r;
}

SuiteResult suite_explicit(int n) {
    SuiteResult r{"explicit", n, {}};
    for (const ReducedCase& cs : cases_for(n)) {
        for (const ExplicitSolution& sol : explicit_solutions(cs, 1.0)) {
            double worst = 0.0;
            for (int k = 0; k <= 40; ++k) {
                const double s = 0.05 * k;
                const PhaseState st = sol.state(s);
                if (cs.polar() && !(st.c2 > 0.0 && st.c2 < cs.c2_max())) continue;
                const Vec3 f = ode_rhs(cs, st, sol.h);
                const Vec3 v = sol.velocity(s);
                for (int i = 0; i < 3; ++i)
                    worst = std::max(worst, std::fabs(f[i] - v[i]) / std::max(1.0, std::fabs(v[i])));
            }
            r.checks.push_back(make_check(tag(cs) + ": " + sol.name + " solves the system", worst, 1e-12));
            if (sol.name == "cone" && cs.kind() == CaseKind::elliptic && n == 2 && cs.m() == 1)
                r.checks.push_back(make_check("cone angle pi/4 (n=2, m=1)", std::fabs(sol.parameter - kPi / 4), 1e-15, "<="));
            if (sol.name == "sphere" && n == 2 && cs.m() == 1)
                r.checks.push_back(make_check("sphere |h| = 2coth1 + 3coth2",
                                              std::fabs(std::fabs(sol.h) - (2 / std::tanh(1.0) + 3 / std::tanh(2.0))), 1e-12));
            if (sol.name == "tube" && n == 3 && cs.m() == 2)
                r.checks.push_back(make_check("tube |h| = 7coth2 (n=3, m=2)", std::fabs(std::fabs(sol.h) - 7 / std::tanh(2.0)), 1e-12));
            if (sol.name == "horosphere")
                r.checks.push_back(make_check(tag(cs) + ": horosphere |h| = 2n+1", std::fabs(std::fabs(sol.h) - (2.0 * n + 1)), 1e-15, "<="));
        }
    }
    const ReducedCase e21(CaseKind::elliptic, 2, 1);
    if (n == 2) {
        const double s = explicit_solutions(e21, 1.0)[1].h;
        r.checks.push_back(make_check("sphere h numeric value 5.7380", std::fabs(s - 5.7380), 5e-5));
    }
    if (n == 3) {
        const double t = explicit_solutions(ReducedCase(CaseKind::loxodromic, 3, 2), 1.0)[1].h;
        r.checks.push_back(make_check("tube h numeric value 7.2612", std::fabs(t - 7.2612), 5e-5));
    }
    return r;
}

}  // namespace

Check make_check(std::string name, double value, double bound, std::string relation) {
    Check c{std::move(name), value, bound, std::move(relation), false};
    if (c.relation == "<")
        c.pass = value < bound;
    else if (c.relation == "<=")
        c.pass = value <= bound;
    else if (c.relation == ">")
        c.pass = value > bound;
    else
        throw DomainError("unknown check relation '" + c.relation + "'");
    return c;
}

bool SuiteResult::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"group",    "reduction", "killing",  "minimality",
                                                "growth", "family",  "foliation", "explicit"};
    return names;
}

SuiteResult run_suite(const std::string& suite, int n, unsigned threads) {
    if (n < 2) throw DomainError("verification needs n >= 2");
    if (suite == "group") return suite_group(n);
    if (suite == "reduction") return suite_reduction(n);
    if (suite == "killing") return suite_killing(n, threads == 0 ? thread_count_from_env() : threads);
    if (suite == "minimality") return suite_minimality(n);
    if (suite == "growth") return suite_growth(n, threads);
    if (suite == "family") return suite_family(n, threads);
    if (suite == "foliation") return suite_foliation(n, threads);
    if (suite == "explicit") return suite_explicit(n);
    throw DomainError("unknown suite '" + suite + "'");
}

std::vector<SuiteResult> run_suites(const std::string& suite, int n, unsigned threads) {
    std::vector<SuiteResult> out;
    if (suite == "all") {
        for (const auto& s : suite_names()) out.push_back(run_suite(s, n, threads));
    } else {
        out.push_back(run_suite(suite, n, threads));
    }
    return out;
}

}  // namespace hqn
