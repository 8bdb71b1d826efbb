#include "hqn/reduction.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "hqn/errors.hpp"

namespace hqn {

namespace {

constexpr double kPi = std::numbers::pi;

double coth(double x) { return 1.0 / std::tanh(x); }
double cot(double x) { return std::cos(x) / std::sin(x); }

double block_norm2(const QVector& x, std::size_t from, std::size_t to) {
    double s = 0.0;
    for (std::size_t l = from; l < to; ++l) s += x[l].norm2();
    return s;
}

void require_polar(const ReducedCase& cs, const char* what) {
    if (!cs.polar()) throw DomainError(std::string(what) + " needs an elliptic or loxodromic kind");
}

// Validates a phase point for the closed-form evaluators (closure of Δ).
void require_closure(const ReducedCase& cs, const Vec2& c) {
    if (cs.polar()) {
        if (!(c[0] >= 0.0)) throw DomainError("r < 0");
        if (!(c[1] >= 0.0 && c[1] <= cs.c2_max())) throw DomainError("theta outside [0, theta_max]");
    } else {
        if (!(c[0] > 0.0)) throw DomainError("alpha <= 0");
        if (cs.kind() == CaseKind::parabolic && !(c[1] >= 0.0)) throw DomainError("rho < 0");
    }
}

}  // namespace

std::string to_string(CaseKind kind) {
    switch (kind) {
        case CaseKind::elliptic: return "elliptic";
        case CaseKind::loxodromic: return "loxodromic";
        case CaseKind::special_loxodromic: return "special-loxodromic";
        case CaseKind::parabolic: return "parabolic";
        case CaseKind::special_parabolic: return "special-parabolic";
    }
    return "?";
}

CaseKind parse_case_kind(const std::string& key) {
    for (CaseKind k : {CaseKind::elliptic, CaseKind::loxodromic, CaseKind::special_loxodromic,
                       CaseKind::parabolic, CaseKind::special_parabolic})
        if (to_string(k) == key) return k;
    throw DomainError("unknown case key '" + key + "'");
}

ReducedCase::ReducedCase(CaseKind kind, int n, int m) : kind_(kind), n_(n), m_(m) {
    auto fail = [&](const std::string& why) {
        throw DomainError(to_string(kind) + " case: " + why + " (n=" + std::to_string(n) +
                          ", m=" + std::to_string(m) + ")");
    };
    if (n < 2) fail("n must be at least 2");
    switch (kind) {
        case CaseKind::elliptic:
        case CaseKind::parabolic:
            if (m < 1 || m > n - 1) fail("m must lie in 1..n-1");
            break;
        case CaseKind::loxodromic:
            if (m < 2 || m > n - 1) fail("m must lie in 2..n-1");
            break;
        case CaseKind::special_loxodromic:
        case CaseKind::special_parabolic:
            m_ = 0;
            break;
    }
}

bool ReducedCase::polar() const {
    return kind_ == CaseKind::elliptic || kind_ == CaseKind::loxodromic ||
           kind_ == CaseKind::special_loxodromic;
}

std::optional<Coefficients> ReducedCase::coefficients() const {
    const int n = n_, m = m_;
    if (kind_ == CaseKind::elliptic) return Coefficients{4 * n - 5, 3, 4 * n - 8 * m, 4 * m - 1};
    if (kind_ == CaseKind::loxodromic) return Coefficients{4 * n - 8 * m + 3, 4 * m - 1, 4 * n - 4 * m - 4, 3};
    return std::nullopt;
}

double ReducedCase::c2_max() const {
    switch (kind_) {
        case CaseKind::elliptic:
        case CaseKind::loxodromic: return kPi / 2;
        case CaseKind::special_loxodromic: return kPi;
        default: return std::numeric_limits<double>::infinity();
    }
}

Vec2 polar_from_cartesian(const Vec2& uv) {
    const double rho = std::hypot(uv[0], uv[1]);
    if (!(rho < 1.0)) throw DomainError("(u,v) outside the unit disc");
    return {std::atanh(rho), std::atan2(uv[1], uv[0])};
}

Vec2 cartesian_from_polar(const Vec2& rt) {
    const double t = std::tanh(rt[0]);
    return {t * std::cos(rt[1]), t * std::sin(rt[1])};
}

Vec2 orbit_project(const ReducedCase& cs, const ChartPoint& p) {
    const std::size_t n = static_cast<std::size_t>(cs.n());
    const std::size_t m = static_cast<std::size_t>(cs.m());
    if (dimension(p) != n) throw ShapeError("point dimension differs from the case");
    switch (cs.kind()) {
        case CaseKind::elliptic: {
            const QVector x = to_ball(p).x();
            return {std::sqrt(block_norm2(x, 0, m)), std::sqrt(block_norm2(x, m, n))};
        }
        case CaseKind::loxodromic: {
            const QVector x = to_ball(p).x();
            const double scale = 1.0 - block_norm2(x, n - m + 1, n);
            if (!(scale > 0.0)) throw DomainError("loxodromic projection needs sum |x_l|^2 < 1");
            return {x[n - m].norm() / std::sqrt(scale), std::sqrt(block_norm2(x, 0, n - m) / scale)};
        }
        case CaseKind::special_loxodromic: {
            const QVector x = to_ball(p).x();
            const Quaternion& xn = x[n - 1];
            const double s = std::sqrt((Quaternion(1.0) - xn).norm2() * (Quaternion(1.0) + xn).norm2() -
                                       4.0 * xn.q1 * xn.q1 - 4.0 * xn.q2 * xn.q2);
            const double den = 1.0 - xn.norm2() + s;
            return {2.0 * xn.q3 / den, std::sqrt(2.0 * block_norm2(x, 0, n - 1) / den)};
        }
        case CaseKind::parabolic: {
            const HoroPoint h = to_horo(p);
            return {h.alpha(), std::sqrt(block_norm2(h.omega(), 0, n - m))};
        }
        case CaseKind::special_parabolic: {
            const HoroPoint h = to_horo(p);
            return {h.alpha(), h.omega()[n - 2].real()};
        }
    }
    throw DomainError("unknown case");
}

Vec2 phase_coordinates(const ReducedCase& cs, const ChartPoint& p) {
    const Vec2 c = orbit_project(cs, p);
    return cs.polar() ? polar_from_cartesian(c) : c;
}

ChartPoint section_point(const ReducedCase& cs, const Vec2& c) {
    const std::size_t n = static_cast<std::size_t>(cs.n());
    const std::size_t m = static_cast<std::size_t>(cs.m());
    if (cs.polar()) {
        const Vec2 uv = cartesian_from_polar(c);
        QVector x(n);
        switch (cs.kind()) {
            case CaseKind::elliptic:
                x[m - 1] = uv[0];
                x[n - 1] = uv[1];
                break;
            case CaseKind::loxodromic:
                x[n - m] = uv[0];
                x[n - m - 1] = uv[1];
                break;
            default:
                x[n - 1] = Quaternion(0, 0, 0, uv[0]);
                x[n - 2] = Quaternion(0, 0, 0, uv[1]);
                break;
        }
        return BallPoint(std::move(x));
    }
    QVector omega(n - 1);
    if (cs.kind() == CaseKind::parabolic)
        omega[n - m - 1] = c[1];
    else
        omega[n - 2] = c[1];
    return HoroPoint(std::move(omega), c[0], Quaternion());
}

double orbital_metric(const ReducedCase& cs, const Vec2& c, const Vec2& u, const Vec2& v) {
    if (cs.polar()) {
        if (!(c[0] > 0.0)) throw DomainError("orbital metric needs r > 0");
        const double sh = std::sinh(c[0]);
        return 4.0 * (u[0] * v[0] + sh * sh * u[1] * v[1]);
    }
    if (!(c[0] > 0.0)) throw DomainError("orbital metric needs alpha > 0");
    if (cs.kind() == CaseKind::parabolic && !(c[1] > 0.0)) throw DomainError("orbital metric needs rho > 0");
    return (u[0] * v[0] + 4.0 * c[0] * u[1] * v[1]) / (c[0] * c[0]);
}

double orbital_metric_cartesian(const Vec2& uv, const Vec2& du, const Vec2& dv) {
    const double u = uv[0], v = uv[1];
    const double w = 1.0 - u * u - v * v;
    if (!(w > 0.0)) throw DomainError("(u,v) outside the unit disc");
    const double q = (1.0 - v * v) * du[0] * dv[0] + u * v * (du[0] * dv[1] + du[1] * dv[0]) +
                     (1.0 - u * u) * du[1] * dv[1];
    return 4.0 * q / (w * w);
}

double volume_functional(const ReducedCase& cs, const Vec2& c) {
    require_closure(cs, c);
    const int n = cs.n(), m = cs.m();
    switch (cs.kind()) {
        case CaseKind::elliptic:
        case CaseKind::loxodromic: {
            const Coefficients k = *cs.coefficients();
            const double r = c[0], t = c[1];
            return std::ldexp(std::pow(std::sinh(r), k.A + k.B) * std::pow(std::cosh(r), k.B) *
                                  std::pow(std::sin(t), k.C + k.D) * std::pow(std::cos(t), k.D),
                              k.B + k.D);
        }
        case CaseKind::special_loxodromic: {
            const double r = c[0], t = c[1];
            const double sh = std::sinh(r), ch = std::cosh(r), ct = std::cos(t);
            const double w = ch * ch + sh * sh * ct * ct;
            return w * w * w * std::pow(sh, 4 * n - 5) * std::pow(std::sin(t), 4 * n - 5);
        }
        case CaseKind::parabolic:
            return std::pow(c[0], -(4.0 * n + 1.0) / 2.0) * std::pow(c[1], 4 * n - 4 * m - 1);
        case CaseKind::special_parabolic:
            return std::pow(c[0], -(4.0 * n + 1.0) / 2.0);
    }
    throw DomainError("unknown case");
}

double volume_functional_cartesian(const ReducedCase& cs, const Vec2& uv) {
    require_polar(cs, "volume_functional_cartesian");
    const int n = cs.n(), m = cs.m();
    const double u = uv[0], v = uv[1];
    const double w = 1.0 - u * u - v * v;
    if (!(w > 0.0)) throw DomainError("(u,v) outside the unit disc");
    const double tail = std::pow(w, -(4.0 * n + 1.0) / 2.0);
    switch (cs.kind()) {
        case CaseKind::elliptic: return std::pow(u, 4 * m - 1) * std::pow(v, 4 * n - 4 * m - 1) * tail;
        case CaseKind::loxodromic: return u * u * u * std::pow(v, 4 * n - 4 * m - 1) * tail;
        default: {
            const double a = 1.0 + u * u;
            return a * a * a * std::pow(v, 4 * n - 5) * tail;
        }
    }
}

PQ pq_terms(const ReducedCase& cs, double r, double t) {
    require_polar(cs, "pq_terms");
    const double n = cs.n(), m = cs.m();
    switch (cs.kind()) {
        case CaseKind::elliptic:
            return {(2 * n - 4 * m) * cot(t) + (4 * m - 1) * cot(2 * t),
                    (2 * n - 2) * coth(r) + 3 * coth(2 * r)};
        case CaseKind::loxodromic:
            return {(2 * n - 2 * m - 2) * cot(t) + 3 * cot(2 * t),
                    (2 * n - 4 * m + 2) * coth(r) + (4 * m - 1) * coth(2 * r)};
        default: {
            const double sh = std::sinh(r), ch = std::cosh(r), ct = std::cos(t);
            const double w = ch * ch + sh * sh * ct * ct;
            return {0.5 * ((4 * n - 5) * cot(t) - 3 * sh * sh * std::sin(2 * t) / w),
                    0.5 * ((4 * n - 4) * coth(r) + 3 * std::sinh(2 * r) * (1 + ct * ct) / w)};
        }
    }
}

PQ pq_terms_equator(const ReducedCase& cs, double r, double d) {
    if (cs.kind() != CaseKind::special_loxodromic) throw DomainError("pq_terms_equator needs special-loxodromic");
    const double n = cs.n();
    // cot θ = −tan d, cos θ = −sin d, sin 2θ = −sin 2d.
    const double sh = std::sinh(r), ch = std::cosh(r), sd = std::sin(d);
    const double w = ch * ch + sh * sh * sd * sd;
    return {0.5 * (-(4 * n - 5) * std::tan(d) + 3 * sh * sh * std::sin(2 * d) / w),
            0.5 * ((4 * n - 4) * coth(r) + 3 * std::sinh(2 * r) * (1 + sd * sd) / w)};
}

Vec3 ode_rhs(const ReducedCase& cs, const PhaseState& s, double h) {
    if (cs.polar()) {
        if (s.c1 < 0.0 || s.c2 < 0.0 || s.c2 > cs.c2_max()) throw DomainError("state outside the orbit space");
        if (s.c1 == 0.0 || s.c2 == 0.0 || s.c2 == cs.c2_max())
            throw SingularBoundaryError("state on a singular stratum");
        const double sh = std::sinh(s.c1);
        const PQ pq = pq_terms(cs, s.c1, s.c2);
        const double cs_ = std::cos(s.sigma), sn = std::sin(s.sigma);
        return {0.5 * cs_, 0.5 * sn / sh, pq.P * cs_ / sh - pq.Q * sn + h};
    }
    if (!(s.c1 > 0.0)) throw DomainError("alpha <= 0");
    const double n = cs.n();
    const double cs_ = std::cos(s.sigma), sn = std::sin(s.sigma);
    const double ra = std::sqrt(s.c1);
    if (cs.kind() == CaseKind::special_parabolic)
        return {s.c1 * cs_, 0.5 * ra * sn, (2 * n + 1) * sn + h};
    if (s.c2 < 0.0) throw DomainError("rho < 0");
    if (s.c2 == 0.0) throw SingularBoundaryError("state on the stratum rho = 0");
    const double m = cs.m();
    return {s.c1 * cs_, 0.5 * ra * sn, (2 * n - 2 * m - 0.5) * (ra / s.c2) * cs_ + (2 * n + 1) * sn + h};
}

double boundary_sigma_rate(const ReducedCase& cs, double a, Stratum stratum) {
    if (cs.kind() == CaseKind::special_parabolic)
        throw NoSingularStratumError("special parabolic orbit space has no singular stratum");
    if (!(a > 0.0)) throw DomainError("boundary start needs a > 0");
    const double n = cs.n(), m = cs.m();
    if (cs.kind() == CaseKind::parabolic) {
        if (stratum != Stratum::lower) throw DomainError("parabolic case has only the stratum rho = 0");
        return (2 * n + 1) / (4 * n - 4 * m);
    }
    if (cs.kind() == CaseKind::special_loxodromic) {
        const double q0 = 0.5 * ((4 * n - 4) * coth(a) + 6 * std::tanh(2 * a));
        return (stratum == Stratum::lower ? -q0 : q0) / (4 * n - 4);
    }
    const Coefficients k = *cs.coefficients();
    const double q = pq_terms(cs, a, kPi / 4).Q;
    return stratum == Stratum::lower ? -q / (k.C + k.D + 1) : q / (k.D + 1);
}

std::vector<ExplicitSolution> explicit_solutions(const ReducedCase& cs, double a) {
    if (!(a > 0.0)) throw DomainError("explicit solutions need a > 0");
    std::vector<ExplicitSolution> out;
    const double n = cs.n();
    switch (cs.kind()) {
        case CaseKind::elliptic:
        case CaseKind::loxodromic: {
            const Coefficients k = *cs.coefficients();
            const double theta = std::atan(std::sqrt(double(k.C + k.D) / k.D));
            out.push_back({"cone", "ray theta = theta* with sigma = 0 (cone over a product of spheres)", theta, 0.0,
                           [=](double s) { return PhaseState{a + s / 2, theta, 0.0}; },
                           [](double) { return Vec3{0.5, 0.0, 0.0}; }});
            const double q = pq_terms(cs, a, kPi / 4).Q;
            const double w = 1.0 / (2.0 * std::sinh(a));
            const char* name = cs.kind() == CaseKind::elliptic ? "sphere" : "tube";
            out.push_back({name, "circle r = a traversed with sigma = pi/2; h = -(sign) Q(a)", a, q,
                           [=](double s) { return PhaseState{a, kPi / 4 + w * s, kPi / 2}; },
                           [=](double) { return Vec3{0.0, w, 0.0}; }});
            break;
        }
        case CaseKind::special_loxodromic:
            out.push_back({"bisector", "line theta = pi/2 with sigma = 0", kPi / 2, 0.0,
                           [=](double s) { return PhaseState{a + s / 2, kPi / 2, 0.0}; },
                           [](double) { return Vec3{0.5, 0.0, 0.0}; }});
            break;
        case CaseKind::parabolic:
        case CaseKind::special_parabolic: {
            const double v = 0.5 * std::sqrt(a);
            const double rho0 = cs.kind() == CaseKind::parabolic ? 1.0 : 0.0;
            out.push_back({"horosphere", "alpha = a traversed with sigma = pi/2; h = -(2n+1)", a, -(2 * n + 1),
                           [=](double s) { return PhaseState{a, rho0 + v * s, kPi / 2}; },
                           [=](double) { return Vec3{0.0, v, 0.0}; }});
            if (cs.kind() == CaseKind::special_parabolic)
                out.push_back({"fan", "line rho = a with sigma = 0", a, 0.0,
                               [=](double s) { return PhaseState{std::exp(s), a, 0.0}; },
                               [](double s) { return Vec3{std::exp(s), 0.0, 0.0}; }});
            break;
        }
    }
    return out;
}

}  // namespace hqn
