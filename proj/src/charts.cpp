#include "hqn/charts.hpp"

#include <algorithm>
#include <cmath>

#include "hqn/errors.hpp"

namespace hqn {

namespace {

constexpr double kInteriorMargin = 1e-12;

QVector definite_copy(const QVector& v) { return v.with_kind(FormKind::definite); }

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

}  // namespace

std::string to_string(Chart c) {
    switch (c) {
        case Chart::ball: return "ball";
        case Chart::siegel: return "siegel";
        case Chart::horo: return "horo";
    }
    return "?";
}

Chart parse_chart(const std::string& name) {
    if (name == "ball") return Chart::ball;
    if (name == "siegel") return Chart::siegel;
    if (name == "horo") return Chart::horo;
    throw DomainError("unknown chart '" + name + "'");
}

BallPoint::BallPoint(QVector x) : x_(definite_copy(x)) {
    if (x_.size() == 0) throw ShapeError("ball point needs n >= 1");
    const double margin = 1.0 - x_.euclidean_norm2();
    if (!(margin > kInteriorMargin)) throw NotInteriorError("ball point with |x|^2 >= 1");
}

SiegelPoint::SiegelPoint(QVector zeta) : zeta_(definite_copy(zeta)) {
    if (zeta_.size() == 0) throw ShapeError("siegel point needs n >= 1");
    const std::size_t n = zeta_.size();
    double head = 0.0;
    for (std::size_t l = 0; l + 1 < n; ++l) head += zeta_[l].norm2();
    if (!(2.0 * zeta_[n - 1].real() - head > kInteriorMargin))
        throw NotInteriorError("siegel point outside the domain");
}

HoroPoint::HoroPoint(QVector omega, double alpha, Quaternion beta)
    : omega_(definite_copy(omega)), alpha_(alpha), beta_(beta) {
    if (!(alpha_ > kInteriorMargin)) throw NotInteriorError("horospherical height alpha <= 0");
    if (beta_.q0 != 0.0) throw DomainError("beta must be purely imaginary");
}

BoundaryPoint BoundaryPoint::at_infinity(std::size_t n) {
    BoundaryPoint b;
    b.n = n;
    b.infinity = true;
    b.omega = QVector(n - 1);
    return b;
}

BoundaryPoint BoundaryPoint::finite(QVector omega, Quaternion beta) {
    if (beta.q0 != 0.0) throw DomainError("beta must be purely imaginary");
    BoundaryPoint b;
    b.n = omega.size() + 1;
    b.omega = definite_copy(omega);
    b.beta = beta;
    return b;
}

Chart chart_of(const ChartPoint& p) {
    return std::visit(overloaded{[](const BallPoint&) { return Chart::ball; },
                                 [](const SiegelPoint&) { return Chart::siegel; },
                                 [](const HoroPoint&) { return Chart::horo; }},
                      p);
}

std::size_t dimension(const ChartPoint& p) {
    return std::visit([](const auto& q) { return q.dim(); }, p);
}

SiegelPoint cayley(const BallPoint& bp) {
    const QVector& x = bp.x();
    const std::size_t n = x.size();
    const Quaternion inv = qinv(Quaternion(1.0) - x[n - 1]);
    QVector zeta(n);
    for (std::size_t l = 0; l + 1 < n; ++l) zeta[l] = x[l] * inv;
    zeta[n - 1] = 0.5 * ((Quaternion(1.0) + x[n - 1]) * inv);
    return SiegelPoint(std::move(zeta));
}

BallPoint cayley_inv(const SiegelPoint& sp) {
    const QVector& zeta = sp.zeta();
    const std::size_t n = zeta.size();
    QVector x(n);
    const Quaternion two_z = 2.0 * zeta[n - 1];
    x[n - 1] = qinv(two_z + 1.0) * (two_z - 1.0);
    const Quaternion tail = Quaternion(1.0) - x[n - 1];
    for (std::size_t l = 0; l + 1 < n; ++l) x[l] = zeta[l] * tail;
    return BallPoint(std::move(x));
}

HoroPoint horo_from_siegel(const SiegelPoint& sp) {
    const QVector& zeta = sp.zeta();
    const std::size_t n = zeta.size();
    QVector omega(n - 1);
    double w2 = 0.0;
    for (std::size_t l = 0; l + 1 < n; ++l) {
        omega[l] = zeta[l];
        w2 += zeta[l].norm2();
    }
    return HoroPoint(std::move(omega), 2.0 * zeta[n - 1].real() - w2, 2.0 * zeta[n - 1].imag());
}

SiegelPoint siegel_from_horo(const HoroPoint& p) {
    const std::size_t n = p.dim();
    QVector zeta(n);
    double w2 = 0.0;
    for (std::size_t l = 0; l + 1 < n; ++l) {
        zeta[l] = p.omega()[l];
        w2 += p.omega()[l].norm2();
    }
    zeta[n - 1] = 0.5 * (Quaternion(p.alpha() + w2) + p.beta());
    return SiegelPoint(std::move(zeta));
}

BallPoint to_ball(const ChartPoint& p) {
    return std::visit(overloaded{[](const BallPoint& b) { return b; },
                                 [](const SiegelPoint& s) { return cayley_inv(s); },
                                 [](const HoroPoint& h) { return cayley_inv(siegel_from_horo(h)); }},
                      p);
}

SiegelPoint to_siegel(const ChartPoint& p) {
    return std::visit(overloaded{[](const BallPoint& b) { return cayley(b); },
                                 [](const SiegelPoint& s) { return s; },
                                 [](const HoroPoint& h) { return siegel_from_horo(h); }},
                      p);
}

HoroPoint to_horo(const ChartPoint& p) {
    return std::visit(overloaded{[](const BallPoint& b) { return horo_from_siegel(cayley(b)); },
                                 [](const SiegelPoint& s) { return horo_from_siegel(s); },
                                 [](const HoroPoint& h) { return h; }},
                      p);
}

ChartPoint convert(const ChartPoint& p, Chart target) {
    switch (target) {
        case Chart::ball: return to_ball(p);
        case Chart::siegel: return to_siegel(p);
        case Chart::horo: return to_horo(p);
    }
    throw DomainError("unknown chart");
}

QVector lift(const ChartPoint& p) {
    const BallPoint b = to_ball(p);
    const std::size_t n = b.dim();
    QVector X(n + 1, FormKind::lorentz);
    for (std::size_t l = 0; l < n; ++l) X[l] = b.x()[l];
    X[n] = Quaternion(1.0);
    return X;
}

BallPoint ball_from_lift(const QVector& X) {
    if (X.size() < 2) throw ShapeError("lift needs length n+1 >= 2");
    if (signature_class(X.with_kind(FormKind::lorentz)) != Signature::negative)
        throw NotInteriorError("lift is not a negative vector");
    const std::size_t n = X.size() - 1;
    const Quaternion inv = qinv(X[n]);
    QVector x(n);
    for (std::size_t l = 0; l < n; ++l) x[l] = X[l] * inv;
    return BallPoint(std::move(x));
}

double dist(const ChartPoint& p, const ChartPoint& q) {
    const BallPoint a = to_ball(p);
    const BallPoint b = to_ball(q);
    if (a.dim() != b.dim()) throw ShapeError("points of different dimension");
    const QVector& x = a.x();
    const QVector& y = b.x();
    const double x2 = x.euclidean_norm2();
    const double y2 = y.euclidean_norm2();
    const double cross = herm_definite(x, y).norm2();
    // |1−(x,y)|² − (1−|x|²)(1−|y|²) = |x−y|² − (|x|²|y|² − |(x,y)|²)
    const double num = (x - y).euclidean_norm2() - (x2 * y2 - cross);
    const double den = (1.0 - x2) * (1.0 - y2);
    return 2.0 * std::asinh(std::sqrt(std::max(0.0, num) / den));
}

double busemann(const ChartPoint& p) { return -std::log(to_horo(p).alpha()); }

std::vector<double> coordinates(const ChartPoint& p) {
    return std::visit(overloaded{[](const BallPoint& b) { return b.x().to_reals(); },
                                 [](const SiegelPoint& s) { return s.zeta().to_reals(); },
                                 [](const HoroPoint& h) {
                                     std::vector<double> r = h.omega().to_reals();
                                     r.push_back(h.alpha());
                                     r.push_back(h.beta().q1);
                                     r.push_back(h.beta().q2);
                                     r.push_back(h.beta().q3);
                                     return r;
                                 }},
                      p);
}

ChartPoint from_coordinates(Chart chart, const std::vector<double>& reals) {
    if (reals.empty() || reals.size() % 4 != 0)
        throw ShapeError("chart coordinates must be 4n reals");
    switch (chart) {
        case Chart::ball: return BallPoint(QVector::from_reals(reals));
        case Chart::siegel: return SiegelPoint(QVector::from_reals(reals));
        case Chart::horo: {
            const std::size_t k = reals.size() - 4;
            std::vector<double> w(reals.begin(), reals.begin() + static_cast<std::ptrdiff_t>(k));
            return HoroPoint(QVector::from_reals(w), reals[k],
                             Quaternion(0.0, reals[k + 1], reals[k + 2], reals[k + 3]));
        }
    }
    throw DomainError("unknown chart");
}

std::vector<double> ball_metric_matrix(const BallPoint& bp) {
    const QVector& x = bp.x();
    const std::size_t n = x.size();
    const std::size_t d = 4 * n;
    const double r2 = x.euclidean_norm2();
    const double c = 1.0 - r2;
    // w_a = (e_a, x) for the real basis vector e_a.
    std::vector<Quaternion> w(d);
    for (std::size_t l = 0; l < n; ++l)
        for (int c4 = 0; c4 < 4; ++c4) {
            Quaternion u;
            u[c4] = 1.0;
            w[4 * l + c4] = u.conj() * x[l];
        }
    std::vector<double> g(d * d);
    const double scale = 4.0 / (c * c);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) {
            const Quaternion& p = w[a];
            const Quaternion& q = w[b];
            const double dot = p.q0 * q.q0 + p.q1 * q.q1 + p.q2 * q.q2 + p.q3 * q.q3;
            g[a * d + b] = scale * ((a == b ? c : 0.0) + dot);
        }
    return g;
}

namespace {

double ball_metric(const BallPoint& bp, const std::vector<double>& u, const std::vector<double>& v) {
    const QVector& x = bp.x();
    const QVector du = QVector::from_reals(u);
    const QVector dv = QVector::from_reals(v);
    const double c = 1.0 - x.euclidean_norm2();
    const double inner = herm_definite(du, dv).real();
    const Quaternion ux = herm_definite(du, x);
    const Quaternion vx = herm_definite(dv, x);
    return 4.0 * (c * inner + (ux * vx.conj()).real()) / (c * c);
}

double horo_metric(const HoroPoint& p, const std::vector<double>& u, const std::vector<double>& v) {
    const std::size_t k = u.size() - 4;
    auto split = [&](const std::vector<double>& t, QVector& dw, double& da, Quaternion& db) {
        dw = QVector::from_reals(std::vector<double>(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(k)));
        da = t[k];
        db = Quaternion(0.0, t[k + 1], t[k + 2], t[k + 3]);
    };
    QVector dwu, dwv;
    double dau = 0, dav = 0;
    Quaternion dbu, dbv;
    split(u, dwu, dau, dbu);
    split(v, dwv, dav, dbv);
    const double a = p.alpha();
    // Twist term dβ − 2 Im(ω, dω).
    const Quaternion tu = dbu - 2.0 * herm_definite(p.omega(), dwu).imag();
    const Quaternion tv = dbv - 2.0 * herm_definite(p.omega(), dwv).imag();
    const double twist = tu.q1 * tv.q1 + tu.q2 * tv.q2 + tu.q3 * tv.q3 + tu.q0 * tv.q0;
    return (dau * dav + twist + 4.0 * a * herm_definite(dwu, dwv).real()) / (a * a);
}

void require_tangent(const ChartPoint& p, const Tangent& t) {
    if (t.chart != chart_of(p)) throw ShapeError("tangent chart differs from point chart");
    if (t.d.size() != 4 * dimension(p)) throw ShapeError("tangent must have 4n components");
}

}  // namespace

double metric_eval(const ChartPoint& p, const Tangent& u, const Tangent& v) {
    require_tangent(p, u);
    require_tangent(p, v);
    switch (chart_of(p)) {
        case Chart::ball: return ball_metric(std::get<BallPoint>(p), u.d, v.d);
        case Chart::horo: return horo_metric(std::get<HoroPoint>(p), u.d, v.d);
        case Chart::siegel: {
            const Tangent bu = pushforward(p, u, Chart::ball);
            const Tangent bv = pushforward(p, v, Chart::ball);
            return ball_metric(to_ball(p), bu.d, bv.d);
        }
    }
    throw DomainError("unknown chart");
}

Tangent pushforward(const ChartPoint& p, const Tangent& u, Chart target) {
    require_tangent(p, u);
    const Chart source = chart_of(p);
    if (source == target) return u;
    const std::vector<double> y = coordinates(p);
    double pn = 0.0, un = 0.0;
    for (double c : y) pn += c * c;
    for (double c : u.d) un += c * c;
    pn = std::sqrt(pn);
    un = std::sqrt(un);
    Tangent out{target, std::vector<double>(u.d.size(), 0.0)};
    if (un == 0.0) return out;
    const double h = 1e-6 * (1.0 + pn);
    std::vector<double> yp(y), ym(y);
    for (std::size_t i = 0; i < y.size(); ++i) {
        yp[i] += h * u.d[i] / un;
        ym[i] -= h * u.d[i] / un;
    }
    const std::vector<double> fp = coordinates(convert(from_coordinates(source, yp), target));
    const std::vector<double> fm = coordinates(convert(from_coordinates(source, ym), target));
    for (std::size_t i = 0; i < fp.size(); ++i) out.d[i] = un * (fp[i] - fm[i]) / (2.0 * h);
    return out;
}

}  // namespace hqn
