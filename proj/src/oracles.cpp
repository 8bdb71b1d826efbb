#include "hqn/oracles.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>
#include <thread>

#include "hqn/errors.hpp"

namespace hqn {

namespace {

constexpr double kPi = std::numbers::pi;
const Quaternion kUnits[4] = {Quaternion(1.0), Quaternion::unit_i(), Quaternion::unit_j(), Quaternion::unit_k()};

using Mat = Eigen::MatrixXd;

// sp(k) on the index block [from, to).
void add_compact(std::vector<QMatrix>& out, std::size_t dim, std::size_t from, std::size_t to) {
    for (std::size_t a = from; a < to; ++a)
        for (int c = 1; c < 4; ++c) {
            QMatrix x(dim, dim);
            x(a, a) = kUnits[c];
            out.push_back(std::move(x));
        }
    for (std::size_t a = from; a < to; ++a)
        for (std::size_t b = a + 1; b < to; ++b)
            for (const Quaternion& q : kUnits) {
                QMatrix x(dim, dim);
                x(a, b) = q;
                x(b, a) = -q.conj();
                out.push_back(std::move(x));
            }
}

// Heisenberg ν-direction: (ν/2)[[−1, 1], [−1, 1]] on the last two indices.
QMatrix nu_generator(std::size_t n, const Quaternion& nu) {
    QMatrix x(n + 1, n + 1);
    const Quaternion h = 0.5 * nu;
    x(n - 1, n - 1) = -h;
    x(n - 1, n) = h;
    x(n, n - 1) = -h;
    x(n, n) = h;
    return x;
}

// Linear part of the Heisenberg matrix in ξ_l.
QMatrix xi_generator(std::size_t n, std::size_t l, const Quaternion& q) {
    QMatrix x(n + 1, n + 1);
    x(l, n - 1) = -q;
    x(l, n) = q;
    x(n - 1, l) = q.conj();
    x(n, l) = q.conj();
    return x;
}

Mat gram_in_ball(const BallPoint& p) {
    const std::size_t d = 4 * p.dim();
    const std::vector<double> g = ball_metric_matrix(p);
    Mat G(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) G(i, j) = g[i * d + j];
    return G;
}

Mat killing_matrix(const GeneratorBasis& basis, const BallPoint& p) {
    const auto kv = killing_vectors(basis, p);
    const std::size_t d = 4 * p.dim();
    Mat K(d, kv.size());
    for (std::size_t j = 0; j < kv.size(); ++j)
        for (std::size_t i = 0; i < d; ++i) K(i, j) = kv[j][i];
    return K;
}

std::vector<double> ball_reals(const BallPoint& p) { return p.x().to_reals(); }

BallPoint ball_from_reals(const std::vector<double>& r) { return BallPoint(QVector::from_reals(r)); }

}  // namespace

FirstIntegrals first_integrals(const ReducedCase& cs, const PhaseState& s) {
    return first_integrals(cs, s.c1, s.c2, std::sin(s.sigma), std::cos(s.sigma));
}

FirstIntegrals first_integrals(const ReducedCase& cs, double c1, double c2, double sn, double cs_) {
    const double n = cs.n(), m = cs.m();
    switch (cs.kind()) {
        case CaseKind::elliptic:
        case CaseKind::loxodromic:
        case CaseKind::special_loxodromic:
            return {volume_functional(cs, {c1, c2}) * cs_, std::nullopt};
        case CaseKind::special_parabolic:
            return {std::pow(c1, -2 * n - 1) * sn, std::nullopt};
        case CaseKind::parabolic: {
            const double k = 4 * n - 4 * m;
            const double ra = std::sqrt(c1);
            const double eI = ((4 * n + 2) * (k - 2) + 1) / (4 * n + 1);
            const double I = std::pow(c1, -2 * n - 1) * std::pow(c2, eI) *
                             (ra * cs_ + (4 * n + 1) / (k - 1) * c2 * sn);
            const double eJ = (-(k - 1) * (4 * n + 3) - 1) / (2 * k);
            const double J = std::pow(c1, eJ) * std::pow(c2, k - 1) * (ra * cs_ + (4 * n + 2) / k * c2 * sn);
            return {I, J};
        }
    }
    return {};
}

double semi_integral_rate(const ReducedCase& cs, const PhaseState& s, double h) {
    if (!cs.polar()) throw DomainError("semi_integral_rate needs a polar kind");
    const double V = volume_functional(cs, {s.c1, s.c2});
    const double Q = pq_terms(cs, s.c1, s.c2).Q;
    const double c = std::cos(s.sigma);
    return V * (Q - 0.5 / std::tanh(s.c1) * c * c - h * std::sin(s.sigma));
}

GeneratorBasis::GeneratorBasis(const ReducedCase& cs) : cs_(cs) {
    const std::size_t n = static_cast<std::size_t>(cs.n());
    const std::size_t m = static_cast<std::size_t>(cs.m());
    const std::size_t dim = n + 1;
    switch (cs.kind()) {
        case CaseKind::elliptic:
            add_compact(gens_, dim, 0, m);
            add_compact(gens_, dim, m, n);
            break;
        case CaseKind::loxodromic:
            add_compact(gens_, dim, 0, n - m);
            add_compact(gens_, dim, n - m + 1, n);
            add_compact(gens_, dim, n, n + 1);
            for (std::size_t a = n - m + 1; a < n; ++a)
                for (const Quaternion& q : kUnits) {
                    QMatrix x(dim, dim);
                    x(a, n) = q;
                    x(n, a) = q.conj();
                    gens_.push_back(std::move(x));
                }
            break;
        case CaseKind::special_loxodromic: {
            gens_.push_back(nu_generator(n, Quaternion::unit_i()));
            gens_.push_back(nu_generator(n, Quaternion::unit_j()));
            QMatrix t(dim, dim);
            t(n - 1, n) = 1.0;
            t(n, n - 1) = 1.0;
            gens_.push_back(std::move(t));
            add_compact(gens_, dim, 0, n - 1);
            break;
        }
        case CaseKind::parabolic:
            for (int c = 1; c < 4; ++c) gens_.push_back(nu_generator(n, kUnits[c]));
            for (std::size_t l = n - m; l + 1 < n; ++l)
                for (const Quaternion& q : kUnits) gens_.push_back(xi_generator(n, l, q));
            add_compact(gens_, dim, 0, n - m);
            break;
        case CaseKind::special_parabolic:
            for (int c = 1; c < 4; ++c) gens_.push_back(nu_generator(n, kUnits[c]));
            for (std::size_t l = 0; l + 2 < n; ++l)
                for (const Quaternion& q : kUnits) gens_.push_back(xi_generator(n, l, q));
            for (int c = 1; c < 4; ++c) gens_.push_back(xi_generator(n, n - 2, kUnits[c]));
            break;
    }
}

Isometry GeneratorBasis::one_parameter(std::size_t i, double t) const {
    if (i >= gens_.size()) throw ShapeError("generator index out of range");
    return Isometry(expm(t * gens_[i]));
}

Isometry GeneratorBasis::random_element(std::mt19937_64& rng, double scale) const {
    std::normal_distribution<double> nd(0.0, scale);
    const std::size_t dim = static_cast<std::size_t>(cs_.n()) + 1;
    QMatrix x(dim, dim);
    for (const auto& g : gens_) x = x + nd(rng) * g;
    return Isometry(expm(x));
}

std::vector<std::vector<double>> killing_vectors(const GeneratorBasis& basis, const BallPoint& p, double step) {
    const std::vector<double> x0 = ball_reals(p);
    double norm = 0.0;
    for (double v : x0) norm += v * v;
    const double h = step > 0.0 ? step : 1e-5 * (1.0 + std::sqrt(norm));
    std::vector<std::vector<double>> out;
    out.reserve(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const auto plus = coordinates(act(basis.one_parameter(i, h), p));
        const auto minus = coordinates(act(basis.one_parameter(i, -h), p));
        std::vector<double> v(x0.size());
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = (plus[k] - minus[k]) / (2 * h);
        out.push_back(std::move(v));
    }
    return out;
}

Vec2 KillingOracle::default_reference(const ReducedCase& cs) {
    if (cs.polar()) return {0.7, 0.6};
    if (cs.kind() == CaseKind::parabolic) return {1.0, 0.5};
    return {1.0, 0.3};
}

KillingOracle::KillingOracle(const ReducedCase& cs, std::optional<Vec2> reference) : basis_(cs) {
    const Vec2 ref = reference.value_or(default_reference(cs));
    const BallPoint p = to_ball(section_point(cs, ref));
    const Mat K = killing_matrix(basis_, p);
    Eigen::JacobiSVD<Mat> svd(K, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double top = sv.size() > 0 ? sv(0) : 0.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-8 * top) ++rank_;
    if (rank_ == 0) throw DegenerateOrbitError("generators vanish at the reference point");
    condition_ = top / sv(static_cast<Eigen::Index>(rank_) - 1);
    const Mat C = svd.matrixV().leftCols(static_cast<Eigen::Index>(rank_));
    complement_.assign(basis_.size(), std::vector<double>(rank_));
    for (std::size_t i = 0; i < basis_.size(); ++i)
        for (std::size_t j = 0; j < rank_; ++j)
            complement_[i][j] = C(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
}

double KillingOracle::volume(const ChartPoint& p) const {
    const BallPoint b = to_ball(p);
    const Mat K = killing_matrix(basis_, b);
    Mat C(static_cast<Eigen::Index>(basis_.size()), static_cast<Eigen::Index>(rank_));
    for (std::size_t i = 0; i < basis_.size(); ++i)
        for (std::size_t j = 0; j < rank_; ++j)
            C(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = complement_[i][j];
    const Mat KC = K * C;
    const Eigen::JacobiSVD<Mat> svd(KC);
    const auto& sv = svd.singularValues();
    if (sv.size() < static_cast<Eigen::Index>(rank_) || !(sv(sv.size() - 1) > 1e-12 * sv(0)))
        throw DegenerateOrbitError("Killing vectors are rank deficient at the point");
    const Mat gram = KC.transpose() * gram_in_ball(b) * KC;
    const double det = gram.determinant();
    if (!(det > 0.0)) throw DegenerateOrbitError("Gram determinant is not positive");
    return std::sqrt(det);
}

double killing_volume(const ReducedCase& cs, const ChartPoint& p) { return KillingOracle(cs).volume(p); }

RatioSpread killing_ratio_spread(const ReducedCase& cs, const std::vector<Vec2>& points,
                                 const std::function<double(const Vec2&)>& V, unsigned threads) {
    RatioSpread out;
    if (points.empty()) return out;
    const KillingOracle oracle(cs);
    out.ratios.assign(points.size(), 0.0);
    std::vector<std::exception_ptr> errors(points.size());
    auto work = [&](std::size_t i) {
        try {
            const double ref = V ? V(points[i]) : volume_functional(cs, points[i]);
            out.ratios[i] = oracle.volume(section_point(cs, points[i])) / ref;
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(points.size())));
    if (threads == 1) {
        for (std::size_t i = 0; i < points.size(); ++i) work(i);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                for (std::size_t i = t; i < points.size(); i += threads) work(i);
            });
        for (auto& th : pool) th.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    const auto [lo, hi] = std::minmax_element(out.ratios.begin(), out.ratios.end());
    double sum = 0.0;
    for (double r : out.ratios) sum += r;
    out.mean = sum / static_cast<double>(out.ratios.size());
    out.spread = (*hi - *lo) / std::fabs(out.mean);
    return out;
}

std::vector<Vec2> principal_samples(const ReducedCase& cs, std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<Vec2> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double a = u01(rng), b = u01(rng);
        if (cs.polar())
            out.push_back({0.2 + 1.3 * a, cs.c2_max() * (0.15 + 0.7 * b)});
        else if (cs.kind() == CaseKind::parabolic)
            out.push_back({0.3 + 2.7 * a, 0.2 + 1.3 * b});
        else
            out.push_back({0.3 + 2.7 * a, -1.0 + 2.0 * b});
    }
    return out;
}

namespace {

double mean_curvature_at_step(const BallResidual& F, const std::vector<double>& x0, double h) {
    const std::size_t d = x0.size();
    auto eval = [&](const std::vector<double>& x) { return F(ball_from_reals(x)); };
    std::vector<double> x = x0;
    const double f0 = eval(x);
    Mat hess(d, d);
    Eigen::VectorXd grad(d);
    for (std::size_t i = 0; i < d; ++i) {
        x[i] = x0[i] + h;
        const double fp = eval(x);
        x[i] = x0[i] - h;
        const double fm = eval(x);
        x[i] = x0[i];
        grad(i) = (fp - fm) / (2 * h);
        hess(i, i) = (fp - 2 * f0 + fm) / (h * h);
    }
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) {
            double acc = 0.0;
            for (int si : {1, -1})
                for (int sj : {1, -1}) {
                    x[i] = x0[i] + si * h;
                    x[j] = x0[j] + sj * h;
                    acc += si * sj * eval(x);
                }
            x[i] = x0[i];
            x[j] = x0[j];
            hess(i, j) = hess(j, i) = acc / (4 * h * h);
        }

    auto metric = [&](const std::vector<double>& y) {
        const std::vector<double> g = ball_metric_matrix(ball_from_reals(y));
        Mat G(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) G(i, j) = g[i * d + j];
        return G;
    };
    const Mat G = metric(x0);
    const Mat Ginv = G.inverse();
    std::vector<Mat> dG(d);  // dG[l](i, j) = ∂_l g_ij
    for (std::size_t l = 0; l < d; ++l) {
        x[l] = x0[l] + h;
        const Mat gp = metric(x);
        x[l] = x0[l] - h;
        const Mat gm = metric(x);
        x[l] = x0[l];
        dG[l] = (gp - gm) / (2 * h);
    }
    // Γ^k_ij ∂_k F = ½ (g^{-1}∂F)^l (∂_i g_jl + ∂_j g_il − ∂_l g_ij).
    const Eigen::VectorXd up = Ginv * grad;
    Mat gamma_f = Mat::Zero(d, d);
    for (std::size_t l = 0; l < d; ++l) {
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                gamma_f(i, j) += 0.5 * up(l) * (dG[i](j, l) + dG[j](i, l) - dG[l](i, j));
    }
    const double gnorm = std::sqrt(grad.dot(up));
    if (!(gnorm >= 1e-12)) throw SingularPointError("level set gradient vanishes");
    const Eigen::VectorXd nvec = up / gnorm;
    const Mat P = Ginv - nvec * nvec.transpose();
    const Mat hessF = hess - gamma_f;
    return -(P.cwiseProduct(hessF)).sum() / gnorm;
}

}  // namespace

double ambient_mean_curvature(const BallResidual& F, const ChartPoint& p, double step) {
    const BallPoint b = to_ball(p);
    if (!(std::fabs(F(b)) < 1e-10)) throw DomainError("point is not on the level set");
    if (!(step > 0.0)) throw DomainError("step must be positive");
    const std::vector<double> x0 = ball_reals(b);
    const double H1 = mean_curvature_at_step(F, x0, step);
    const double H2 = mean_curvature_at_step(F, x0, step / 2);
    return (4 * H2 - H1) / 3;
}

double reconstructed_sigma_rate(const ReducedCase& cs, const PhaseState& s, double h, double step) {
    const Vec2 c{s.c1, s.c2};
    const Vec2 e1{1.0, 0.0}, e2{0.0, 1.0};
    auto E = [&](const Vec2& q) { return orbital_metric(cs, q, e1, e1); };
    auto G = [&](const Vec2& q) { return orbital_metric(cs, q, e2, e2); };
    auto lnV = [&](const Vec2& q) { return std::log(volume_functional(cs, q)); };
    auto d = [&](auto&& f, int k) {
        const double hk = step * (1.0 + std::fabs(c[k]));
        Vec2 p = c, m = c;
        p[k] += hk;
        m[k] -= hk;
        return (f(p) - f(m)) / (2 * hk);
    };
    auto dlog = [&](auto&& f, int k) { return d([&](const Vec2& q) { return std::log(f(q)); }, k); };
    const double sE = std::sqrt(E(c)), sG = std::sqrt(G(c));
    const double sn = std::sin(s.sigma), cn = std::cos(s.sigma);
    const double nu_lnV = -sn / sE * d(lnV, 0) + cn / sG * d(lnV, 1);
    return h + nu_lnV + cn / (2 * sG) * dlog(E, 1) - sn / (2 * sE) * dlog(G, 0);
}

double ode_residual(const ProfileCurve& curve) {
    const auto& u = curve.uniform;
    if (u.size() < 5) throw DomainError("ode_residual needs at least 5 uniform samples");
    const bool log_alpha = !curve.cs.polar();
    auto coord = [&](const Sample& s, int i) {
        if (i == 0) return log_alpha ? std::log(s.state.c1) : s.state.c1;
        return i == 1 ? s.state.c2 : s.state.sigma;
    };
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < u.size(); ++k) {
        Vec3 f = ode_rhs(curve.cs, u[k].state, curve.h);
        if (log_alpha) f[0] /= u[k].state.c1;
        const double ds = u[k + 1].s - u[k - 1].s;
        for (int i = 0; i < 3; ++i) {
            const double dd = (coord(u[k + 1], i) - coord(u[k - 1], i)) / ds;
            worst = std::max(worst, std::fabs(dd - f[static_cast<std::size_t>(i)]));
        }
    }
    return worst;
}

FoliationReport foliation_report(const std::vector<ProfileCurve>& curves, const std::vector<double>& q_grid,
                                 double tol) {
    FoliationReport rep;
    rep.tolerance = 10 * tol;
    for (const auto& c : curves)
        if (c.cs.kind() != CaseKind::parabolic) throw DomainError("foliation certificate needs parabolic curves");
    if (q_grid.empty()) return rep;
    for (double q : q_grid) {
        for (const auto& c : curves) {
            int count = 0;
            bool transversal = true;
            const auto& u = c.uniform;
            for (std::size_t k = 0; k + 1 < u.size(); ++k) {
                const double g0 = u[k].state.c1 - q * q * u[k].state.c2 * u[k].state.c2;
                const double g1 = u[k + 1].state.c1 - q * q * u[k + 1].state.c2 * u[k + 1].state.c2;
                if ((g0 > 0.0) != (g1 > 0.0)) {
                    ++count;
                    if (g1 == g0) transversal = false;
                } else if (g1 == 0.0 && g0 == 0.0) {
                    transversal = false;
                }
            }
            rep.crossings.push_back({c.a, q, count, transversal});
            if (count != 1 || !transversal) rep.pass = false;
        }
    }
    for (std::size_t i = 0; i < curves.size(); ++i)
        for (std::size_t j = 0; j < curves.size(); ++j) {
            const ProfileCurve& lo = curves[i];
            const ProfileCurve& hi = curves[j];
            if (!(lo.a < hi.a)) continue;
            const double lam = std::sqrt(hi.a / lo.a);
            const std::size_t common = std::min(lo.uniform.size(), hi.uniform.size());
            double dev = 0.0;
            for (std::size_t k = 0; k < common; ++k) {
                const auto& a = lo.uniform[k].state;
                const auto& b = hi.uniform[k].state;
                dev = std::max({dev, std::fabs(lam * lam * a.c1 - b.c1), std::fabs(lam * a.c2 - b.c2),
                                std::fabs(a.sigma - b.sigma)});
            }
            rep.dilations.push_back({lo.a, hi.a, dev});
            if (!(dev < rep.tolerance)) rep.pass = false;
        }
    return rep;
}

FoliationReport foliation_certificate(const std::vector<ProfileCurve>& curves, const std::vector<double>& q_grid,
                                      double tol) {
    FoliationReport rep = foliation_report(curves, q_grid, tol);
    if (!rep.pass) {
        std::ostringstream os;
        os << "foliation check failed:";
        for (const auto& c : rep.crossings)
            if (c.crossings != 1 || !c.transversal) os << " [a=" << c.a << " q=" << c.q << " crossings=" << c.crossings << "]";
        for (const auto& d : rep.dilations)
            if (!(d.deviation < rep.tolerance))
                os << " [dilation " << d.a_small << "->" << d.a_large << " deviation=" << d.deviation << "]";
        throw CertificateFailure(os.str());
    }
    return rep;
}

}  // namespace hqn
