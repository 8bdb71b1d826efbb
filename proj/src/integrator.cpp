#include "hqn/integrator.hpp"

#include <algorithm>
#include <atomic>
#include <cfloat>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <numbers>
#include <optional>
#include <thread>

#include "dop853.hpp"
#include "hqn/errors.hpp"
#include "hqn/oracles.hpp"
#include "hqn/quadrature.hpp"

namespace hqn {

namespace {

constexpr double kPi = std::numbers::pi;
using detail::Vec;
using Y = Vec<3>;

// Polar kinds integrate (r, θ, σ). Parabolic kinds integrate (ln α, ρ, y₂) where y₂ is σ near σ = 0
// and the distance to ±π once |σ| > π/2 (mode ±1), so both ends keep full relative precision.
// Special loxodromic curves near θ = π/2 carry d = θ − π/2 instead of θ (centered).
struct Z {
    Y y;
    int mode = 0;
    bool centered = false;
};

class System {
public:
    System(const ReducedCase& cs, const IntegrationOptions& opt)
        : cs_(cs), h_(opt.h), log_chart_(!cs.polar()), equator_(cs.kind() == CaseKind::special_loxodromic),
          log_alpha_stop_(std::log(opt.alpha_stop)) {
        const double n = cs.n();
        cm_ = cs.kind() == CaseKind::parabolic ? 2 * n - 2 * cs.m() - 0.5 : 0.0;
        two_n1_ = 2 * n + 1;
        for (std::size_t i = 0; i < 3; ++i) {
            w_.atol[i] = opt.tol;
            w_.rtol[i] = opt.tol;
        }
        wf_ = w_;
        wf_.atol[2] = DBL_MIN;
    }

    void trig(const Y& y, int mode, double& sn, double& cs) const {
        sn = std::sin(y[2]);
        cs = std::cos(y[2]);
        if (mode == 1) cs = -cs;
        if (mode == -1) {
            sn = -sn;
            cs = -cs;
        }
    }

    Y f(const Y& y, int mode, bool centered) const {
        double sn, c;
        trig(y, mode, sn, c);
        if (!log_chart_) {
            const double sh = std::sinh(y[0]);
            const PQ pq = centered ? pq_terms_equator(cs_, y[0], y[1]) : pq_terms(cs_, y[0], y[1]);
            return {0.5 * c, 0.5 * sn / sh, pq.P * c / sh - pq.Q * sn + h_};
        }
        const double ra = std::exp(0.5 * y[0]);
        const double drift = cm_ == 0.0 ? 0.0 : cm_ * ra / y[1] * c;
        const double g = drift + two_n1_ * sn + h_;
        return {c, 0.5 * ra * sn, mode == 1 ? -g : g};
    }

    Y f(const Z& z) const { return f(z.y, z.mode, z.centered); }

    auto rhs(const Z& z) const {
        return [this, mode = z.mode, centered = z.centered](double, const Y& v) { return f(v, mode, centered); };
    }

    double sigma(const Y& y, int mode) const {
        return mode == 0 ? y[2] : mode == 1 ? kPi - y[2] : y[2] - kPi;
    }

    PhaseState state(const Z& z) const {
        const double c1 = log_chart_ ? std::exp(z.y[0]) : z.y[0];
        return {c1, z.centered ? kPi / 2 + z.y[1] : z.y[1], sigma(z.y, z.mode)};
    }

    Y internal(const PhaseState& s, int mode, bool centered) const {
        const double y2 = mode == 0 ? s.sigma : mode == 1 ? kPi - s.sigma : s.sigma + kPi;
        return {log_chart_ ? std::log(s.c1) : s.c1, centered ? s.c2 - kPi / 2 : s.c2, y2};
    }

    int preferred_mode(double sigma) const {
        if (!log_chart_) return 0;
        return sigma > kPi / 2 ? 1 : sigma < -kPi / 2 ? -1 : 0;
    }

    bool preferred_centered(double theta) const { return equator_ && std::fabs(theta - kPi / 2) < kPi / 4; }

    Z from_state(const PhaseState& s) const {
        const int mode = preferred_mode(s.sigma);
        const bool centered = preferred_centered(s.c2);
        return {internal(s, mode, centered), mode, centered};
    }

    // Re-expresses z in the chart preferred by its current state.
    Z normalized(const Z& z) const {
        const int mode = z.mode != 0 ? z.mode : preferred_mode(z.y[2]);
        const double theta = z.centered ? kPi / 2 + z.y[1] : z.y[1];
        const bool centered = preferred_centered(theta);
        if (mode == z.mode && centered == z.centered) return z;
        return {internal(state(z), mode, centered), mode, centered};
    }

    // Smallest event function (all positive inside the domain) and its termination tag.
    std::pair<double, Termination> event(const Y& y, int mode, bool centered) const {
        std::pair<double, Termination> best{INFINITY, Termination::domain_exit};
        auto take = [&](double g, Termination t) {
            if (g < best.first) best = {g, t};
        };
        if (!log_chart_) {
            take(y[0], Termination::domain_exit);
            const double lo = centered ? kPi / 2 : 0.0;
            take(lo + y[1], Termination::domain_exit);
            take(cs_.c2_max() - lo - y[1], Termination::domain_exit);
        } else {
            take(y[0] - log_alpha_stop_, Termination::alpha_threshold);
            if (mode != 0) take(y[2], Termination::sigma_reached_pi);
            if (cs_.kind() == CaseKind::parabolic) take(y[1], Termination::domain_exit);
        }
        return best;
    }

    // φ-type coordinates are controlled relatively only.
    const detail::ErrorWeights<3>& weights(int mode) const { return mode == 0 ? w_ : wf_; }

private:
    const ReducedCase& cs_;
    double h_;
    bool log_chart_;
    bool equator_;
    double log_alpha_stop_;
    double cm_ = 0.0, two_n1_ = 0.0;
    detail::ErrorWeights<3> w_, wf_;
};

Sample make_sample(const ReducedCase& cs, const System& sys, double s, const Z& z, double h, double residual) {
    Sample out;
    out.s = s;
    out.state = sys.state(z);
    out.residual = residual;
    double sn, c;
    sys.trig(z.y, z.mode, sn, c);
    out.V = volume_functional(cs, {out.state.c1, out.state.c2});
    const FirstIntegrals fi = first_integrals(cs, out.state.c1, out.state.c2, sn, c);
    out.I1 = fi.I;
    if (fi.J) {
        out.I2 = *fi.J;
    } else if (cs.polar() && out.state.c1 > 0.0 && out.state.c2 > 0.0 && out.state.c2 < cs.c2_max()) {
        out.I2 = semi_integral_rate(cs, out.state, h);
    }
    return out;
}

double weighted_norm(const Y& v, const Y& y, const detail::ErrorWeights<3>& w) {
    double s = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        const double q = v[i] / (w.atol[i] + w.rtol[i] * std::fabs(y[i]));
        s += q * q;
    }
    return std::sqrt(s / 3.0);
}

double initial_step(const System& sys, const Z& z, const Y& k1, double hmax) {
    const auto& w = sys.weights(z.mode);
    const Y& y = z.y;
    const double d0 = weighted_norm(y, y, w), d1 = weighted_norm(k1, y, w);
    double h0 = (d0 < 1e-10 || d1 < 1e-10) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, hmax);
    Y y1;
    for (std::size_t i = 0; i < 3; ++i) y1[i] = y[i] + h0 * k1[i];
    const Y k2 = sys.f(y1, z.mode, z.centered);
    Y dk;
    for (std::size_t i = 0; i < 3; ++i) dk[i] = k2[i] - k1[i];
    const double d2 = weighted_norm(dk, y, w) / h0;
    const double dd = std::max(d1, d2);
    const double h1 = dd <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dd, 1.0 / 8.0);
    return std::min({100 * h0, h1, hmax});
}

struct Segment {
    std::vector<double> s;
    std::vector<Z> z;
    Termination termination = Termination::reached_smax;
};

detail::StepResult<3> rk_step(const System& sys, double s, const Z& z, const Y& k1, double h) {
    return detail::dop853_step<3>(sys.rhs(z), s, z.y, k1, h, sys.weights(z.mode));
}

Segment run_adaptive(const System& sys, double s_start, const Z& z_start, const IntegrationOptions& opt) {
    constexpr double safe = 0.9, facc1 = 3.0, facc2 = 1.0 / 6.0, expo = 1.0 / 8.0;
    Segment seg;
    double s = s_start;
    Z z = sys.normalized(z_start);
    Y k1 = sys.f(z);
    seg.s.push_back(s);
    seg.z.push_back(z);
    if (!(s < opt.s_max)) return seg;
    double H = initial_step(sys, z, k1, opt.s_max - s);
    bool last_rejected = false;
    std::size_t steps = 0;
    while (true) {
        if (++steps > opt.max_steps) throw StepSizeUnderflow("step budget exhausted at s = " + std::to_string(s));
        const bool final_step = s + H >= opt.s_max;
        if (final_step) H = opt.s_max - s;
        if (H < 1e-14 * std::max(1.0, std::fabs(s)))
            throw StepSizeUnderflow("step size " + std::to_string(H) + " at s = " + std::to_string(s));
        const auto r = rk_step(sys, s, z, k1, H);
        if (r.err <= 1.0) {
            const auto ev_end = sys.event(r.y, z.mode, z.centered);
            if (ev_end.first <= 0.0) {
                // Bisect on the step length; keep the last in-domain state.
                double lo = 0.0, hi = H;
                Y ylo = z.y;
                Termination tag = ev_end.second;
                while (hi - lo > 1e-12) {
                    const double mid = 0.5 * (lo + hi);
                    const auto rm = rk_step(sys, s, z, k1, mid);
                    const auto ev = sys.event(rm.y, z.mode, z.centered);
                    if (ev.first <= 0.0) {
                        hi = mid;
                        tag = ev.second;
                    } else {
                        lo = mid;
                        ylo = rm.y;
                    }
                }
                if (lo > 0.0) {
                    seg.s.push_back(s + lo);
                    seg.z.push_back({ylo, z.mode, z.centered});
                }
                seg.termination = tag;
                return seg;
            }
            s = final_step ? opt.s_max : s + H;
            z = sys.normalized({r.y, z.mode, z.centered});
            k1 = sys.f(z);
            seg.s.push_back(s);
            seg.z.push_back(z);
            if (final_step) return seg;
            double fac = std::pow(std::max(r.err, 1e-300), expo) / safe;
            fac = std::max(facc2, std::min(facc1, fac));
            double Hn = H / fac;
            if (last_rejected) Hn = std::min(Hn, H);
            H = Hn;
            last_rejected = false;
        } else {
            const double fac = std::isfinite(r.err) ? std::pow(r.err, expo) / safe : facc1;
            H = H / std::min(facc1, fac);
            last_rejected = true;
        }
    }
}

// Series start off the stratum, valid for s ∈ [0, s0].
std::function<Z(double)> boundary_series(const ReducedCase& cs, double a, const IntegrationOptions& opt) {
    if (cs.kind() == CaseKind::special_loxodromic && a == 0.0)
        return [](double s) { return Z{Y{0.5 * s, 0.0, 0.0}, 0, true}; };
    if (cs.kind() == CaseKind::special_loxodromic && a < 0.0) {
        const double b = -a;
        const double s1 = boundary_sigma_rate(cs, b, Stratum::upper);
        const double w = 1.0 / (2.0 * std::sinh(b));
        return [=](double s) { return Z{Y{b + s1 * s * s / 4, kPi - w * s, -kPi / 2 + s1 * s}, 0}; };
    }
    if (!(a > 0.0)) throw DomainError("start parameter a must be positive for " + cs.key());
    if (cs.polar()) {
        const double w = 1.0 / (2.0 * std::sinh(a));
        if (opt.stratum == Stratum::lower) {
            const double s1 = boundary_sigma_rate(cs, a, Stratum::lower);
            return [=](double s) { return Z{Y{a - s1 * s * s / 4, w * s, kPi / 2 + s1 * s}, 0}; };
        }
        const double s1 = boundary_sigma_rate(cs, a, Stratum::upper);
        const double top = cs.c2_max();
        return [=](double s) { return Z{Y{a + s1 * s * s / 4, top - w * s, -kPi / 2 + s1 * s}, 0}; };
    }
    const double s1 = boundary_sigma_rate(cs, a, opt.stratum);
    const double la = std::log(a), ra = std::sqrt(a);
    return [=](double s) { return Z{Y{la - s1 * s * s / 2, 0.5 * ra * s, kPi / 2 - s1 * s}, 1}; };
}

ProfileCurve assemble(const ReducedCase& cs, const System& sys, double a, const IntegrationOptions& opt,
                      const std::function<Z(double)>& prefix, double s_start, const Z& z_start) {
    if (!(opt.ds_out > 0.0)) throw DomainError("ds_out must be positive");
    if (!(opt.tol > 0.0)) throw DomainError("tol must be positive");
    Segment seg = run_adaptive(sys, s_start, z_start, opt);

    ProfileCurve out{cs, a, opt.h, opt.tol, {}, {}, seg.termination};
    if (prefix) out.samples.push_back(make_sample(cs, sys, 0.0, prefix(0.0), opt.h, 0.0));
    for (std::size_t i = 0; i < seg.s.size(); ++i)
        out.samples.push_back(make_sample(cs, sys, seg.s[i], seg.z[i], opt.h, 0.0));

    // Uniform resampling by single steps from the preceding accepted state.
    const double s_end = seg.s.back();
    std::vector<double> us;
    std::vector<Z> uz;
    std::size_t j = 0;
    for (std::size_t k = 0;; ++k) {
        const double sk = static_cast<double>(k) * opt.ds_out;
        if (sk > s_end + 1e-12 * std::max(1.0, s_end)) break;
        Z zk;
        if (sk < s_start) {
            if (!prefix) continue;
            zk = prefix(sk);
        } else {
            while (j + 1 < seg.s.size() && seg.s[j + 1] <= sk) ++j;
            const double ds = std::min(sk, s_end) - seg.s[j];
            zk = seg.z[j];
            if (ds > 0.0) zk.y = rk_step(sys, seg.s[j], zk, sys.f(zk), ds).y;
        }
        us.push_back(sk);
        uz.push_back(zk);
    }
    out.uniform.reserve(us.size());
    auto in_chart = [&](const Z& z, const Z& ref) {
        return z.mode == ref.mode && z.centered == ref.centered ? z.y
                                                                : sys.internal(sys.state(z), ref.mode, ref.centered);
    };
    for (std::size_t k = 0; k < us.size(); ++k) {
        double res = 0.0;
        if (k > 0 && k + 1 < us.size()) {
            const Y fk = sys.f(uz[k]);
            const Y yp = in_chart(uz[k + 1], uz[k]), ym = in_chart(uz[k - 1], uz[k]);
            for (std::size_t i = 0; i < 3; ++i) {
                const double d = (yp[i] - ym[i]) / (us[k + 1] - us[k - 1]);
                res = std::max(res, std::fabs(d - fk[i]));
            }
        }
        out.uniform.push_back(make_sample(cs, sys, us[k], uz[k], opt.h, res));
    }
    return out;
}

}  // namespace

std::string to_string(Termination t) {
    switch (t) {
        case Termination::reached_smax: return "reached-smax";
        case Termination::domain_exit: return "domain-exit";
        case Termination::sigma_reached_pi: return "sigma-reached-pi";
        case Termination::alpha_threshold: return "alpha-threshold";
    }
    return "?";
}

ProfileCurve integrate_profile(const ReducedCase& cs, double a, const IntegrationOptions& opt) {
    if (cs.kind() == CaseKind::special_parabolic) {
        if (!(a > 0.0)) throw DomainError("special parabolic start height must be positive");
        ProfileCurve c = integrate_from_state(cs, PhaseState{a, 0.0, kPi / 2}, opt);
        c.a = a;
        return c;
    }
    if (!std::isfinite(a)) throw DomainError("start parameter must be finite");
    if (a < 0.0 && cs.kind() != CaseKind::special_loxodromic)
        throw DomainError("negative start parameter is only admissible for special-loxodromic");
    if (!(opt.s0 > 0.0) || !(opt.s0 < opt.s_max)) throw DomainError("need 0 < s0 < smax");
    const System sys(cs, opt);
    const auto prefix = boundary_series(cs, a, opt);
    return assemble(cs, sys, a, opt, prefix, opt.s0, prefix(opt.s0));
}

ProfileCurve integrate_from_state(const ReducedCase& cs, const PhaseState& start, const IntegrationOptions& opt) {
    const System sys(cs, opt);
    PhaseState s = start;
    if (!cs.polar()) s.sigma = std::remainder(s.sigma, 2 * kPi);
    if (!cs.polar() && !(s.c1 > 0.0)) throw DomainError("start state needs alpha > 0");
    const Z z0 = sys.from_state(s);
    const Y& y0 = z0.y;
    if (sys.event(y0, z0.mode, z0.centered).first <= 0.0 || !std::isfinite(y0[0]) || !std::isfinite(y0[1]) ||
        !std::isfinite(y0[2]))
        throw DomainError("start state is not interior");
    return assemble(cs, sys, start.c1, opt, {}, 0.0, z0);
}

unsigned thread_count_from_env() {
    if (const char* env = std::getenv("HQN_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<ProfileCurve> generate_family(const ReducedCase& cs, const std::vector<double>& a_grid,
                                          const IntegrationOptions& opt, unsigned threads) {
    const std::size_t count = a_grid.size();
    std::vector<std::optional<ProfileCurve>> out(count);
    std::vector<std::exception_ptr> errors(count);
    auto work = [&](std::size_t i) {
        try {
            const double a = a_grid[i];
            if (cs.kind() == CaseKind::special_loxodromic && a < 0.0) {
                ProfileCurve c = mirror_curve(integrate_profile(cs, -a, opt));
                out[i].emplace(std::move(c));
            } else {
                out[i].emplace(integrate_profile(cs, a, opt));
            }
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };
    if (threads == 0) threads = thread_count_from_env();
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) work(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) work(i);
            });
        for (auto& th : pool) th.join();
    }
    std::vector<ProfileCurve> result;
    result.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (errors[i]) std::rethrow_exception(errors[i]);
        result.push_back(std::move(*out[i]));
    }
    return result;
}

ProfileCurve mirror_curve(const ProfileCurve& c) {
    ProfileCurve m = c;
    auto flip = [&](Sample& s) {
        if (c.cs.kind() == CaseKind::special_loxodromic) {
            s.state.c2 = kPi - s.state.c2;
            s.state.sigma = -s.state.sigma;
        } else {
            s.state.c2 = -s.state.c2;
            s.state.sigma = kPi - s.state.sigma;
            s.s = -s.s;
        }
    };
    if (c.cs.kind() == CaseKind::special_loxodromic) {
        m.a = -c.a;
    } else if (c.cs.kind() != CaseKind::special_parabolic) {
        throw DomainError("mirror is defined for the special kinds only");
    }
    for (auto& s : m.samples) flip(s);
    for (auto& s : m.uniform) flip(s);
    if (c.cs.kind() == CaseKind::special_parabolic) {
        std::reverse(m.samples.begin(), m.samples.end());
        std::reverse(m.uniform.begin(), m.uniform.end());
    }
    return m;
}

ProfileCurve reflection_continuation(const ProfileCurve& c) {
    if (c.cs.kind() != CaseKind::special_parabolic) throw DomainError("reflection continuation needs special-parabolic");
    if (c.samples.empty() || c.samples.front().s != 0.0 || c.samples.front().state.c2 != 0.0)
        throw DomainError("reflection continuation needs a curve starting on rho = 0");
    ProfileCurve m = mirror_curve(c);
    ProfileCurve full = m;
    full.samples.pop_back();
    full.uniform.pop_back();
    full.samples.insert(full.samples.end(), c.samples.begin(), c.samples.end());
    full.uniform.insert(full.uniform.end(), c.uniform.begin(), c.uniform.end());
    return full;
}

double rho_special_parabolic(int n, double alpha) {
    if (n < 1) throw DomainError("n must be at least 1");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0, 1]");
    if (alpha == 1.0) return 0.0;
    const double N = 4.0 * n + 2.0, e = (4.0 * n + 1.0) / 2.0;
    // t = 1 − w² removes the endpoint singularity at t = 1.
    auto g = [&](double w) {
        const double w2 = w * w;
        const double t = 1.0 - w2;
        const double den = -std::expm1(N * std::log1p(-w2));
        return w * std::pow(t, e) / std::sqrt(den);
    };
    return integrate_gk15(g, 0.0, std::sqrt(1.0 - alpha), 1e-15, 1e-15).value;
}

double elliptic_integral_R(int n) { return rho_special_parabolic(n, 0.0); }

double elliptic_integral_R_beta(int n) {
    if (n < 1) throw DomainError("n must be at least 1");
    const double N = 4.0 * n + 2.0;
    return std::beta((4.0 * n + 3.0) / (8.0 * n + 4.0), 0.5) / (2.0 * N);
}

EndpointLimit limit_endpoint(const ProfileCurve& c) {
    if (c.samples.empty()) throw ExtrapolationError("empty curve");
    const Sample& last = c.samples.back();
    if (c.cs.polar()) return {last.state.c1, last.state.c2, false};
    const bool ended = c.termination == Termination::alpha_threshold ||
                       c.termination == Termination::sigma_reached_pi ||
                       (c.termination == Termination::reached_smax && last.state.c1 < 1e-8);
    if (!ended) throw ExtrapolationError("curve did not reach the ideal boundary (" + to_string(c.termination) + ")");
    const auto& u = c.uniform;
    if (u.size() < 3) return {0.0, last.state.c2, true};
    // Aitken's Δ² on the tail of ρ, the adaptive end point appended.
    const double r1 = u[u.size() - 2].state.c2, r2 = u[u.size() - 1].state.c2;
    const double r0 = u[u.size() - 3].state.c2;
    const double d1 = r1 - r0, d2 = r2 - r1;
    double limit = std::max(r2, last.state.c2);
    if (d2 != 0.0) {
        const double q = d2 / d1;
        if (!(d1 != 0.0) || !(q > 0.0 && q < 1.0)) throw ExtrapolationError("tail of rho is not contracting");
        limit = r2 + d2 * q / (1.0 - q);
    }
    return {0.0, limit, true};
}

}  // namespace hqn
