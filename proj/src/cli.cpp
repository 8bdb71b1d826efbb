#include "hqn/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "hqn/charts.hpp"
#include "hqn/errors.hpp"
#include "hqn/isometries.hpp"
#include "hqn/loci.hpp"
#include "hqn/oracles.hpp"
#include "hqn/reduction.hpp"
#include "hqn/verify.hpp"

namespace hqn::cli {

using nlohmann::ordered_json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_curve_csv(std::ostream& os, const std::vector<Sample>& samples) {
    os << "s,c1,c2,sigma,V,I1,I2,residual\n";
    for (const auto& s : samples) {
        os << format_double(s.s) << ',' << format_double(s.state.c1) << ',' << format_double(s.state.c2) << ','
           << format_double(s.state.sigma) << ',' << format_double(s.V) << ',' << format_double(s.I1) << ','
           << format_double(s.I2) << ',' << format_double(s.residual) << '\n';
    }
}

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CaseArgs {
    std::string kind;
    int n = 2;
    int m = -1;
};

struct FlowArgs {
    double smax = 20.0;
    double tol = 1e-10;
    double h = 0.0;
    double ds = 1e-2;
    std::string stratum = "lower";
};

int default_m(CaseKind k) {
    switch (k) {
        case CaseKind::elliptic: return 1;
        case CaseKind::loxodromic: return 2;
        case CaseKind::parabolic: return 1;
        default: return 0;
    }
}

ReducedCase make_case(const CaseArgs& a) {
    const CaseKind k = parse_case_kind(a.kind);
    return ReducedCase(k, a.n, a.m < 0 ? default_m(k) : a.m);
}

IntegrationOptions make_options(const FlowArgs& f) {
    if (!(f.smax > 0.0)) throw UsageError("--smax must be positive");
    if (!(f.tol > 0.0 && f.tol < 1e-2)) throw UsageError("--tol must lie in (0, 1e-2)");
    if (!(f.ds > 0.0)) throw UsageError("--ds must be positive");
    if (!std::isfinite(f.h)) throw UsageError("--h must be finite");
    IntegrationOptions o;
    o.s_max = f.smax;
    o.tol = f.tol;
    o.h = f.h;
    o.ds_out = f.ds;
    if (f.stratum == "lower") o.stratum = Stratum::lower;
    else if (f.stratum == "upper") o.stratum = Stratum::upper;
    else throw UsageError("--stratum must be lower or upper");
    return o;
}

void add_case_flags(CLI::App* app, CaseArgs& c, bool required_case = true) {
    auto* opt = app->add_option("--case", c.kind, "elliptic, loxodromic, special-loxodromic, parabolic, special-parabolic");
    if (required_case) opt->required();
    app->add_option("--n", c.n, "quaternionic dimension")->default_val(2);
    app->add_option("--m", c.m, "block parameter (per-case default when omitted)");
}

void add_flow_flags(CLI::App* app, FlowArgs& f) {
    app->add_option("--smax", f.smax, "arclength bound")->default_val(20.0);
    app->add_option("--tol", f.tol, "local error tolerance")->default_val(1e-10);
    app->add_option("--h", f.h, "prescribed mean curvature")->default_val(0.0);
    app->add_option("--ds", f.ds, "uniform output step")->default_val(1e-2);
    app->add_option("--stratum", f.stratum, "lower or upper start stratum")->default_val("lower");
}

ordered_json case_json(const ReducedCase& cs) {
    return ordered_json{{"case", cs.key()}, {"n", cs.n()}, {"m", cs.m()}};
}

ordered_json check_json(const Check& c, const std::string& suite = {}) {
    ordered_json j;
    if (!suite.empty()) j["suite"] = suite;
    j["name"] = c.name;
    j["value"] = c.value;
    j["bound"] = c.bound;
    j["relation"] = c.relation;
    j["pass"] = c.pass;
    return j;
}

ordered_json curve_json(const ProfileCurve& c, const std::vector<Sample>& samples) {
    ordered_json j = case_json(c.cs);
    j["a"] = c.a;
    j["h"] = c.h;
    j["tol"] = c.tol;
    j["termination"] = to_string(c.termination);
    j["columns"] = {"s", "c1", "c2", "sigma", "V", "I1", "I2", "residual"};
    ordered_json rows = ordered_json::array();
    for (const auto& s : samples)
        rows.push_back({s.s, s.state.c1, s.state.c2, s.state.sigma, s.V, s.I1, s.I2, s.residual});
    j["samples"] = std::move(rows);
    return j;
}

// Writes to `path`, or to `out` when the path is empty or "-".
template <class Fn>
void emit(const std::string& path, std::ostream& out, Fn&& write) {
    if (path.empty() || path == "-") {
        write(out);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    write(f);
    if (!f) throw std::runtime_error("write to " + path + " failed");
}

void emit_json(const std::string& path, std::ostream& out, const ordered_json& j) {
    emit(path, out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

void emit_checks_csv(const std::string& path, std::ostream& out,
                     const std::vector<std::pair<std::string, Check>>& rows) {
    emit(path, out, [&](std::ostream& os) {
        os << "suite,name,value,bound,relation,pass\n";
        for (const auto& [suite, c] : rows) {
            std::string name = c.name;
            for (auto& ch : name)
                if (ch == ',') ch = ';';
            os << suite << ',' << name << ',' << format_double(c.value) << ',' << format_double(c.bound) << ','
               << c.relation << ',' << (c.pass ? "true" : "false") << '\n';
        }
    });
}

void check_format(const std::string& format) {
    if (format != "json" && format != "csv") throw UsageError("--format must be json or csv");
}

int report(const std::string& format, const std::string& path, std::ostream& out, ordered_json j,
           const std::string& suite, const std::vector<Check>& checks) {
    bool pass = true;
    for (const auto& c : checks) pass = pass && c.pass;
    if (format == "csv") {
        std::vector<std::pair<std::string, Check>> rows;
        for (const auto& c : checks) rows.emplace_back(suite, c);
        emit_checks_csv(path, out, rows);
    } else {
        j["pass"] = pass;
        ordered_json arr = ordered_json::array();
        for (const auto& c : checks) arr.push_back(check_json(c));
        j["checks"] = std::move(arr);
        emit_json(path, out, j);
    }
    return pass ? ok : failure;
}

// ---- curve / family -------------------------------------------------------

struct CurveArgs {
    CaseArgs c;
    FlowArgs f;
    double a = 0.0;
    std::string out;
    std::string format = "csv";
    bool adaptive = false;
};

int cmd_curve(const CurveArgs& A, std::ostream& out, std::ostream& err) {
    if (A.format != "csv" && A.format != "json") throw UsageError("--format must be csv or json");
    const ReducedCase cs = make_case(A.c);
    const IntegrationOptions opt = make_options(A.f);
    const ProfileCurve curve = integrate_profile(cs, A.a, opt);
    const auto& samples = A.adaptive ? curve.samples : curve.uniform;
    if (A.format == "csv")
        emit(A.out, out, [&](std::ostream& os) { write_curve_csv(os, samples); });
    else
        emit_json(A.out, out, curve_json(curve, samples));
    err << "termination " << to_string(curve.termination) << ", " << samples.size() << " samples\n";
    return ok;
}

struct FamilyArgs {
    CaseArgs c;
    FlowArgs f;
    std::vector<double> agrid;
    std::vector<double> qgrid;
    std::string out;
};

std::string curve_file_name(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "curve_%03zu.csv", i);
    return buf;
}

int cmd_family(const FamilyArgs& A, std::ostream& out, std::ostream& err) {
    const ReducedCase cs = make_case(A.c);
    const IntegrationOptions opt = make_options(A.f);
    if (A.agrid.empty()) throw UsageError("--agrid must not be empty");
    if (!A.qgrid.empty() && cs.kind() != CaseKind::parabolic)
        throw UsageError("--qgrid applies to the parabolic case only");
    const std::filesystem::path dir(A.out);
    std::filesystem::create_directories(dir);

    const auto curves = generate_family(cs, A.agrid, opt);
    ordered_json manifest = case_json(cs);
    manifest["h"] = opt.h;
    manifest["tol"] = opt.tol;
    manifest["smax"] = opt.s_max;
    ordered_json files = ordered_json::array();
    for (std::size_t i = 0; i < curves.size(); ++i) {
        const std::string name = curve_file_name(i);
        emit((dir / name).string(), out, [&](std::ostream& os) { write_curve_csv(os, curves[i].uniform); });
        files.push_back({{"a", curves[i].a},
                         {"file", name},
                         {"termination", to_string(curves[i].termination)},
                         {"samples", curves[i].uniform.size()}});
    }
    manifest["curves"] = std::move(files);

    int code = ok;
    if (!A.qgrid.empty()) {
        const FoliationReport rep = foliation_report(curves, A.qgrid, opt.tol);
        ordered_json cj = ordered_json::array();
        for (const auto& e : rep.crossings)
            cj.push_back({{"a", e.a}, {"q", e.q}, {"crossings", e.crossings}, {"transversal", e.transversal}});
        ordered_json dj = ordered_json::array();
        for (const auto& e : rep.dilations)
            dj.push_back({{"a_small", e.a_small}, {"a_large", e.a_large}, {"deviation", e.deviation}});
        manifest["certificate"] = {
            {"pass", rep.pass}, {"tolerance", rep.tolerance}, {"crossings", cj}, {"dilations", dj}};
        if (!rep.pass) {
            err << "foliation certificate failed\n";
            code = failure;
        }
    }
    emit_json((dir / "manifest.json").string(), out, manifest);
    err << curves.size() << " curves written to " << dir.string() << '\n';
    return code;
}

// ---- verify ---------------------------------------------------------------

struct VerifyArgs {
    std::string suite = "all";
    int n = 2;
    std::string out;
    std::string format = "json";
};

int cmd_verify(const VerifyArgs& A, std::ostream& out, std::ostream& err) {
    check_format(A.format);
    if (A.n < 2) throw UsageError("--n must be at least 2");
    const auto results = run_suites(A.suite, A.n);
    bool pass = true;
    std::vector<std::pair<std::string, Check>> rows;
    for (const auto& r : results)
        for (const auto& c : r.checks) {
            rows.emplace_back(r.suite, c);
            pass = pass && c.pass;
            if (!c.pass) err << "FAIL " << r.suite << ": " << c.name << " = " << c.value << '\n';
        }
    if (A.format == "csv") {
        emit_checks_csv(A.out, out, rows);
    } else {
        ordered_json j{{"command", "verify"}, {"suite", A.suite}, {"n", A.n}, {"pass", pass}};
        ordered_json arr = ordered_json::array();
        for (const auto& [suite, c] : rows) arr.push_back(check_json(c, suite));
        j["checks"] = std::move(arr);
        emit_json(A.out, out, j);
    }
    return pass ? ok : failure;
}

// ---- oracle ---------------------------------------------------------------

struct OracleArgs {
    std::string kind = "volume";
    CaseArgs c;
    std::string surface = "canonical-bisector";
    double t = 0.5;
    int points = 0;
    std::uint64_t seed = 1;
    double step = 1e-3;
    double bound = 0.0;
    std::string out;
    std::string format = "json";
};

HoroPoint sample_horo(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> ua(0.5, 2.0);
    std::normal_distribution<double> nw(0.0, 0.5 / std::sqrt(double(n - 1))), nb(0.0, 0.5);
    QVector w(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) w[i] = Quaternion(nw(rng), nw(rng), nw(rng), nw(rng));
    const double alpha = ua(rng);
    return HoroPoint(w, alpha, Quaternion(0.0, nb(rng), nb(rng), nb(rng)));
}

int cmd_oracle(const OracleArgs& A, std::ostream& out, std::ostream&) {
    check_format(A.format);
    if (A.kind == "volume") {
        if (A.c.kind.empty()) throw UsageError("--case is required for the volume oracle");
        const ReducedCase cs = make_case(A.c);
        const int count = A.points > 0 ? A.points : 50;
        const double bound = A.bound > 0.0 ? A.bound : 1e-5;
        const KillingOracle oracle(cs);
        const auto pts = principal_samples(cs, static_cast<std::size_t>(count), A.seed);
        const RatioSpread rs = killing_ratio_spread(cs, pts, {}, thread_count_from_env());
        ordered_json j{{"command", "oracle"}, {"kind", "volume"}};
        j.update(case_json(cs));
        j["points"] = count;
        j["seed"] = A.seed;
        j["orbit_dimension"] = oracle.orbit_dimension();
        j["reference_condition_number"] = oracle.reference_condition_number();
        j["ratio_mean"] = rs.mean;
        j["ratios"] = rs.ratios;
        return report(A.format, A.out, out, j, "oracle", {make_check("ratio spread", rs.spread, bound)});
    }
    if (A.kind != "mean-curvature") throw UsageError("--kind must be volume or mean-curvature");
    if (A.c.n < 2) throw UsageError("--n must be at least 2");
    if (!(A.step > 0.0)) throw UsageError("--step must be positive");
    const std::size_t n = static_cast<std::size_t>(A.c.n);
    const int count = A.points > 0 ? A.points : 20;
    const double bound = A.bound > 0.0 ? A.bound : 1e-3;
    std::mt19937_64 rng(A.seed);

    BallResidual F;
    std::function<ChartPoint(HoroPoint)> place;
    double target = 0.0;
    if (A.surface == "canonical-bisector") {
        F = [](const BallPoint& b) { return canonical_bisector_residual(to_horo(b)); };
        place = [](HoroPoint p) {
            Quaternion b = p.beta();
            b.q3 = 0.0;
            return HoroPoint(p.omega(), p.alpha(), b);
        };
    } else if (A.surface == "fan") {
        const Fan fan = standard_fan(n);
        F = [fan](const BallPoint& b) { return fan_residual(to_horo(b), fan); };
        place = [](HoroPoint p) {
            QVector w = p.omega();
            w[w.size() - 1].q0 = 0.0;
            return HoroPoint(w, p.alpha(), p.beta());
        };
    } else if (A.surface == "horosphere") {
        F = [](const BallPoint& b) { return to_horo(b).alpha() - 1.0; };
        place = [](HoroPoint p) { return HoroPoint(p.omega(), 1.0, p.beta()); };
        target = 2.0 * A.c.n + 1.0;
    } else if (A.surface == "bisector-family") {
        const double t = A.t;
        F = [t](const BallPoint& b) { return bisector_family_residual(to_horo(b), t); };
        place = [t](HoroPoint p) {
            Quaternion b = p.beta();
            b.q3 = 2 * t * p.omega()[p.omega().size() - 1].q3;
            return HoroPoint(p.omega(), p.alpha(), b);
        };
    } else if (A.surface == "fan-at-origin") {
        F = [](const BallPoint& b) { return fan_at_origin_residual(to_horo(b)); };
        place = [](HoroPoint p) {
            QVector w = p.omega();
            w[w.size() - 1].q3 = 0.0;
            return ChartPoint(inversion_horo(HoroPoint(w, p.alpha(), p.beta())));
        };
    } else {
        throw UsageError("--surface must be canonical-bisector, fan, horosphere, bisector-family or fan-at-origin");
    }

    std::vector<double> values;
    double worst = 0.0;
    for (int k = 0; k < count; ++k) {
        const ChartPoint p = place(sample_horo(rng, n));
        const double H = ambient_mean_curvature(F, p, A.step);
        values.push_back(H);
        worst = std::max(worst, std::fabs(H - target));
    }
    ordered_json j{{"command", "oracle"}, {"kind", "mean-curvature"}, {"surface", A.surface}, {"n", A.c.n}};
    if (A.surface == "bisector-family") j["t"] = A.t;
    j["points"] = count;
    j["seed"] = A.seed;
    j["step"] = A.step;
    j["target"] = target;
    j["values"] = values;
    return report(A.format, A.out, out, j, "oracle", {make_check("max |H - target|", worst, bound)});
}

// ---- boundary -------------------------------------------------------------

struct BoundaryArgs {
    CaseArgs c;
    FlowArgs f;
    double a = 1.0;
    std::string out;
    std::string format = "json";
};

int cmd_boundary(const BoundaryArgs& A, std::ostream& out, std::ostream&) {
    check_format(A.format);
    const ReducedCase cs = make_case(A.c);
    const IntegrationOptions opt = make_options(A.f);
    const ProfileCurve curve = integrate_profile(cs, A.a, opt);
    const EndpointLimit lim = limit_endpoint(curve);

    ordered_json j{{"command", "boundary"}};
    j.update(case_json(cs));
    j["a"] = A.a;
    j["termination"] = to_string(curve.termination);
    j["limit"] = {{"c1", lim.c1}, {"c2", lim.c2}, {"converged", lim.converged}};
    std::vector<Check> checks;
    const int n = cs.n();
    if (cs.kind() == CaseKind::parabolic) {
        const double k = 4.0 * n - 4.0 * cs.m();
        const double lo = std::sqrt(A.a * (k - 1.0) / (4.0 * n + 1.0));
        const double hi = std::sqrt(A.a * k / (4.0 * n + 2.0));
        j["bounds"] = {lo, hi};
        checks.push_back(make_check("limit rho above lower bound", lim.c2, lo, ">"));
        checks.push_back(make_check("limit rho below upper bound", lim.c2, hi, "<="));
    } else if (cs.kind() == CaseKind::special_parabolic) {
        const double R = std::sqrt(A.a) * elliptic_integral_R(n);
        j["target"] = R;
        checks.push_back(make_check("|limit rho - sqrt(a) R|", std::fabs(lim.c2 - R), 1e-6));
    }
    return report(A.format, A.out, out, j, "boundary", checks);
}

// ---- convert --------------------------------------------------------------

struct ConvertArgs {
    std::string from = "ball";
    std::string to = "ball";
    std::vector<double> point;
    std::string apply;
    std::string format = "text";
};

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(item, &used);
        } catch (const std::exception&) {
            throw UsageError("bad number '" + item + "'");
        }
        if (used != item.size()) throw UsageError("bad number '" + item + "'");
        v.push_back(x);
    }
    return v;
}

Quaternion quaternion_from(const std::vector<double>& v, std::size_t at) {
    return Quaternion(v[at], v[at + 1], v[at + 2], v[at + 3]);
}

// transvection:T | heisenberg:XI;NU | rotation:Q | inversion
ChartPoint apply_named(const std::string& spec, const ChartPoint& p, std::size_t n) {
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    const std::string arg = colon == std::string::npos ? std::string() : spec.substr(colon + 1);
    if (name == "inversion") {
        if (!arg.empty()) throw UsageError("inversion takes no parameters");
        return inversion_horo(to_horo(p));
    }
    if (name == "transvection") {
        const auto v = parse_list(arg);
        if (v.size() != 1) throw UsageError("transvection:T takes one number");
        return act(make_isometry(Transvection{v[0]}, n), p);
    }
    if (name == "rotation") {
        const auto v = parse_list(arg);
        if (v.size() != 4) throw UsageError("rotation:q0,q1,q2,q3 takes four numbers");
        return act(make_isometry(Rotation{QMatrix::identity(n), quaternion_from(v, 0)}), p);
    }
    if (name == "heisenberg") {
        const auto semi = arg.find(';');
        if (semi == std::string::npos) throw UsageError("heisenberg:XI;NU needs ';' between xi and nu");
        const auto xi = parse_list(arg.substr(0, semi));
        const auto nu = parse_list(arg.substr(semi + 1));
        if (xi.size() != 4 * (n - 1)) throw UsageError("heisenberg xi needs " + std::to_string(4 * (n - 1)) + " numbers");
        if (nu.size() != 3) throw UsageError("heisenberg nu needs 3 numbers");
        return act(make_isometry(HeisenbergElement(QVector::from_reals(xi), Quaternion(0.0, nu[0], nu[1], nu[2]))), p);
    }
    throw UsageError("unknown isometry '" + name + "'");
}

int cmd_convert(const ConvertArgs& A, std::ostream& out, std::ostream&) {
    if (A.format != "text" && A.format != "json") throw UsageError("--format must be text or json");
    if (A.point.empty() || A.point.size() % 4 != 0) throw UsageError("--point needs 4n coordinates");
    const std::size_t n = A.point.size() / 4;
    const Chart from = parse_chart(A.from), to = parse_chart(A.to);
    ChartPoint p = from_coordinates(from, A.point);
    if (!A.apply.empty()) p = apply_named(A.apply, p, n);
    const auto coords = coordinates(convert(p, to));
    if (A.format == "json") {
        ordered_json j{{"command", "convert"}, {"from", A.from}, {"to", A.to}};
        if (!A.apply.empty()) j["apply"] = A.apply;
        j["point"] = coords;
        out << j.dump(2) << '\n';
    } else {
        for (std::size_t i = 0; i < coords.size(); ++i) out << (i ? "," : "") << format_double(coords[i]);
        out << '\n';
    }
    return ok;
}

// ---- integral -------------------------------------------------------------

struct IntegralArgs {
    int n = 2;
    std::string format = "text";
};

int cmd_integral(const IntegralArgs& A, std::ostream& out, std::ostream& err) {
    if (A.format != "text" && A.format != "json") throw UsageError("--format must be text or json");
    if (A.n < 2) throw UsageError("--n must be at least 2");
    const double R = elliptic_integral_R(A.n);
    const double Rb = elliptic_integral_R_beta(A.n);
    const Check c = make_check("|quadrature - beta identity|", std::fabs(R - Rb), 1e-9);
    if (A.format == "json") {
        ordered_json j{{"command", "integral"}, {"n", A.n}, {"quadrature", R}, {"beta_identity", Rb}};
        j["pass"] = c.pass;
        j["checks"] = ordered_json::array({check_json(c)});
        out << j.dump(2) << '\n';
    } else {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.15g", R);
        out << buf << '\n';
    }
    if (!c.pass) err << "quadrature disagrees with the beta identity by " << c.value << '\n';
    return c.pass ? ok : failure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quaternionic hyperbolic space: reductions, profile curves and oracles", "hqn"};
    app.set_help_flag("--help", "print this help and exit");
    app.require_subcommand(1);
    app.set_version_flag("--version", "hqn 1.0.0");

    CurveArgs curve;
    auto* c_curve = app.add_subcommand("curve", "integrate one profile curve");
    add_case_flags(c_curve, curve.c);
    add_flow_flags(c_curve, curve.f);
    c_curve->add_option("--a", curve.a, "stratum start parameter")->required();
    c_curve->add_option("--out", curve.out, "output file (stdout when omitted)");
    c_curve->add_option("--format", curve.format, "csv or json")->default_val("csv");
    c_curve->add_flag("--adaptive", curve.adaptive, "export accepted steps instead of uniform samples");

    FamilyArgs family;
    auto* c_family = app.add_subcommand("family", "integrate a grid of start parameters");
    add_case_flags(c_family, family.c);
    add_flow_flags(c_family, family.f);
    c_family->add_option("--agrid", family.agrid, "comma-separated start parameters")->delimiter(',')->required();
    c_family->add_option("--qgrid", family.qgrid, "parabolic certificate arcs alpha = q^2 rho^2")->delimiter(',');
    c_family->add_option("--out", family.out, "output directory")->required();

    VerifyArgs verify;
    auto* c_verify = app.add_subcommand("verify", "run invariant suites");
    c_verify->add_option("--suite", verify.suite, "suite name or all")->default_val("all");
    c_verify->add_option("--n", verify.n, "quaternionic dimension")->default_val(2);
    c_verify->add_option("--out", verify.out, "report file (stdout when omitted)");
    c_verify->add_option("--format", verify.format, "json or csv")->default_val("json");

    OracleArgs oracle;
    auto* c_oracle = app.add_subcommand("oracle", "volume and mean-curvature oracles");
    c_oracle->add_option("--kind", oracle.kind, "volume or mean-curvature")->default_val("volume");
    add_case_flags(c_oracle, oracle.c, false);
    c_oracle->add_option("--surface", oracle.surface, "mean-curvature surface")->default_val("canonical-bisector");
    c_oracle->add_option("--t", oracle.t, "bisector-family parameter")->default_val(0.5);
    c_oracle->add_option("--points", oracle.points, "sample count (50 volume, 20 mean curvature)");
    c_oracle->add_option("--seed", oracle.seed, "sampling seed")->default_val(1);
    c_oracle->add_option("--step", oracle.step, "difference step")->default_val(1e-3);
    c_oracle->add_option("--bound", oracle.bound, "pass bound (1e-5 volume, 1e-3 mean curvature)");
    c_oracle->add_option("--out", oracle.out, "report file (stdout when omitted)");
    c_oracle->add_option("--format", oracle.format, "json or csv")->default_val("json");

    BoundaryArgs boundary;
    auto* c_boundary = app.add_subcommand("boundary", "endpoint limit and bounds check");
    add_case_flags(c_boundary, boundary.c);
    add_flow_flags(c_boundary, boundary.f);
    c_boundary->add_option("--a", boundary.a, "stratum start parameter")->default_val(1.0);
    c_boundary->add_option("--out", boundary.out, "report file (stdout when omitted)");
    c_boundary->add_option("--format", boundary.format, "json or csv")->default_val("json");

    ConvertArgs conv;
    auto* c_convert = app.add_subcommand("convert", "chart conversion and named isometries");
    c_convert->add_option("--from", conv.from, "ball, siegel or horo")->default_val("ball");
    c_convert->add_option("--to", conv.to, "ball, siegel or horo")->default_val("ball");
    c_convert->add_option("--point", conv.point, "4n comma-separated coordinates")->delimiter(',')->required();
    c_convert->add_option("--apply", conv.apply,
                          "transvection:T, rotation:q0,q1,q2,q3, heisenberg:XI;NU or inversion");
    c_convert->add_option("--format", conv.format, "text or json")->default_val("text");

    IntegralArgs integral;
    auto* c_integral = app.add_subcommand("integral", "terminal rho of the special parabolic curve");
    c_integral->add_option("--n", integral.n, "quaternionic dimension")->default_val(2);
    c_integral->add_option("--format", integral.format, "text or json")->default_val("text");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : usage;
    }

    try {
        if (c_curve->parsed()) return cmd_curve(curve, out, err);
        if (c_family->parsed()) return cmd_family(family, out, err);
        if (c_verify->parsed()) return cmd_verify(verify, out, err);
        if (c_oracle->parsed()) return cmd_oracle(oracle, out, err);
        if (c_boundary->parsed()) return cmd_boundary(boundary, out, err);
        if (c_convert->parsed()) return cmd_convert(conv, out, err);
        if (c_integral->parsed()) return cmd_integral(integral, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return usage;
    } catch (const DomainError& e) {
        err << "usage error: " << e.what() << '\n';
        return usage;
    } catch (const NotInteriorError& e) {
        err << "usage error: " << e.what() << '\n';
        return usage;
    } catch (const ShapeError& e) {
        err << "usage error: " << e.what() << '\n';
        return usage;
    } catch (const NotSymplecticError& e) {
        err << "usage error: " << e.what() << '\n';
        return usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return failure;
    }
    return usage;
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, std::cout, std::cerr);
}

}  // namespace hqn::cli
