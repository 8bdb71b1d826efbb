#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/functional.h>

#include <sstream>

#include "hqn/charts.hpp"
#include "hqn/cli.hpp"
#include "hqn/errors.hpp"
#include "hqn/integrator.hpp"
#include "hqn/oracles.hpp"
#include "hqn/reduction.hpp"
#include "hqn/verify.hpp"

namespace py = pybind11;
using namespace hqn;

namespace {

ReducedCase make_case(const std::string& kind, int n, std::optional<int> m) {
    const CaseKind k = parse_case_kind(kind);
    int mm = 0;
    if (m) mm = *m;
    else if (k == CaseKind::elliptic || k == CaseKind::parabolic) mm = 1;
    else if (k == CaseKind::loxodromic) mm = 2;
    return ReducedCase(k, n, mm);
}

Stratum parse_stratum(const std::string& s) {
    if (s == "lower") return Stratum::lower;
    if (s == "upper") return Stratum::upper;
    throw DomainError("stratum must be 'lower' or 'upper'");
}

IntegrationOptions options(double smax, double tol, double h, double ds, const std::string& stratum) {
    IntegrationOptions o;
    o.s_max = smax;
    o.tol = tol;
    o.h = h;
    o.ds_out = ds;
    o.stratum = parse_stratum(stratum);
    return o;
}

py::array_t<double> sample_array(const std::vector<Sample>& v) {
    py::array_t<double> a({static_cast<py::ssize_t>(v.size()), static_cast<py::ssize_t>(8)});
    auto r = a.mutable_unchecked<2>();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto& s = v[i];
        const double row[8] = {s.s, s.state.c1, s.state.c2, s.state.sigma, s.V, s.I1, s.I2, s.residual};
        for (int j = 0; j < 8; ++j) r(i, j) = row[j];
    }
    return a;
}

PhaseState to_state(const std::array<double, 3>& s) { return {s[0], s[1], s[2]}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Quaternionic hyperbolic space: polar reductions, profile curves and oracles";

    auto base = py::register_exception<Error>(m, "HqnError", PyExc_RuntimeError);
    py::register_exception<DivisionByZero>(m, "DivisionByZero", base.ptr());
    py::register_exception<ShapeError>(m, "ShapeError", base.ptr());
    py::register_exception<NotInteriorError>(m, "NotInteriorError", base.ptr());
    py::register_exception<NotSymplecticError>(m, "NotSymplecticError", base.ptr());
    py::register_exception<NotPolarError>(m, "NotPolarError", base.ptr());
    py::register_exception<DegenerateLocusError>(m, "DegenerateLocusError", base.ptr());
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<SingularBoundaryError>(m, "SingularBoundaryError", base.ptr());
    py::register_exception<NoSingularStratumError>(m, "NoSingularStratumError", base.ptr());
    py::register_exception<StepSizeUnderflow>(m, "StepSizeUnderflow", base.ptr());
    py::register_exception<ExtrapolationError>(m, "ExtrapolationError", base.ptr());
    py::register_exception<DegenerateOrbitError>(m, "DegenerateOrbitError", base.ptr());
    py::register_exception<SingularPointError>(m, "SingularPointError", base.ptr());
    py::register_exception<CertificateFailure>(m, "CertificateFailure", base.ptr());

    py::class_<ReducedCase>(m, "ReducedCase")
        .def(py::init(&make_case), py::arg("kind"), py::arg("n") = 2, py::arg("m") = py::none())
        .def_property_readonly("kind", &ReducedCase::key)
        .def_property_readonly("n", &ReducedCase::n)
        .def_property_readonly("m", &ReducedCase::m)
        .def_property_readonly("polar", &ReducedCase::polar)
        .def_property_readonly("c2_max", &ReducedCase::c2_max)
        .def_property_readonly("coefficients",
                               [](const ReducedCase& cs) -> py::object {
                                   const auto c = cs.coefficients();
                                   if (!c) return py::none();
                                   return py::make_tuple(c->A, c->B, c->C, c->D);
                               })
        .def("__repr__", [](const ReducedCase& cs) {
            std::ostringstream os;
            os << "ReducedCase('" << cs.key() << "', n=" << cs.n() << ", m=" << cs.m() << ")";
            return os.str();
        });

    py::class_<ProfileCurve>(m, "ProfileCurve")
        .def_property_readonly("case", [](const ProfileCurve& c) { return c.cs; })
        .def_readonly("a", &ProfileCurve::a)
        .def_readonly("h", &ProfileCurve::h)
        .def_readonly("tol", &ProfileCurve::tol)
        .def_property_readonly("termination", [](const ProfileCurve& c) { return to_string(c.termination); })
        .def_property_readonly("uniform", [](const ProfileCurve& c) { return sample_array(c.uniform); },
                               "columns s, c1, c2, sigma, V, I1, I2, residual")
        .def_property_readonly("samples", [](const ProfileCurve& c) { return sample_array(c.samples); })
        .def("__len__", [](const ProfileCurve& c) { return c.uniform.size(); });

    m.attr("COLUMNS") = py::make_tuple("s", "c1", "c2", "sigma", "V", "I1", "I2", "residual");

    m.def("volume_functional",
          [](const ReducedCase& cs, double c1, double c2) { return volume_functional(cs, {c1, c2}); });
    m.def("ode_rhs", [](const ReducedCase& cs, const std::array<double, 3>& s, double h) {
        return ode_rhs(cs, to_state(s), h);
    }, py::arg("case"), py::arg("state"), py::arg("h") = 0.0);
    m.def("boundary_sigma_rate",
          [](const ReducedCase& cs, double a, const std::string& st) { return boundary_sigma_rate(cs, a, parse_stratum(st)); },
          py::arg("case"), py::arg("a"), py::arg("stratum") = "lower");
    m.def("first_integrals", [](const ReducedCase& cs, const std::array<double, 3>& s) {
        const auto f = first_integrals(cs, to_state(s));
        return py::make_tuple(f.I, f.J ? py::cast(*f.J) : py::none());
    });
    m.def("explicit_solutions", [](const ReducedCase& cs, double a) {
        py::list out;
        for (const auto& s : explicit_solutions(cs, a)) {
            py::dict d;
            d["name"] = s.name;
            d["description"] = s.description;
            d["parameter"] = s.parameter;
            d["h"] = s.h;
            out.append(d);
        }
        return out;
    }, py::arg("case"), py::arg("a") = 1.0);

    m.def("integrate_profile",
          [](const ReducedCase& cs, double a, double smax, double tol, double h, double ds, const std::string& st) {
              py::gil_scoped_release release;
              return integrate_profile(cs, a, options(smax, tol, h, ds, st));
          },
          py::arg("case"), py::arg("a"), py::arg("smax") = 20.0, py::arg("tol") = 1e-10, py::arg("h") = 0.0,
          py::arg("ds") = 1e-2, py::arg("stratum") = "lower");
    m.def("integrate_from_state",
          [](const ReducedCase& cs, const std::array<double, 3>& s, double smax, double tol, double h, double ds) {
              py::gil_scoped_release release;
              return integrate_from_state(cs, to_state(s), options(smax, tol, h, ds, "lower"));
          },
          py::arg("case"), py::arg("state"), py::arg("smax") = 20.0, py::arg("tol") = 1e-10, py::arg("h") = 0.0,
          py::arg("ds") = 1e-2);
    m.def("generate_family",
          [](const ReducedCase& cs, const std::vector<double>& grid, double smax, double tol, double h, double ds,
             unsigned threads) {
              py::gil_scoped_release release;
              return generate_family(cs, grid, options(smax, tol, h, ds, "lower"), threads);
          },
          py::arg("case"), py::arg("agrid"), py::arg("smax") = 20.0, py::arg("tol") = 1e-10, py::arg("h") = 0.0,
          py::arg("ds") = 1e-2, py::arg("threads") = 0);
    m.def("mirror_curve", &mirror_curve);
    m.def("reflection_continuation", &reflection_continuation);
    m.def("limit_endpoint", [](const ProfileCurve& c) {
        const auto l = limit_endpoint(c);
        return py::make_tuple(l.c1, l.c2, l.converged);
    });
    m.def("ode_residual", &ode_residual);
    m.def("foliation_report", [](const std::vector<ProfileCurve>& curves, const std::vector<double>& q, double tol) {
        const auto r = foliation_report(curves, q, tol);
        py::list cr, dl;
        for (const auto& e : r.crossings) cr.append(py::make_tuple(e.a, e.q, e.crossings, e.transversal));
        for (const auto& e : r.dilations) dl.append(py::make_tuple(e.a_small, e.a_large, e.deviation));
        py::dict d;
        d["pass"] = r.pass;
        d["tolerance"] = r.tolerance;
        d["crossings"] = cr;
        d["dilations"] = dl;
        return d;
    });

    m.def("elliptic_integral_R", &elliptic_integral_R);
    m.def("elliptic_integral_R_beta", &elliptic_integral_R_beta);
    m.def("rho_special_parabolic", &rho_special_parabolic);

    m.def("convert", [](const std::vector<double>& coords, const std::string& from, const std::string& to) {
        return coordinates(convert(from_coordinates(parse_chart(from), coords), parse_chart(to)));
    }, py::arg("coords"), py::arg("source"), py::arg("target"));
    m.def("dist", [](const std::vector<double>& p, const std::vector<double>& q, const std::string& chart) {
        const Chart c = parse_chart(chart);
        return dist(from_coordinates(c, p), from_coordinates(c, q));
    }, py::arg("p"), py::arg("q"), py::arg("chart") = "ball");
    m.def("busemann", [](const std::vector<double>& p, const std::string& chart) {
        return busemann(from_coordinates(parse_chart(chart), p));
    }, py::arg("p"), py::arg("chart") = "ball");

    m.def("killing_ratio_spread", [](const ReducedCase& cs, std::size_t count, std::uint64_t seed) {
        py::gil_scoped_release release;
        const auto r = killing_ratio_spread(cs, principal_samples(cs, count, seed));
        return std::make_pair(r.spread, r.mean);
    }, py::arg("case"), py::arg("count") = 50, py::arg("seed") = 1);

    m.def("suite_names", &suite_names);
    m.def("run_suites", [](const std::string& suite, int n) {
        std::vector<SuiteResult> res;
        {
            py::gil_scoped_release release;
            res = run_suites(suite, n);
        }
        py::list out;
        for (const auto& r : res)
            for (const auto& c : r.checks) {
                py::dict d;
                d["suite"] = r.suite;
                d["name"] = c.name;
                d["value"] = c.value;
                d["bound"] = c.bound;
                d["relation"] = c.relation;
                d["pass"] = c.pass;
                out.append(d);
            }
        return out;
    }, py::arg("suite") = "all", py::arg("n") = 2);

    m.def("cli", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
    }, "Runs the command-line interface in-process; returns (exit code, stdout, stderr).");
}
