import math

import numpy as np
import pytest

import hqn


def test_case_construction():
    cs = hqn.ReducedCase("elliptic", 3, 2)
    assert cs.kind == "elliptic"
    assert cs.coefficients == (7, 3, -4, 7)
    assert hqn.ReducedCase("loxodromic", 3).m == 2
    with pytest.raises(hqn.DomainError):
        hqn.ReducedCase("elliptic", 2, 2)
    with pytest.raises(hqn.HqnError):
        hqn.ReducedCase("hyperbolic", 2)


def test_elliptic_curve():
    cs = hqn.ReducedCase("elliptic", 2, 1)
    c = hqn.integrate_profile(cs, 1.0, smax=20.0, tol=1e-10)
    u = c.uniform
    assert u.shape == (2001, 8)
    assert c.termination == "reached-smax"
    assert np.all(np.diff(u[:, 1]) > 0)
    assert np.all(np.abs(u[1:, 3]) < math.pi / 2)
    assert hqn.ode_residual(c) < 1e-3
    c1, c2, converged = hqn.limit_endpoint(c)
    assert not converged


def test_parabolic_limit_and_certificate():
    cs = hqn.ReducedCase("parabolic", 2, 1)
    curves = hqn.generate_family(cs, [0.5, 1.0, 2.0], smax=40.0)
    assert [c.a for c in curves] == [0.5, 1.0, 2.0]
    _, rho, converged = hqn.limit_endpoint(curves[1])
    assert converged
    assert math.sqrt(1 / 3) <= rho <= math.sqrt(2 / 5)
    rep = hqn.foliation_report(curves, [0.5, 1.0, 2.0, 4.0], 1e-10)
    assert rep["pass"]
    assert all(c[2] == 1 for c in rep["crossings"])


def test_special_parabolic_integral():
    assert hqn.elliptic_integral_R(2) == pytest.approx(0.1471, abs=1e-4)
    assert abs(hqn.elliptic_integral_R(2) - hqn.elliptic_integral_R_beta(2)) < 1e-10
    assert hqn.rho_special_parabolic(2, 1.0) == 0.0
    cs = hqn.ReducedCase("special-parabolic", 2)
    c = hqn.integrate_profile(cs, 1.0, tol=1e-11)
    assert np.max(np.abs(c.samples[:, 5] - 1.0)) < 1e-8
    _, rho, _ = hqn.limit_endpoint(c)
    assert abs(rho - hqn.elliptic_integral_R(2)) < 1e-6


def test_special_loxodromic_mirror():
    cs = hqn.ReducedCase("special-loxodromic", 2)
    neg, zero, pos = hqn.generate_family(cs, [-0.5, 0.0, 0.5], smax=5.0)
    assert np.max(np.abs(zero.uniform[:, 2] - math.pi / 2)) < 1e-12
    m = hqn.mirror_curve(pos)
    assert np.max(np.abs(m.uniform[:, 1:4] - neg.uniform[:, 1:4])) < 1e-12


def test_reduced_equation_values():
    cs = hqn.ReducedCase("elliptic", 2, 1)
    assert hqn.volume_functional(cs, 1.0, math.pi / 4) == pytest.approx(77.44, rel=1e-3)
    assert abs(hqn.ode_rhs(cs, (1.0, math.pi / 4, 0.0))[2]) < 1e-14
    expect = -(2 / math.tanh(1) + 3 / math.tanh(2)) / 4
    assert hqn.boundary_sigma_rate(cs, 1.0) == pytest.approx(expect, rel=1e-12)
    names = {s["name"] for s in hqn.explicit_solutions(cs)}
    assert {"cone", "sphere"} <= names


def test_charts():
    z = hqn.convert([0.0] * 8, "ball", "siegel")
    assert z[4] == pytest.approx(0.5)
    p = [0.1, 0.2, 0.0, 0.0, 0.3, 0.0, 0.1, 0.0]
    back = hqn.convert(hqn.convert(p, "ball", "horo"), "horo", "ball")
    assert np.allclose(back, p, atol=1e-12)
    assert hqn.dist([0.0] * 8, [0, 0, 0, 0, 0.5, 0, 0, 0]) == pytest.approx(math.log(3.0))
    with pytest.raises(hqn.NotInteriorError):
        hqn.convert([1.0, 0, 0, 0, 0, 0, 0, 0], "ball", "horo")


def test_oracles_and_suites():
    spread, _ = hqn.killing_ratio_spread(hqn.ReducedCase("special-loxodromic", 2))
    assert spread < 1e-5
    checks = hqn.run_suites("explicit", 2)
    assert checks and all(c["pass"] for c in checks)
    assert "foliation" in hqn.suite_names()


def test_cli_in_process():
    code, out, _ = hqn.cli(["integral", "--n", "2"])
    assert code == 0
    assert out.startswith("0.1471")
    code, _, err = hqn.cli(["curve", "--case", "elliptic", "--m", "4", "--a", "1"])
    assert code == 2
    assert "DomainError" in err
