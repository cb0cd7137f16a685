import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import optimize

from licert import certify as C
from licert import specfun
from licert.energy import energy_direct
from licert.errors import DomainError, UnsupportedError, ValidationError
from licert.measures import uniform_ball
from licert.potentials import PotentialSpec


def test_c4_analytic():
    assert C.c4_constant() == pytest.approx(math.e * math.log(2) / 4, rel=1e-10)
    ref = optimize.minimize_scalar(lambda a: 2 ** (a / 2) / (2 * a), bracket=(0.5, 3, 20)).fun
    assert C.c4_constant() == pytest.approx(ref, rel=1e-8)


@pytest.mark.parametrize("b,a0", [(0.5, 1.0), (1.0, 3.0), (-0.5, 4.0), (0.0, 2.5)])
def test_c3_is_sup(b, a0):
    grid = np.linspace(a0, a0 + 60, 200001)
    assert C.c3_constant(b, a0) == pytest.approx(np.max(2 ** ((b - grid) / 2) * grid), rel=1e-9)


@pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
def test_ball_distance_moments(d):
    assert C.ball_distance_moment(2.0, d) == pytest.approx(2 * d * 0.25 / (d + 2), rel=1e-11)
    assert C.ball_distance_moment(0.0, d) == pytest.approx(1.0, rel=1e-11)
    rng = np.random.default_rng(d)
    X, Y = uniform_ball(400_000, 0.5, d, rng), uniform_ball(400_000, 0.5, d, rng)
    r = np.linalg.norm(X - Y, axis=1)
    for s in (0.5, 1.0, -0.5):
        mc = np.mean(r**s)
        se = np.std(r**s) / math.sqrt(r.size)
        assert abs(C.ball_distance_moment(s, d) - mc) < 5 * se
    mc = np.mean(np.log(r))
    assert abs(C.ball_distance_moment(0.0, d, log=True) - mc) < 5 * np.std(np.log(r)) / math.sqrt(r.size)
    if d == 1:
        assert C.ball_distance_moment(1.0, 1) == pytest.approx(1 / 3, rel=1e-12)


def test_size_bound_branches():
    sb = C.size_bound(-1.0, 1.0, 2)
    assert sb.r_star_small == 2.0
    with pytest.raises(DomainError):
        C.size_bound(-1.0, 1.0, 1)
    for b, a0, d in [(0.5, 1.0, 1), (1.0, 2.0, 2), (0.0, 1.5, 3), (-0.5, 3.0, 1), (1.5, 4.0, 2)]:
        sb = C.size_bound(b, a0, d)
        assert sb.R_star == 4 * sb.R1
        assert sb.R1 >= sb.r_star_small >= 2
        assert sb.C4 == C.c4_constant()


def test_size_bound_r_star_claim_log_repulsion():
    # every t >= r_* satisfies a t^{-a} ln t <= 1/2 for all a >= a0
    for a0 in (0.5, 1.0, 2.0):
        r = C.size_bound(0.0, a0, 1).r_star_small
        t = r * np.logspace(0, 3, 400)
        for a in np.linspace(a0, a0 + 20, 101):
            assert np.all(a * t ** (-a) * np.log(t) <= 0.5 + 1e-12)


def test_size_bound_overflow_is_infinite():
    sb = C.size_bound(0.17578125, 0.1796875, 1)
    assert sb.R_star == math.inf
    assert not C.certify_sub2(0.1796875, 0.17578125, 1).certified


def test_size_bound_log():
    for b0 in (0.3, 1.0, 2.0, 5.0):
        assert C.size_bound_log(b0, 2).R1 >= math.e
    big = C.size_bound_log(200.0, 2)
    assert big.R1 == pytest.approx(math.e, rel=1e-12) and big.R_star == pytest.approx(4 * math.e, rel=1e-12)
    vals = [C.size_bound_log(b0, 2).R_star for b0 in (0.5, 1.0, 1.5, 2.0)]
    assert all(x >= y for x, y in zip(vals, vals[1:]))


@pytest.mark.parametrize("d", [1, 2, 3])
def test_poincare_lambda_cap_and_trend(d):
    for alpha, beta in [(d + 1.9, d + 1.0), (d + 1.0, 0.0), (2.0, 0.0), (d + 3.0, d + 2.0)]:
        pc = C.poincare_constant(alpha, beta, d)
        assert pc.lam <= 1 / (2 * (4 * math.pi) ** (alpha - beta)) * (1 + 1e-15)
        assert pc.C_result == pytest.approx(1 / pc.lam)
    beta = 0.0
    G = 4 * (8 * math.pi**2 * d) ** 2 * specfun.ball_volume(d, 2) * specfun.sphere_area(d)
    C2 = C.poincare_constant(d + 3.99, beta, d).C2
    limit = 64 * math.pi**2 / d**2 * G * C2
    prod = [C.poincare_constant(d + 4 - q, beta, d).C_result * q for q in (0.5, 0.1, 0.01, 1e-3, 1e-5)]
    assert all(x < y for x, y in zip(prod, prod[1:]))
    assert prod[-1] == pytest.approx(limit, rel=1e-3)


@pytest.mark.parametrize("d", [1, 2])
def test_poincare_log(d):
    for beta in (d + 1.0, d + 1.9, d + 3.5):
        assert C.poincare_constant_log(beta, d).C_result >= 2 * math.log(4 * math.pi)
    ratios = [C.poincare_constant_log(d + 4 - q, d).C_result * q / -math.log(q) for q in (1e-2, 1e-3, 1e-4, 1e-6)]
    assert all(x > y for x, y in zip(ratios, ratios[1:]))
    assert 4 < ratios[-1] < 8


def test_lic_lb_sub2():
    vals = [C.lic_lb_sub2(a, 1.0, 1) for a in (1.5, 1.9, 1.99, 1.999, 1.99999)]
    assert all(x < y for x, y in zip(vals, vals[1:]))
    assert vals[-1] > 1e3
    assert 0 < C.lic_lb_sub2(1.001, 1.0, 1) < 1e-100
    with pytest.raises(DomainError):
        C.lic_lb_sub2(2.0, 1.0, 1)


def test_lic_lb_sub2_sign_test_at_radius():
    a, b, d = 1.9, 1.0, 1
    R = C.lic_lb_sub2(a, b, d)
    cert = C.certify_sub2(a, b, d)
    sc = C.spot_check(cert, seeds=200, radius=0.99 * R)
    assert sc.passed, sc


def test_lic_lb_log():
    for d in (1, 2, 3):
        assert C.lic_lb_log(2.0, d) == math.inf
    vals = [C.lic_lb_log(b, 2) for b in (1.5, 1.9, 1.95, 1.99)]
    assert all(math.isfinite(v) for v in vals)
    assert all(x < y for x, y in zip(vals, vals[1:]))
    R = C.lic_lb_log(1.9, 2)
    sc = C.spot_check(C.certify_log(1.9, 2), seeds=200, radius=0.99 * R)
    assert sc.passed, sc


def test_truncated_kernel_fourier():
    k = np.array([0.0, 0.5, 3.0])
    assert np.all(C.truncated_kernel_fourier(k, 4.0, 2) == 0.0)
    for d in (1, 2, 3):
        for a in (4.05, 4.5, 6.0):
            assert C.truncated_kernel_fourier(0.0, a, d)[0] > 0
    # oracle: F(0) = |S^{d-1}| ∫ (r^a - r^4) Φ(r) r^{d-1} dr
    from scipy import integrate
    a, d = 4.5, 3
    f = lambda r: (r**a - r**4) * float(specfun.truncation(np.array([r]))[0]) * r ** (d - 1)
    ref = specfun.sphere_area(d) * integrate.quad(f, 0, 2, points=[1], epsabs=1e-14)[0]
    assert C.truncated_kernel_fourier(0.0, a, d)[0] == pytest.approx(ref, rel=1e-10)


def test_eta_estimate_trend_and_domain():
    for d in (1, 2, 3):
        ratios = [C.eta_estimate(a, d) / (a - 4) for a in (4.1, 4.25, 4.5)]
        assert max(ratios) / min(ratios) < 2.5
        prof = C.eta_profile(4.25, d)
        assert prof.grid_argmax < 0.8 * prof.xi_max
        assert prof.eta_hat == pytest.approx(prof.safety * max(prof.grid_max, prof.asymptote))
    with pytest.raises(DomainError):
        C.eta_estimate(4.0, 1)


def test_certify_examples():
    c = C.certify(PotentialSpec.power(3, 1, 2))
    assert c.certified and c.regime == "known_lic"
    c = C.certify(PotentialSpec.power(2.5, 1, 2))
    assert c.certified and c.to_json()["verdict"] == "unique up to translation"
    c = C.certify(PotentialSpec.logpower(2, 3))
    assert c.certified and c.R_lic_lb == math.inf
    c = C.certify(PotentialSpec.power(1.95, 1, 1))
    assert c.regime == "sub2" and c.certified == (c.R_lic_lb > c.R_star)
    c = C.certify(PotentialSpec.power(4.05, 1, 1))
    assert c.regime == "above4" and c.flags["numerically_estimated_eta"]
    assert not C.certify_above4(8.0, 1.0, 1).certified
    with pytest.raises(UnsupportedError):
        C.certify(PotentialSpec.power(5, 3, 1))
    with pytest.raises(UnsupportedError):
        C.certify(PotentialSpec.repulsive(1, 1))


def test_above4_near_four_certified():
    c = C.certify_above4(4 + 1e-9, 1.0, 1)
    assert c.certified and c.R_lic_lb > c.R_star
    # uniform grids starting at 4.01 do not reach the certified range
    assert not C.certify_above4(4.01, 0.5, 1).certified


def test_counterexamples():
    assert C.counterexample_energy("quad_b2", 0.7, 4.0, 2.0) == 0.0
    assert C.counterexample_energy("quad_b2", 1.0, 5.0, 2.0) == pytest.approx(-66 / 5, rel=1e-14)
    for eps in (1e-3, 1e-2):
        assert C.counterexample_energy("sub2_triple", eps, 3.0, 2.5) < 0
    for fam, eps, a, b in [("sub2_triple", 0.3, 2.5, 0.5), ("quad_b2", 0.4, 3.0, 2.0), ("sub2_triple", 2.0, 5.0, 1.5)]:
        mu = C.counterexample_measure(fam, eps)
        assert C.counterexample_energy(fam, eps, a, b) == pytest.approx(
            energy_direct(PotentialSpec.power(a, b, 1), mu), rel=1e-12, abs=1e-12)
    with pytest.raises(ValidationError):
        C.counterexample_measure("bogus", 1.0)


def test_scan_grid():
    g = C.scan_grid(4.0, 4.5, 5, "geometric", "lo", 1e-8)
    assert g[0] == 4.5 and g[-1] == pytest.approx(4 + 0.5e-8, rel=1e-12)
    assert np.all(np.diff(g) < 0)
    assert np.allclose(C.scan_grid(1, 2, 3), [1, 1.5, 2])
    with pytest.raises(ValidationError):
        C.scan_grid(2, 2, 5)
    with pytest.raises(ValidationError):
        C.scan_grid(1, 2, 0)


def test_scan_and_interval(monkeypatch):
    vals = C.scan_grid(1.5, 2.0, 8, "geometric", "hi", 1e-9)
    rows = C.scan("a", vals, 1.0, 1)
    iv = C.certified_interval(rows, "a")
    assert iv["label"] == "certified interval (non-sharp)"
    assert 1 < iv["lo"] <= iv["hi"] < 2
    # certified rows form a tail toward 2
    flags = [r["certified"] for r in rows]
    assert flags == sorted(flags)
    par = C.scan("a", vals, 1.0, 1, workers=2)
    assert par == rows
    monkeypatch.setenv("LICERT_THREADS", "3")
    assert C.default_workers() == 3
    with pytest.raises(ValidationError):
        C.scan("c", vals, 1.0, 1)
    with pytest.raises(ValidationError):
        C.scan("a", [], 1.0, 1)
    bad = C.scan("a", [5.0], 3.0, 1)
    assert bad[0]["regime"] == "unsupported" and not bad[0]["certified"]


def test_scan_log_axis():
    rows = C.scan("b", C.scan_grid(1.5, 2.0, 5), math.nan, 2, kind="logpower")
    assert rows[-1]["certified"] and rows[-1]["R_lic_lb"] == math.inf


@settings(max_examples=25, deadline=None)
@given(st.floats(0.05, 1.99), st.floats(-0.9, 1.9), st.sampled_from([1, 2, 3]))
def test_sub2_certificate_invariant(a, b, d):
    if not -d < b < a or a - b < 1e-3:
        return
    c = C.certify_sub2(a, b, d)
    assert c.certified == (c.R_lic_lb > c.R_star)
    assert c.R_lic_lb > 0 and c.R_star >= 8


def test_spot_check_every_regime():
    for p in (PotentialSpec.power(2.5, 1, 2), PotentialSpec.power(1.9999999, 1, 1),
              PotentialSpec.logpower(2, 2), PotentialSpec.power(4 + 1e-9, 0.5, 1)):
        cert = C.certify(p)
        sc = C.spot_check(cert, seeds=30)
        assert cert.certified and sc.passed and sc.to_json()["failures"] == 0
