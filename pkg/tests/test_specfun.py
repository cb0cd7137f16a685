import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from licert import specfun as S
from licert.errors import DomainError

EULER = 0.57721566490153286


def mp_c_pf(s, d):
    s, d = mp.mpf(s), mp.mpf(d)
    return mp.pi ** (s - d / 2) * mp.gamma((d - s) / 2) / (mp.gamma(s / 2) * s)


def test_gamma_values():
    assert S.gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    assert S.gamma(5) == pytest.approx(24.0, rel=1e-15)
    assert S.gamma(-1.5) == pytest.approx(4 * math.sqrt(math.pi) / 3, rel=1e-14)
    # reflection oracle: Γ(z)Γ(1-z) = π / sin(πz)
    z = -1.5
    assert S.gamma(z) * S.gamma(1 - z) == pytest.approx(math.pi / math.sin(math.pi * z), rel=1e-13)


@pytest.mark.parametrize("s", [0, -1, -7])
def test_gamma_poles(s):
    with pytest.raises(DomainError):
        S.gamma(s)
    with pytest.raises(DomainError):
        S.digamma(s)


def test_digamma_values():
    assert S.digamma(1) == pytest.approx(-EULER, rel=1e-14)
    assert S.digamma(2) == pytest.approx(1 - EULER, rel=1e-14)
    assert S.digamma(0.5) == pytest.approx(-EULER - 2 * math.log(2), rel=1e-14)


@settings(max_examples=200, deadline=None)
@given(st.floats(-20, 20).filter(lambda s: min(abs(s - k) for k in range(-21, 1)) > 1e-3))
def test_gamma_recurrence(s):
    assert S.gamma(s + 1) == pytest.approx(s * S.gamma(s), rel=1e-11)


@settings(max_examples=100, deadline=None)
@given(st.floats(-9.9, 20).filter(lambda s: min(abs(s - k) for k in range(-10, 1)) > 0.05))
def test_digamma_is_log_gamma_derivative(s):
    h = 1e-5
    lg = lambda x: math.log(abs(S.gamma(x)))
    fd = (lg(s + h) - lg(s - h)) / (2 * h)
    assert S.digamma(s) == pytest.approx(fd, rel=1e-6, abs=1e-6)


def test_c_pf_examples():
    for d in (1, 2, 3, 5):
        assert S.c_pf(-2, d) == 0.0
        assert S.c_pf(-4, d) == 0.0
    assert S.c_pf(1, 3) == pytest.approx(1 / math.pi, rel=1e-14)
    assert S.c_pf(-3, 1) == pytest.approx(-1 / (4 * math.pi**4), rel=1e-13)
    assert S.c_pf(0, 2) == pytest.approx(1 / (2 * math.pi), rel=1e-14)


@settings(max_examples=100, deadline=None)
@given(st.floats(-5.9, 2.9).filter(lambda s: min(abs(s - k) for k in (-4, -2, 0)) > 1e-3),
       st.sampled_from([1, 2, 3]))
def test_c_pf_matches_mpmath(s, d):
    if s >= d:
        return
    assert S.c_pf(s, d) == pytest.approx(float(mp_c_pf(s, d)), rel=1e-12)


def test_c_pf_domain():
    with pytest.raises(DomainError):
        S.c_pf(3, 3)
    with pytest.raises(DomainError):
        S.c_pf(1, 0)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_c_pf_sign_pattern_and_pole(d):
    for s in np.linspace(-2, d, 52)[1:-1]:
        if s != 0:
            assert S.c_pf(s, d) > 0
    for s in np.linspace(-4, -2, 52)[1:-1]:
        assert S.c_pf(s, d) < 0
    for s in np.linspace(-6, -4, 52)[1:-1]:
        assert S.c_pf(s, d) > 0
    limit = math.pi ** (d / 2) * 2 / (math.gamma(d / 2) * d)
    eps = 1e-6
    assert eps * S.c_pf(d - eps, d) == pytest.approx(limit, rel=1e-4)


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_c_pf_tilde_at_minus_two(d):
    expected = math.pi ** (-2 - d / 2) * math.gamma((d + 2) / 2) / 4
    assert S.c_pf_tilde(-2, d) == pytest.approx(expected, rel=1e-12)
    assert S.c_pf_prime(-2, d) == pytest.approx(expected, rel=1e-12)
    if d == 2:
        assert S.c_pf_tilde(-2, 2) == pytest.approx(1 / (4 * math.pi**3), rel=1e-12)


@pytest.mark.parametrize("s,d", [(-1, 1), (-1.5, 2), (-3, 3), (0.5, 1), (1.2, 3), (-2.5, 2)])
def test_c_pf_tilde_finite_difference(s, d):
    h = 1e-5
    fd = (S.c_pf(s + h, d) - S.c_pf(s - h, d)) / (2 * h)
    assert S.c_pf_prime(s, d) == pytest.approx(fd, rel=1e-7)
    assert S.c_pf_tilde(s, d) == pytest.approx(S.c_pf(s, d) / s + fd, rel=1e-7)


def test_sphere_and_ball():
    assert S.sphere_area(1) == pytest.approx(2)
    assert S.sphere_area(2) == pytest.approx(2 * math.pi)
    assert S.sphere_area(3) == pytest.approx(4 * math.pi)
    assert S.ball_volume(3, 2) == pytest.approx(4 / 3 * math.pi * 8)


@pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
def test_sphere_mean_kernel(d):
    # oracle: direct quadrature of the angular average
    t = 3.7
    if d == 1:
        ref = math.cos(t)
    else:
        al = (d - 3) / 2
        num = integrate.quad(lambda u: math.cos(t * u) * (1 - u * u) ** al, -1, 1)[0]
        den = integrate.quad(lambda u: (1 - u * u) ** al, -1, 1)[0]
        ref = num / den
    assert float(S.sphere_mean_kernel(np.array([t]), d)[0]) == pytest.approx(ref, rel=1e-9)


def test_bump_eval_examples():
    assert float(S.bump_eval(S.BumpProfile("truncation", 3.0), np.array([0.0]))[0]) == 1.0
    assert float(S.bump_eval(S.BumpProfile("mollifier", 0.5), np.array([0.5]), d=2)[0]) == 0.0
    r = np.array([0.0, 0.5, 1.0, 1.5, 2.0, 3.0])
    v = S.truncation(r)
    assert v[0] == v[1] == v[2] == 1.0 and v[4] == v[5] == 0.0 and 0 < v[3] < 1


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_mollifier_unit_mass(d):
    f = lambda r: float(S.mollifier(np.array([r]), d)[0]) * r ** (d - 1) * S.sphere_area(d)
    assert integrate.quad(f, 0, 1, epsabs=1e-14, epsrel=1e-13, limit=200)[0] == pytest.approx(1, abs=1e-10)


def test_truncation_monotone_smooth():
    t = np.linspace(0, 2.5, 2001)
    v, dv, _ = S.truncation_derivatives(t)
    assert np.all(np.diff(v) <= 1e-15)
    assert np.all(dv <= 1e-15)
    fd = np.gradient(v, t)
    assert np.max(np.abs(fd - dv)) < 1e-4


@pytest.mark.parametrize("d", [1, 2, 3])
def test_bump_fourier_mollifier(d):
    p = S.BumpProfile("mollifier")
    assert float(S.bump_fourier(p, np.array([0.0]), d)[0]) == pytest.approx(1, abs=1e-10)
    assert float(S.bump_fourier(p, np.array([1 / (4 * math.pi)]), d)[0]) >= 0.5
    k = np.linspace(0, 30, 3001)
    v = S.bump_fourier(p, k, d)
    assert np.all(np.abs(v) <= 1 + 1e-10)
    assert np.max(np.abs(np.diff(v) / np.diff(k))) <= 2 * math.pi


def test_bump_fourier_quadrature_oracle_d1():
    N = 1 / integrate.quad(lambda x: math.exp(-1 / (1 - x * x)), -1, 1, epsabs=1e-15)[0]
    ref = mp.quad(lambda x: N * mp.exp(-1 / (1 - x * x)) * mp.cos(2 * mp.pi * 5 * x), [-1, 0, 1])
    v = float(S.bump_fourier(S.BumpProfile("mollifier"), np.array([5.0]), 1)[0])
    assert v == pytest.approx(float(ref), abs=1e-10)


def test_mollifier_fourier_scaling_and_tail():
    for d in (1, 2, 3):
        k = np.array([0.3, 2.0, 7.0])
        assert np.allclose(S.mollifier_fourier(k, d, 0.25), S.mollifier_fourier(0.25 * k, d), atol=1e-12)
        for kk in (20.0, 40.0, 60.0):
            ks = np.linspace(kk, kk + 20, 400)
            assert np.max(np.abs(S.mollifier_fourier_direct(ks, d))) <= S.mollifier_fourier_tail_bound(kk, d)


def test_truncation_fourier_zero_is_mass():
    for d in (1, 2, 3):
        mass = integrate.quad(lambda r: float(S.truncation(np.array([r]))[0]) * r ** (d - 1), 0, 2, points=[1])[0]
        assert float(S.truncation_fourier(np.array([0.0]), d)[0]) == pytest.approx(mass * S.sphere_area(d), rel=1e-9)
