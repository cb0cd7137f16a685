import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from licert import potentials as P
from licert import specfun as S
from licert.errors import ValidationError
from licert.potentials import PotentialSpec

KERNELS = [
    PotentialSpec.power(2, 1, 1), PotentialSpec.power(3, 2, 3), PotentialSpec.power(3.5, -0.5, 2),
    PotentialSpec.power(1.5, 0, 2), PotentialSpec.power(5, 2.5, 1), PotentialSpec.logpower(2, 3),
    PotentialSpec.logpower(1.3, 1), PotentialSpec.logpower(-0.5, 2), PotentialSpec.repulsive(1.5, 2),
    PotentialSpec.repulsive(0, 3), PotentialSpec.truncdiff(4.5, 2),
]


def test_w_eval_examples():
    assert P.w_eval(PotentialSpec.power(2, 1, 1), 1.0) == pytest.approx(-0.5)
    assert P.w_eval(PotentialSpec.logpower(2, 1), 1.0) == 0.0
    assert P.w_eval(PotentialSpec.power(4, -1, 2), 0.0) == math.inf
    assert P.w_eval(PotentialSpec.power(3, 0, 1), 0.0) == math.inf
    assert P.w_eval(PotentialSpec.power(3, 2, 1), 0.0) == 0.0
    assert P.w_eval(PotentialSpec.power(3, 0, 1), math.e) == pytest.approx(math.e**3 / 3 - 1)


def test_grad_examples():
    assert P.w_grad_radial(PotentialSpec.power(2, 1, 1), 2.0) == pytest.approx(1.0)
    assert P.w_grad_radial(PotentialSpec.logpower(2, 1), 1.0) == pytest.approx(0.5)
    assert P.w_grad_radial(PotentialSpec.power(3, 2, 1), 1.0) == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("b,d", [(1.5, 2), (-0.5, 3), (0.7, 1), (2.0, 4)])
def test_repulsive_laplacian(b, d):
    r = np.array([0.3, 1.0, 2.7])
    assert np.allclose(P.w_laplacian(PotentialSpec.repulsive(b, d), r), -(b - 2 + d) * r ** (b - 2), rtol=1e-13)


def test_quadratic_attraction_laplacian():
    # Δ(r²/2) = d, so the W_{2,b} Laplacian is d minus the repulsive part
    for d in (1, 2, 3):
        for b in (0.5, 1.0, 1.8):
            r = np.array([0.5, 1.5])
            lap = P.w_laplacian(PotentialSpec.power(2, b, d), r)
            assert np.allclose(lap, d - (b - 2 + d) * r ** (b - 2), rtol=1e-13)


def test_logpower_laplacian_d3_at_one():
    p = PotentialSpec.logpower(2, 3)
    h = 1e-4
    f = lambda r: float(P.w_eval(p, r))
    fd2 = (f(1 + h) - 2 * f(1) + f(1 - h)) / h**2
    fd1 = (f(1 + h) - f(1 - h)) / (2 * h)
    assert P.w_laplacian(p, 1.0) == pytest.approx(fd2 + 2 * fd1, rel=1e-6)
    assert P.w_laplacian(p, 1.0) == pytest.approx(2.5, rel=1e-12)  # (b-2+d)... gives 5/2 at r=1


@pytest.mark.parametrize("p", KERNELS, ids=lambda p: p.describe())
def test_derivatives_match_finite_differences(p):
    for r in np.linspace(0.1, 5, 23):
        h = 1e-5 * r
        f = lambda x: float(P.w_eval(p, x))
        fd1 = (f(r + h) - f(r - h)) / (2 * h)
        g = float(P.w_grad_radial(p, r))
        assert g == pytest.approx(fd1, rel=1e-6, abs=1e-7 * max(1, abs(f(r))))
        h2 = 1e-4 * r
        gp = (float(P.w_grad_radial(p, r + h2)) - float(P.w_grad_radial(p, r - h2))) / (2 * h2)
        lap = float(P.w_laplacian(p, r))
        ref = gp + (p.d - 1) * g / r
        assert lap == pytest.approx(ref, rel=1e-5, abs=1e-6)
        assert float(P.w_second_radial(p, r)) == pytest.approx(gp, rel=1e-5, abs=1e-6)


def test_w_hat_examples():
    p = PotentialSpec.power(3, 2, 1)
    xi = np.array([0.3, 1.0, 4.0])
    assert np.allclose(P.w_hat(p, xi), xi**-4 / (4 * math.pi**4), rtol=1e-12)
    for d in (1, 2, 3):
        assert P.w_hat(PotentialSpec.logpower(2, d), 1.0) == pytest.approx(
            math.pi ** (-2 - d / 2) * math.gamma((d + 2) / 2) / 4, rel=1e-12)
    assert np.allclose(P.w_hat(PotentialSpec.repulsive(0, 2), xi), xi**-2 / (2 * math.pi), rtol=1e-12)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_w_hat_sign_structure(d):
    xi = np.logspace(-3, 3, 200)
    assert np.all(P.w_hat(PotentialSpec.logpower(2, d), xi) > 0)
    for a in (2.0, 2.5, 3.0, 3.9):
        for b in (-d + 0.2, 0.0, 0.5, 1.0, 2.0):
            if b < a:
                assert np.all(np.asarray(P.w_hat(PotentialSpec.power(a, b, d), xi)) >= 0)


def test_w_hat_matches_c_pf():
    a, b, d = 3.5, 0.7, 2
    xi = 1.7
    ref = S.c_pf(-b, d) * xi ** (-d - b) - S.c_pf(-a, d) * xi ** (-d - a)
    assert P.w_hat(PotentialSpec.power(a, b, d), xi) == pytest.approx(ref, rel=1e-13)


def test_validation():
    with pytest.raises(ValidationError):
        PotentialSpec.power(1, 2, 1)
    with pytest.raises(ValidationError):
        PotentialSpec.power(3, -1, 1)
    with pytest.raises(ValidationError):
        PotentialSpec.logpower(0, 2)
    with pytest.raises(ValidationError):
        PotentialSpec.truncdiff(3.5, 1)
    with pytest.raises(ValidationError):
        PotentialSpec("power", 0, 3, 2)
    with pytest.raises(ValidationError):
        PotentialSpec.from_json({"kind": "power"})


@settings(max_examples=50, deadline=None)
@given(st.floats(0.2, 6), st.floats(-0.9, 5.5), st.sampled_from([1, 2, 3]))
def test_json_roundtrip(a, b, d):
    if not -d < b < a:
        return
    p = PotentialSpec.power(a, b, d)
    assert PotentialSpec.from_json(p.to_json()) == p
