"""Acceptance criteria, one test per criterion, tolerances pinned."""

import math
import time

import numpy as np
import pytest

from licert import certify as C
from licert import explicit, potentials, specfun, verify
from licert.flow import FlowConfig, minimize
from licert.potentials import PotentialSpec

DIMS = (1, 2, 3)


def _monotone(trace):
    return all(b <= a for a, b in zip(trace, trace[1:]))


# 1 -------------------------------------------------------------------------


def test_criterion_1_fourier_identity():
    t0 = time.perf_counter()
    res = verify.suite_fourier_identity(seeds=200, dims=DIMS)
    elapsed = time.perf_counter() - t0
    assert res.passed, res.table()
    assert len(res.checks) == 2 + 4 * len(DIMS)
    assert elapsed < 120


# 2 -------------------------------------------------------------------------


@pytest.mark.parametrize("d", DIMS)
def test_criterion_2_c_pf_structure(d):
    assert specfun.c_pf(-2, d) == 0.0 and specfun.c_pf(-4, d) == 0.0
    inner = lambda lo, hi: np.linspace(lo, hi, 52)[1:-1]
    assert all(specfun.c_pf(s, d) > 0 for s in inner(-2, d) if s != 0)
    assert all(specfun.c_pf(s, d) < 0 for s in inner(-4, -2))
    assert all(specfun.c_pf(s, d) > 0 for s in inner(-6, -4))
    residue = math.pi ** (d / 2) * 2 / (math.gamma(d / 2) * d)
    eps = 1e-6
    assert eps * specfun.c_pf(d - eps, d) == pytest.approx(residue, rel=1e-4)


# 3 -------------------------------------------------------------------------


def test_criterion_3_counterexamples():
    assert C.counterexample_energy("quad_b2", 1.0, 4.0, 2.0) == 0.0
    res = verify.suite_counterexamples()
    assert res.passed, res.table()


# 4 -------------------------------------------------------------------------


@pytest.fixture(scope="module")
def w2ln_runs():
    p = PotentialSpec.logpower(2, 2)
    return [minimize(p, FlowConfig(n_particles=400, max_iters=5000, seed=s)) for s in (0, 1)]


def test_criterion_4_w2ln_minimizer(w2ln_runs):
    R = explicit.w2ln_radius(2)
    for res in w2ln_runs:
        r = np.linalg.norm(res.measure.points, axis=1)
        assert (r.max() - r.min()) / r.mean() <= 5e-2
        assert abs(r.mean() - R) <= 0.02 * R
    dev, gap, _ = verify.shell_el(2, 2000)
    assert dev <= 5e-3
    assert gap >= -1e-3


# 5 -------------------------------------------------------------------------


def test_criterion_5a_fm_radius():
    assert explicit.fm_shell_radius(3.0, 3) == pytest.approx(0.625, abs=1e-12)


def test_criterion_5b_fm_field_constant_on_ball():
    # Faithful check of the stated criterion: the shell field should be constant on [0, R].
    # The closed-form field R^3/3 + 2Rr^2/3 + r^4/(15R) - (r^2+R^2)/2 is not constant there,
    # so this is expected to fail (see the decision ledger).
    p = PotentialSpec.power(3, 2, 3)
    R = explicit.fm_shell_radius(3.0, 3)
    vals = [explicit.sphere_average(p, R, r) for r in np.linspace(0.0, R, 26)]
    assert max(vals) - min(vals) <= 1e-6


# 6 -------------------------------------------------------------------------


def test_criterion_6_poincare():
    t0 = time.perf_counter()
    res = verify.suite_poincare(seeds=100, dims=DIMS)
    heis = verify.suite_heisenberg(seeds=100, dims=DIMS)
    elapsed = time.perf_counter() - t0
    assert res.passed, res.table()
    assert heis.passed, heis.table()
    assert elapsed < 180


# 7 -------------------------------------------------------------------------


@pytest.mark.parametrize("d", DIMS)
def test_criterion_7_eta_trend(d):
    a = np.array([4.05, 4.1, 4.25, 4.5])
    eta = np.array([C.eta_estimate(x, d) for x in a])
    # least squares in log space for eta = K (a - 4)
    K = math.exp(float(np.mean(np.log(eta / (a - 4)))))
    ratio = eta / (K * (a - 4))
    assert np.all(eta <= 2 * K * (a - 4))
    assert max(ratio.max(), 1 / ratio.min()) <= 2


# 8 -------------------------------------------------------------------------


SCAN_STEPS = 8


def _issued(rows):
    return [r for r in rows if r["certified"]]


@pytest.fixture(scope="module")
def scans():
    out = {}
    for d in (1, 2):
        for b in (0.5, 1.0):
            up = C.scan("a", C.scan_grid(b + 0.5 * (2 - b), 2.0, SCAN_STEPS, "geometric", "hi", 1e-9), b, d)
            down = C.scan("a", C.scan_grid(4.0, 4.5, SCAN_STEPS, "geometric", "lo", 1e-10), b, d)
            out[("sub2", d, b)] = up
            out[("above4", d, b)] = down
        out[("log", d)] = C.scan("b", C.scan_grid(1.5, 2.0, SCAN_STEPS), math.nan, d, kind="logpower")
    return out


def test_criterion_8_certified_intervals(scans):
    for d in (1, 2):
        for b in (0.5, 1.0):
            iv = C.certified_interval(scans[("sub2", d, b)], "a")
            assert iv is not None and b < iv["lo"] <= iv["hi"] < 2
            assert iv["label"] == "certified interval (non-sharp)"
            iv = C.certified_interval(scans[("above4", d, b)], "a")
            assert iv is not None and 4 < iv["lo"] <= iv["hi"] <= 4.5
        assert C.lic_lb_log(2.0, d) == math.inf
        vals = [C.lic_lb_log(x, d) for x in (1.5, 1.9, 1.95, 1.99)]
        assert all(math.isfinite(v) for v in vals)
        assert all(x < y for x, y in zip(vals, vals[1:]))


def test_criterion_8_spot_checks(scans):
    t0 = time.perf_counter()
    issued = 0
    for rows in scans.values():
        for r in _issued(rows):
            p = PotentialSpec.logpower(r["b"], r["d"]) if r["regime"] == "log" else PotentialSpec.power(r["a"], r["b"], r["d"])
            sc = C.spot_check(C.certify(p), seeds=200)
            assert sc.passed, (r, sc)
            issued += 1
    assert issued > 0
    assert time.perf_counter() - t0 < 600


# 9 -------------------------------------------------------------------------


GRAD_KERNELS = [PotentialSpec.power(a, b, d) for a, b in ((2, 1), (3, 2), (3.5, -0.5), (1.5, 0), (5, 2.5))
                for d in (1, 3)] + [PotentialSpec.logpower(2, 2), PotentialSpec.logpower(1.3, 3),
                                    PotentialSpec.repulsive(-0.5, 2), PotentialSpec.truncdiff(4.5, 2)]


@pytest.mark.parametrize("p", GRAD_KERNELS, ids=lambda p: p.describe())
def test_criterion_9_derivatives(p):
    f = lambda x: float(potentials.w_eval(p, x))
    g = lambda x: float(potentials.w_grad_radial(p, x))
    # Richardson-extrapolated central differences resolve the steep cutoff of Φ
    for r in np.linspace(0.1, 5, 25):
        h = 1e-2 * r
        fd1 = explicit.richardson_derivative(f, r, h)
        assert g(r) == pytest.approx(fd1, rel=1e-5, abs=1e-9)
        fd2 = explicit.richardson_derivative(g, r, h)
        lap = fd2 + (p.d - 1) * fd1 / r
        assert float(potentials.w_laplacian(p, r)) == pytest.approx(lap, rel=1e-5, abs=1e-9)


def test_criterion_9_flow_monotone(w2ln_runs):
    runs = list(w2ln_runs)
    runs.append(minimize(PotentialSpec.power(2, 1, 1), FlowConfig(n_particles=2, max_iters=500)))
    runs.append(minimize(PotentialSpec.power(3, 2, 2), FlowConfig(n_particles=100, max_iters=1000, seed=2)))
    for res in runs:
        assert _monotone(res.energy_trace)
