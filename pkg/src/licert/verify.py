"""Verification suites: each returns a table of named checks with pass/fail."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import certify, explicit
from .energy import el_residual, energy_direct, energy_direct_mollified, energy_fourier
from .measures import SignedMeasure, random_test_measure
from .potentials import PotentialSpec
from .spectral import RadialSpectrum

FOURIER_KERNELS = ((3.0, 2.0), (2.0, 1.0), (1.0, 0.5), (3.5, -0.5))
POINCARE_SLACK = 1e-3
HEISENBERG_SLACK = 1e-3


@dataclass
class Check:
    name: str
    passed: bool
    value: float
    threshold: float
    detail: str = ""

    def to_json(self) -> dict[str, Any]:
        return {"name": self.name, "passed": self.passed, "value": self.value,
                "threshold": self.threshold, "detail": self.detail}


@dataclass
class SuiteResult:
    suite: str
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, value: float, threshold: float, detail: str = "") -> None:
        self.checks.append(Check(name, bool(passed), float(value), float(threshold), detail))

    def to_json(self) -> dict[str, Any]:
        return {"suite": self.suite, "passed": self.passed, "checks": self.checks}

    def table(self) -> str:
        lines = [f"suite {self.suite}: {'PASS' if self.passed else 'FAIL'}"]
        for c in self.checks:
            lines.append(f"  {'PASS' if c.passed else 'FAIL'}  {c.name}  value={c.value:.6g}  "
                         f"threshold={c.threshold:.6g}  {c.detail}".rstrip())
        return "\n".join(lines)


# ---------------------------------------------------------------------------


def anchor_measure() -> SignedMeasure:
    """``δ_{-1} - 2δ_0 + δ_1``, whose ``W_{3,2}`` energy is ``4/3``."""
    return SignedMeasure([[-1.0], [0.0], [1.0]], [1.0, -2.0, 1.0])


def fourier_identity_case(a: float, b: float, d: int, seed: int, eps: float = 0.2,
                          n_atoms: int = 6) -> tuple[float, float]:
    """Physical and Fourier energies of one seeded level-2 measure in ``B(0;2)``.

    Singular kernels use the mollified measure, with atoms kept ``0.5`` apart.
    """
    p = PotentialSpec.power(a, b, d)
    if p.singular_at_origin:
        mu = random_test_measure(2.0 - eps, n_atoms, "mass+center", seed, d, min_separation=0.5)
        return energy_direct_mollified(p, mu, eps), energy_fourier(p, mu, mollifier_eps=eps).value
    mu = random_test_measure(2.0, n_atoms, "mass+center", seed, d)
    return energy_direct(p, mu), energy_fourier(p, mu).value


def fourier_tolerance(e: float) -> float:
    return max(1e-5, 1e-4 * abs(e))


def suite_fourier_identity(seeds: int = 200, dims: tuple[int, ...] = (1, 2, 3)) -> SuiteResult:
    res = SuiteResult("fourier-identity")
    p = PotentialSpec.power(3, 2, 1)
    mu = anchor_measure()
    ed, ef = energy_direct(p, mu), energy_fourier(p, mu).value
    res.add("anchor W_{3,2} direct = 4/3", abs(ed - 4 / 3) <= 1e-12, abs(ed - 4 / 3), 1e-12)
    res.add("anchor W_{3,2} fourier = 4/3", abs(ef - 4 / 3) <= 1e-6, abs(ef - 4 / 3), 1e-6)
    for d in dims:
        smooth = [PotentialSpec.power(a, b, d) for a, b in FOURIER_KERNELS if b > 0]
        worst = {k: 0.0 for k in FOURIER_KERNELS}
        for seed in range(seeds):
            mu = random_test_measure(2.0, 6, "mass+center", seed, d)
            spec = RadialSpectrum(mu)
            for (a, b), p in zip([k for k in FOURIER_KERNELS if k[1] > 0], smooth):
                e1 = energy_direct(p, mu)
                e2 = energy_fourier(p, mu, spectrum=spec).value
                worst[(a, b)] = max(worst[(a, b)], abs(e1 - e2) / fourier_tolerance(e1))
            for a, b in FOURIER_KERNELS:
                if b <= 0:
                    e1, e2 = fourier_identity_case(a, b, d, seed)
                    worst[(a, b)] = max(worst[(a, b)], abs(e1 - e2) / fourier_tolerance(e1))
        for (a, b), w in worst.items():
            res.add(f"W_{{{a:g},{b:g}}} d={d}: max |direct-fourier|/tol over {seeds} seeds", w <= 1.0, w, 1.0)
    return res


# ---------------------------------------------------------------------------


def poincare_pairs(d: int) -> list[tuple[float, float]]:
    return [(d + 1.9, d + 1.0), (d + 1.0, 0.0), (2.0, 0.0)]


def mollified_test_spectrum(seed: int, d: int, R: float = 1.0, eps: float = 0.25,
                            vanish: str = "mass+center", n_atoms: int = 6) -> RadialSpectrum:
    """Spectrum of ``μ * φ_ε`` with ``μ`` random in ``B(0; R-ε)``, so ``supp ⊂ B̄(0;R)``."""
    mu = random_test_measure(R - eps, n_atoms, vanish, seed, d)
    return RadialSpectrum(mu, eps)


def suite_poincare(seeds: int = 100, dims: tuple[int, ...] = (1, 2, 3)) -> SuiteResult:
    res = SuiteResult("poincare")
    for d in dims:
        consts = {pair: certify.poincare_constant(*pair, d).C_result for pair in poincare_pairs(d)}
        log_consts = {beta: certify.poincare_constant_log(beta, d).C_result for beta in (d + 1.0, d + 1.9)}
        worst = {pair: -math.inf for pair in consts}
        worst_log = {beta: math.inf for beta in log_consts}
        heis = math.inf
        for seed in range(seeds):
            spec = mollified_test_spectrum(seed, d)
            for (alpha, beta), C in consts.items():
                lhs = spec.space_integral(-alpha)[0]
                rhs = C * spec.space_integral(-beta)[0]
                worst[(alpha, beta)] = max(worst[(alpha, beta)], lhs / rhs)
            for beta, C in log_consts.items():
                val = spec.space_integral(-beta, 1)[0] + C * spec.space_integral(-beta)[0]
                worst_log[beta] = min(worst_log[beta], val)
            heis = min(heis, spec.space_integral(2.0)[0] / (d * d / (64 * math.pi**2) * spec.space_integral(0.0)[0]))
        for (alpha, beta), w in worst.items():
            res.add(f"d={d} alpha={alpha:g} beta={beta:g}: max LHS/(C RHS)", w <= 1 + POINCARE_SLACK, w,
                    1 + POINCARE_SLACK, f"C={consts[(alpha, beta)]:.6g}")
        for beta, w in worst_log.items():
            res.add(f"d={d} log beta={beta:g}: min value", w >= -1e-6, w, -1e-6, f"C={log_consts[beta]:.6g}")
        res.add(f"d={d} Heisenberg min ratio", heis >= 1 - HEISENBERG_SLACK, heis, 1 - HEISENBERG_SLACK)
    return res


def suite_heisenberg(seeds: int = 50, dims: tuple[int, ...] = (1, 2, 3)) -> SuiteResult:
    res = SuiteResult("heisenberg")
    for d in dims:
        for vanish in ("none", "mass", "mass+center"):
            worst = math.inf
            for seed in range(seeds):
                spec = mollified_test_spectrum(seed, d, R=2.0, vanish=vanish)
                ratio = spec.space_integral(2.0)[0] / (d * d / (64 * math.pi**2) * spec.space_integral(0.0)[0])
                worst = min(worst, ratio)
            res.add(f"d={d} vanish={vanish}: min ratio", worst >= 1 - HEISENBERG_SLACK, worst,
                    1 - HEISENBERG_SLACK)
    return res


# ---------------------------------------------------------------------------


def brute_force_energy(mu: SignedMeasure, w: Callable[[float], float]) -> tuple[float, float]:
    """Off-diagonal double sum and the sum of absolute terms."""
    total, scale = 0.0, 0.0
    for i in range(mu.n):
        for j in range(mu.n):
            if i != j:
                t = 0.5 * mu.weights[i] * mu.weights[j] * w(float(np.linalg.norm(mu.points[i] - mu.points[j])))
                total += t
                scale += abs(t)
    return total, scale


def _power_w(a: float, b: float) -> Callable[[float], float]:
    return lambda r: r**a / a - (math.log(r) if b == 0 else r**b / b)


def counterexample_grid() -> list[tuple[str, float, float, float]]:
    out = []
    for eps in (1e-3, 0.01, 0.1, 0.5, 1.0, 3.0):
        for a, b in ((2.5, 0.5), (3.0, 2.5), (3.5, 1.0), (5.0, 2.2), (1.5, 0.5), (3.0, 0.0)):
            out.append(("sub2_triple", eps, a, b))
        for a in (2.5, 3.0, 4.0, 4.5, 5.0, 6.0):
            out.append(("quad_b2", eps, a, 2.0))
    return out


def suite_counterexamples() -> SuiteResult:
    res = SuiteResult("counterexamples")
    res.add("quad_b2 a=4 closed form is exactly 0", certify.counterexample_energy("quad_b2", 1.0, 4.0, 2.0) == 0.0,
            certify.counterexample_energy("quad_b2", 1.0, 4.0, 2.0), 0.0)
    v = certify.counterexample_energy("quad_b2", 1.0, 5.0, 2.0)
    res.add("quad_b2 a=5 eps=1 equals -66/5", abs(v + 66 / 5) <= 1e-12 * 66 / 5, v, -66 / 5)
    worst = 0.0
    for family, eps, a, b in counterexample_grid():
        mu = certify.counterexample_measure(family, eps)
        closed = certify.counterexample_energy(family, eps, a, b)
        brute, scale = brute_force_energy(mu, _power_w(a, b))
        worst = max(worst, abs(closed - brute) / max(scale, 1e-300))
        if b > 0:
            direct = energy_direct(PotentialSpec.power(a, b, 1), mu)
            worst = max(worst, abs(closed - direct) / max(scale, 1e-300))
    res.add("closed forms vs brute force and energy_direct (relative to term size)", worst <= 1e-12, worst, 1e-12)
    neg = [certify.counterexample_energy("sub2_triple", e, 3.0, 2.5) for e in (1e-3, 1e-2, 0.1)]
    res.add("sub2_triple a=3 b=2.5 negative for small eps", max(neg) < 0, max(neg), 0.0)
    neg = [certify.counterexample_energy("quad_b2", 1.0, a, 2.0) for a in (4.1, 5.0, 8.0)]
    res.add("quad_b2 negative for a>4", max(neg) < 0, max(neg), 0.0)
    return res


# ---------------------------------------------------------------------------


def radial_probe(R: float, d: int, count: int = 50, span: float = 2.5, gap: float = 0.05) -> np.ndarray:
    """Points on the first axis at radii in ``[0, span R]`` away from the shell."""
    r = np.linspace(0.0, span * R, count + 10)
    r = r[np.abs(r - R) > gap * R][:count]
    pts = np.zeros((r.size, d))
    pts[:, 0] = r
    return pts


def shell_el(d: int, n: int) -> tuple[float, float, float]:
    """``(on-support dev/|C0|, off-support gap/|C0|, C0)`` for the sampled ``W_{2,ln}`` shell."""
    m = explicit.w2ln_minimizer(d)
    mu = explicit.sample_explicit(m, n)
    rep = el_residual(PotentialSpec.logpower(2, d), mu, radial_probe(m.radius, d))
    return rep.on_support_max_dev / abs(rep.C0), rep.off_support_min_gap / abs(rep.C0), rep.C0


def suite_explicit_el() -> SuiteResult:
    res = SuiteResult("explicit-el")
    dev, gap, _ = shell_el(2, 2000)
    res.add("W_{2,ln} shell d=2 n=2000: on-support dev/|C0|", dev <= 5e-3, dev, 5e-3)
    res.add("W_{2,ln} shell d=2 n=2000: off-support gap/|C0|", gap >= -1e-3, gap, -1e-3)
    dev, gap, _ = shell_el(3, 2000)
    res.add("W_{2,ln} shell d=3 n=2000: on-support dev/|C0|", dev <= 5e-3, dev, 5e-3)
    res.add("W_{2,ln} shell d=3 n=2000: off-support gap/|C0|", gap >= -1e-3, gap, -1e-3)
    m = explicit.w2ln_minimizer(1)
    mu = explicit.sample_explicit(m, 400)
    rep = el_residual(PotentialSpec.logpower(2, 1), mu, radial_probe(m.radius, 1)[:, :1])
    res.add("W_{2,ln} density d=1 n=400: on-support dev/|C0|", rep.on_support_max_dev <= 5e-3 * abs(rep.C0),
            rep.on_support_max_dev / abs(rep.C0), 5e-3)
    res.add("W_{2,ln} density d=1: off-support gap/|C0|", rep.off_support_min_gap >= -1e-3 * abs(rep.C0),
            rep.off_support_min_gap / abs(rep.C0), -1e-3)
    m = explicit.frank_minimizer(2.5)
    mu = explicit.sample_explicit(m, 400)
    rep = el_residual(PotentialSpec.power(2.5, 2, 1), mu, radial_probe(m.radius, 1)[:, :1])
    res.add("Frank a=2.5 density n=400: on-support dev/|C0|", rep.on_support_max_dev <= 5e-3 * abs(rep.C0),
            rep.on_support_max_dev / abs(rep.C0), 5e-3)
    # the continuum shell field is stationary in r at the Frank–Matzke radius
    p = PotentialSpec.power(3, 2, 3)
    R = explicit.fm_shell_radius(3.0, 3)
    h = 1e-4 * R
    slope = (explicit.sphere_average(p, R, R + h) - explicit.sphere_average(p, R, R - h)) / (2 * h)
    res.add("FM shell a=3 d=3: radial slope of field at R", abs(slope) <= 1e-6, abs(slope), 1e-6)
    f_R = explicit.sphere_average(p, R, R)
    lo = min(explicit.sphere_average(p, R, r) - f_R for r in np.linspace(0, 3 * R, 61))
    res.add("FM shell a=3 d=3: field minus field at R", lo >= -1e-12, lo, -1e-12)
    return res


SUITES: dict[str, Callable[[], SuiteResult]] = {
    "fourier-identity": suite_fourier_identity,
    "poincare": suite_poincare,
    "heisenberg": suite_heisenberg,
    "counterexamples": suite_counterexamples,
    "explicit-el": suite_explicit_el,
}


def run_suite(name: str, **kw: Any) -> SuiteResult:
    if name not in SUITES:
        from .errors import ValidationError

        raise ValidationError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return SUITES[name](**kw)
