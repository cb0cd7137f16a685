"""Uniqueness certificates: size bounds, Poincaré constants, LIC-radius lower bounds.

A certificate is issued when a computable lower bound on the LIC radius
exceeds a computable upper bound on the minimizer size. The method is
one-sided, so a failed certificate never asserts non-uniqueness.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Any, Sequence

import numpy as np
from scipy import integrate, optimize, special

from . import specfun
from .energy import energy_direct, energy_direct_mollified, energy_fourier
from .errors import DomainError, UnsupportedError, ValidationError
from .measures import SignedMeasure, random_test_measure
from .potentials import PotentialSpec

INTERVAL_LABEL = "certified interval (non-sharp)"
ETA_SAFETY = 1.5


def _clean(obj: dict[str, Any]) -> dict[str, Any]:
    return {k: (float(v) if isinstance(v, (np.floating,)) else v) for k, v in obj.items()}


# ---------------------------------------------------------------------------
# size bounds


@dataclass(frozen=True)
class SizeBound:
    """Upper bound ``R_star`` on the support radius of every centered minimizer.

    ``kind`` is ``"power"`` or ``"log"``. For the log family ``a0`` holds
    ``b0`` and ``r_star_small`` holds the threshold ``e``.
    """

    kind: str
    b: float
    a0: float
    d: int
    r_star_small: float
    C1: float
    C2: float
    C3: float | None
    C4: float
    R1: float
    R_star: float

    def to_json(self) -> dict[str, Any]:
        return _clean(asdict(self))


def ball_distance_density(r, d: int, radius: float = 0.5) -> np.ndarray:
    """Density of ``|X - Y|`` for independent uniform points of ``B(0; radius)``."""
    r = np.asarray(r, dtype=float)
    u = r / (2 * radius)
    inside = (u >= 0) & (u <= 1)
    x = np.clip(1 - u * u, 0.0, 1.0)
    val = d * u ** (d - 1) / (2 * radius) * 2**d * special.betainc((d + 1) / 2, 0.5, x)
    return np.where(inside, val, 0.0)


def ball_distance_moment(s: float, d: int, radius: float = 0.5, log: bool = False) -> float:
    """``E|X-Y|^s`` (or ``E ln|X-Y|`` when ``log``) for uniform points of a ball, ``s > -d``."""
    if s <= -d:
        raise DomainError("distance moment needs s > -d")
    f = lambda u: d * 2**d * special.betainc((d + 1) / 2, 0.5, max(1 - u * u, 0.0))
    scale = 2 * radius
    if log:
        # ln r = ln(2 radius) + ln u
        plain, _ = integrate.quad(f, 0, 1, weight="alg", wvar=(d - 1, 0), epsabs=0, epsrel=1e-13)
        logu, _ = integrate.quad(f, 0, 1, weight="alg-loga", wvar=(d - 1, 0), epsabs=0, epsrel=1e-13)
        return math.log(scale) * plain + logu
    val, _ = integrate.quad(f, 0, 1, weight="alg", wvar=(d - 1 + s, 0), epsabs=0, epsrel=1e-13)
    return scale**s * val


def c3_constant(b: float, a0: float) -> float:
    """``sup_{a ≥ a0} 2^{(b-a)/2} a``; ``a 2^{-a/2}`` peaks at ``a = 2/ln 2``."""
    a = max(a0, 2 / math.log(2))
    return 2 ** ((b - a) / 2) * a


@lru_cache(maxsize=None)
def c4_constant() -> float:
    """``min_{a>0} 2^{a/2}/(2a)`` by bounded scalar minimization on ``(0, 20)``."""
    res = optimize.minimize_scalar(lambda a: 2 ** (a / 2) / (2 * a), bounds=(1e-6, 20.0),
                                   method="bounded", options={"xatol": 1e-12})
    return float(res.fun)


def _r_star_log_repulsion(a0: float) -> float:
    """Smallest ``r ≥ 2`` past which ``a t^{-a} ln t ≤ 1/2`` for all ``a ≥ a0`` and ``t ≥ r``.

    Uses ``a t^{-a} ln t ≤ C3 t^{-a0/2} ln t`` for ``t ≥ 2`` with ``C3`` at ``b = 0``.
    """
    c3 = c3_constant(0.0, a0)
    g = lambda t: c3 * t ** (-a0 / 2) * math.log(t) - 0.5
    peak = math.exp(2 / a0)  # t^{-a0/2} ln t increases up to here, then decreases
    if g(peak) <= 0:
        return 2.0
    hi = peak * 2
    while g(hi) > 0:
        hi *= 2
    return max(2.0, float(optimize.brentq(g, peak, hi, xtol=1e-14, rtol=1e-14)))


def _pow(x: float, e: float) -> float:
    """``x**e`` for ``x > 0`` with overflow mapped to ``inf``."""
    y = e * math.log(x)
    return math.inf if y > 709.0 else math.exp(y)


def size_bound(b: float, a0: float, d: int) -> SizeBound:
    """Minimizer-size bound valid for every ``W_{a,b}`` with ``a ≥ a0``."""
    if int(d) != d or d < 1:
        raise DomainError("dimension must be a positive integer")
    if not b > -d:
        raise DomainError(f"size bound needs b > -d, got b={b}")
    if not a0 > max(b, 0.0):
        raise DomainError(f"size bound needs a0 > max(b, 0), got a0={a0}, b={b}")
    vol = specfun.ball_volume(d) * 0.5**d
    if b == 0:
        C1 = -0.5 * ball_distance_moment(0.0, d, log=True)
    else:
        C1 = -ball_distance_moment(b, d) / (2 * b)
    C2 = 1.0 / (2 * a0 * vol * vol) + C1
    C3 = c3_constant(b, a0)
    if b > 0:
        r_small = max(2.0, _pow(b / (2 * C3), 2 / (b - a0)))
    elif b == 0:
        r_small = _r_star_log_repulsion(a0)
    else:
        r_small = 2.0
    C4 = c4_constant()
    m = min(-1.0 / b, 0.0) if b != 0 else 0.0
    base = (2 / C4) * (2 * C2 - m + 1)
    R1 = max(r_small, _pow(base, 2 / a0)) if base > 0 else r_small
    return SizeBound("power", b, a0, int(d), r_small, C1, C2, C3, C4, R1, 4 * R1)


def size_bound_log(b0: float, d: int) -> SizeBound:
    """Minimizer-size bound valid for every ``W_{b,ln}`` with ``b ≥ b0``."""
    if not b0 > 0:
        raise DomainError("size_bound_log needs b0 > 0")
    C4 = c4_constant()
    R1 = max(math.e, _pow((1 / C4) * (math.exp(-1) / b0**2 + 1), 2 / b0))
    return SizeBound("log", b0, b0, int(d), math.e, 0.0, 0.0, None, C4, R1, 4 * R1)


# ---------------------------------------------------------------------------
# Poincaré-type constants


@dataclass(frozen=True)
class PoincareConstants:
    alpha: float | None
    beta: float
    d: int
    C1: float
    C2: float
    lam: float
    C_result: float
    log: bool = False

    def to_json(self) -> dict[str, Any]:
        out = _clean(asdict(self))
        out["lambda"] = out.pop("lam")
        return out


def _tail_order(beta: float) -> int:
    # |ξ|^{2+β} |φ̂|² must decay, and |φ̂(k)| ≤ M_m (2πk)^{-2m}
    return max(3, int(math.floor((2 + beta) / 4)) + 1)


@lru_cache(maxsize=None)
def weighted_phi_hat_sup(beta: float, d: int) -> tuple[float, float]:
    """``sup_k k^{2+β} φ̂(k)²`` and its maximizer.

    The cached grid on ``[0, 60]`` locates local maxima, each refined by a
    bounded scalar search on direct quadrature. Beyond the grid the Laplacian
    decay bound is used, which is decreasing there.
    """
    kmax = specfun.FT_GRID_MAX
    k = np.linspace(0.0, kmax, 12001)
    g = k ** (2 + beta) * specfun.mollifier_fourier(k, d) ** 2
    peaks = [i for i in range(1, k.size - 1) if g[i] >= g[i - 1] and g[i] >= g[i + 1]]
    peaks = sorted(peaks, key=lambda i: -g[i])[:6]
    best, arg = float(np.max(g)), float(k[int(np.argmax(g))])
    h = k[1] - k[0]
    f = lambda x: -(x ** (2 + beta)) * float(specfun.mollifier_fourier_direct(np.array([x]), d)[0]) ** 2
    for i in peaks:
        res = optimize.minimize_scalar(f, bounds=(max(k[i] - h, 0.0), min(k[i] + h, kmax)),
                                       method="bounded", options={"xatol": 1e-10})
        if -res.fun > best:
            best, arg = float(-res.fun), float(res.x)
    m = _tail_order(beta)
    tail = kmax ** (2 + beta) * specfun.mollifier_fourier_tail_bound(kmax, d, m) ** 2
    if tail > best:
        best, arg = tail, kmax
    return best, arg


def _c2_poincare(beta: float, d: int) -> float:
    # tiny relative inflation covers the refinement tolerance
    return 2.0 * weighted_phi_hat_sup(beta, d)[0] * (1 + 1e-9)


def _geometry_factor(d: int) -> float:
    return 4 * (8 * math.pi**2 * d) ** 2 * specfun.ball_volume(d) * 2**d * specfun.sphere_area(d)


def poincare_constant(alpha: float, beta: float, d: int) -> PoincareConstants:
    """``C_{α,β}`` with ``∫|ξ|^{-α}|μ̂|² ≤ C R^{α-β} ∫|ξ|^{-β}|μ̂|²`` on level-2 measures in ``B̄(0;R)``."""
    if not 0 <= beta < alpha < d + 4:
        raise DomainError(f"poincare_constant needs 0 <= beta < alpha < d+4, got {alpha}, {beta}, d={d}")
    C1 = _geometry_factor(d) / (4 - alpha + d)
    C2 = _c2_poincare(beta, d)
    gap = alpha - beta
    lam = min(1 / (2 * (4 * math.pi) ** gap),
              (64 * math.pi**2 * C1 * C2 / d**2) ** (-gap / (4 - beta + d))
              * 2 ** (-(4 - alpha + d) / (4 - beta + d)))
    return PoincareConstants(alpha, beta, int(d), C1, C2, lam, 1 / lam)


def poincare_constant_log(beta: float, d: int) -> PoincareConstants:
    """``C_β`` with ``∫|ξ|^{-β} ln|ξ| |μ̂|² + (C_β + ln R) ∫|ξ|^{-β}|μ̂|² ≥ 0``."""
    if not 0 <= beta < d + 4:
        raise DomainError(f"poincare_constant_log needs 0 <= beta < d+4, got {beta}")
    q = 4 - beta + d
    C1 = _geometry_factor(d) * (1 / q + 1 / (q * q * math.log(4 * math.pi)))
    C2 = _c2_poincare(beta, d)
    lam = max(2 * math.log(4 * math.pi), (2 / q) * math.log(32 * math.pi**2 * C1 * C2 / d**2))
    return PoincareConstants(None, beta, int(d), C1, C2, lam, lam, log=True)


# ---------------------------------------------------------------------------
# LIC-radius lower bounds


def lic_lb_sub2(a: float, b: float, d: int) -> float:
    """Lower bound on the LIC radius of ``W_{a,b}``, ``-d < b < a < 2``."""
    if not -d < b < a < 2:
        raise DomainError(f"lic_lb_sub2 needs -d < b < a < 2, got a={a}, b={b}")
    ca, cb = specfun.c_pf(-a, d), specfun.c_pf(-b, d)
    if not (ca > 0 and cb > 0):
        raise DomainError("c_PF(-a) and c_PF(-b) must be positive")
    C = poincare_constant(d + a, d + b, d).C_result
    return (cb / (C * ca)) ** (1 / (a - b))


def lic_lb_log(b: float, d: int) -> float:
    """Lower bound on the LIC radius of ``W_{b,ln}``; ``inf`` at ``b = 2``, ``0.0`` if not certifiable."""
    if not 0 < b <= 2:
        raise DomainError(f"lic_lb_log needs 0 < b <= 2, got b={b}")
    if b == 2:
        return math.inf
    c, ct = specfun.c_pf(-b, d), specfun.c_pf_tilde(-b, d)
    if ct <= 0 or c <= 0:
        return 0.0
    Cb = poincare_constant_log(d + b, d).C_result
    x = ct / c - Cb
    return math.inf if x > 709.0 else math.exp(x)  # beyond float range


# ---------------------------------------------------------------------------
# truncated-kernel Fourier bound


def _truncated_profile(r: np.ndarray, a: float) -> np.ndarray:
    # r^a - r^4 = r^4 expm1((a-4) ln r), accurate for a near 4
    with np.errstate(divide="ignore", invalid="ignore"):
        v = r**4 * np.expm1((a - 4) * np.log(r))
    return np.where(r > 0, v, 0.0) * specfun.truncation(r)


@lru_cache(maxsize=None)
def _profile_nodes() -> tuple[np.ndarray, np.ndarray]:
    edges = np.concatenate([2.0 ** -np.arange(24, 4, -1), np.arange(1, 33) / 16])
    edges = np.concatenate([[0.0], edges])
    return specfun.composite_gauss_legendre(edges, 24)


def truncated_kernel_fourier(k, a: float, d: int) -> np.ndarray:
    """``F[(|x|^a - |x|^4) Φ](k)`` by radial quadrature on a graded mesh."""
    r, w = _profile_nodes()
    k = np.atleast_1d(np.asarray(k, dtype=float))
    base = specfun.sphere_area(d) * w * _truncated_profile(r, a) * r ** (d - 1)
    return specfun.sphere_mean_kernel(2 * math.pi * np.outer(k, r), d) @ base


@dataclass(frozen=True)
class EtaEstimate:
    a: float
    d: int
    eta_hat: float
    grid_max: float
    grid_argmax: float
    asymptote: float
    xi_max: float
    safety: float

    def to_json(self) -> dict[str, Any]:
        return _clean(asdict(self))


def eta_profile(a: float, d: int, xi_max: float = 24.0, n_grid: int = 961,
                safety: float = ETA_SAFETY) -> EtaEstimate:
    if not a > 4:
        raise DomainError("eta_estimate needs a > 4")
    k = np.linspace(0.0, xi_max, n_grid)
    vals = (1 + k) ** (d + a) * np.abs(truncated_kernel_fourier(k, a, d))
    i = int(np.argmax(vals))
    # large-|ξ| limit of (1+|ξ|)^{d+a} |F| comes from the |x|^a singularity
    asym = a * abs(specfun.c_pf(-a, d))
    return EtaEstimate(a, int(d), safety * max(float(vals[i]), asym), float(vals[i]), float(k[i]),
                       asym, xi_max, safety)


def eta_estimate(a: float, d: int, xi_max: float = 24.0, n_grid: int = 961,
                 safety: float = ETA_SAFETY) -> float:
    """Numerical estimate of ``η_a`` with ``|F[(|x|^a-|x|^4)Φ](ξ)| ≤ η_a (1+|ξ|)^{-d-a}``.

    An estimate, not a proof: the grid maximum and the asymptotic constant are
    combined and inflated by ``safety``.
    """
    return eta_profile(a, d, xi_max, n_grid, safety).eta_hat


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class Certificate:
    potential: PotentialSpec
    regime: str
    R_star: float
    R_lic_lb: float
    certified: bool
    constants: dict[str, Any] = field(default_factory=dict)
    flags: dict[str, Any] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict[str, Any]:
        return {
            "potential": self.potential.to_json(),
            "regime": self.regime,
            "R_star": self.R_star,
            "R_lic_lb": self.R_lic_lb,
            "certified": self.certified,
            "verdict": "unique up to translation" if self.certified else "not certified by this method",
            "constants": self.constants,
            "flags": self.flags,
            "notes": self.notes,
        }


def certify_sub2(a: float, b: float, d: int) -> Certificate:
    sb = size_bound(b, a, d)
    pc = poincare_constant(d + a, d + b, d)
    R_lb = lic_lb_sub2(a, b, d)
    consts = {"size_bound": sb, "poincare": pc,
              "c_pf": {"c_pf_minus_a": specfun.c_pf(-a, d), "c_pf_minus_b": specfun.c_pf(-b, d)}}
    notes = ["Poincare constant is computable but not sharp, so R_lic_lb is only a lower bound"]
    return Certificate(PotentialSpec.power(a, b, d), "sub2", sb.R_star, R_lb, R_lb > sb.R_star,
                       consts, {"numerically_estimated_eta": False}, notes)


def certify_log(b: float, d: int) -> Certificate:
    p = PotentialSpec.logpower(b, d)
    sb = size_bound_log(b, d)
    if b == 2:
        consts = {"size_bound": sb, "c_pf": {"c_pf_minus_b": 0.0,
                                             "c_pf_tilde_minus_b": specfun.c_pf_tilde(-2.0, d)}}
        return Certificate(p, "log", sb.R_star, math.inf, True, consts,
                           {"numerically_estimated_eta": False}, ["kernel is LIC (R_lic_lb = inf)"])
    pc = poincare_constant_log(d + b, d)
    R_lb = lic_lb_log(b, d)
    consts = {"size_bound": sb, "poincare": pc,
              "c_pf": {"c_pf_minus_b": specfun.c_pf(-b, d), "c_pf_tilde_minus_b": specfun.c_pf_tilde(-b, d)}}
    notes = []
    if R_lb == 0.0:
        notes.append("c_PF tilde is not positive here: not certifiable by this method")
    return Certificate(p, "log", sb.R_star, R_lb, R_lb > sb.R_star, consts,
                       {"numerically_estimated_eta": False}, notes)


def certify_above4(a: float, b: float, d: int, safety: float = ETA_SAFETY) -> Certificate:
    """Certificate for ``a > 4`` through the truncated-kernel bound ``η̂_a``."""
    if not (a > 4 and -d < b < 2):
        raise DomainError(f"certify_above4 needs a > 4 and -d < b < 2, got a={a}, b={b}")
    sb = size_bound(b, 4.0, d)
    eta = eta_profile(a, d, safety=safety)
    cb = specfun.c_pf(-b, d)
    # ((2R)^{a-b}/a) η ≤ c_PF(-b)/2  ⇔  R ≤ R_lic_lb
    R_lb = math.inf if eta.eta_hat == 0 else 0.5 * (a * cb / (2 * eta.eta_hat)) ** (1 / (a - b))
    R = sb.R_star + 1
    margin = (2 * R) ** (a - b) / a * eta.eta_hat <= 0.5 * cb
    consts = {"size_bound": sb, "eta": eta, "eta_hat": eta.eta_hat, "R_test": R,
              "c_pf": {"c_pf_minus_b": cb}}
    flags = {"numerically_estimated_eta": True, "margin_test_at_R_star_plus_1": bool(margin)}
    notes = ["eta_hat is a numerical estimate, not a rigorous bound"]
    return Certificate(PotentialSpec.power(a, b, d), "above4", sb.R_star, R_lb, R_lb > sb.R_star,
                       consts, flags, notes)


def certify(p: PotentialSpec) -> Certificate:
    """Dispatch to the regime that covers ``p``; raises :class:`UnsupportedError` otherwise."""
    d = p.d
    if p.kind == "power":
        a, b = p.a, p.b
        if 2 <= a <= 4 and b <= 2:
            sb = size_bound(b, a, d)
            return Certificate(p, "known_lic", sb.R_star, math.inf, True, {"size_bound": sb},
                               {"numerically_estimated_eta": False},
                               ["LIC holds for -d < b <= 2 and 2 <= a <= 4"])
        if 0 < a < 2:
            return certify_sub2(a, b, d)
        if a > 4 and b < 2:
            return certify_above4(a, b, d)
        raise UnsupportedError(f"no certification method for power kernel a={a}, b={b}")
    if p.kind == "logpower" and 0 < p.b <= 2:
        return certify_log(p.b, d)
    raise UnsupportedError(f"no certification method for {p.describe()}")


# ---------------------------------------------------------------------------
# counterexamples and spot checks


def counterexample_measure(family: str, eps: float) -> SignedMeasure:
    if family == "sub2_triple":
        return SignedMeasure([[-eps], [0.0], [eps]], [1.0, -2.0, 1.0])
    if family == "quad_b2":
        return SignedMeasure([[0.0], [eps], [2 * eps], [3 * eps]], [1.0, -3.0, 3.0, -1.0])
    raise ValidationError(f"unknown counterexample family {family!r}")


def counterexample_energy(family: str, eps: float, a: float, b: float) -> float:
    """Closed-form energy of the one-dimensional counterexample measures."""
    if not eps > 0:
        raise DomainError("eps must be positive")
    if family == "sub2_triple":
        if not 0 <= b < a:
            raise DomainError("sub2_triple needs 0 <= b < a")
        rep = math.log(2) - 3 * math.log(eps) if b == 0 else (2**b - 4) / b * eps**b
        return -rep + (2**a - 4) / a * eps**a
    if family == "quad_b2":
        if b != 2 or not a > 2:
            raise DomainError("quad_b2 needs b = 2 and a > 2")
        return eps**a / a * (-15 + 6 * 2**a - 3**a)
    raise ValidationError(f"unknown counterexample family {family!r}")


@dataclass(frozen=True)
class SpotCheck:
    seeds: int
    failures: int
    min_energy: float
    radius: float
    method: str

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_json(self) -> dict[str, Any]:
        return {**_clean(asdict(self)), "passed": self.passed}


def spot_check(cert: Certificate, seeds: int = 200, n_atoms: int | None = None,
               radius: float | None = None) -> SpotCheck:
    """Sign test: energy of random level-2 measures inside ``B(0; R_star)`` must be positive."""
    p = cert.potential
    d = p.d
    R = cert.R_star if radius is None else radius
    n = n_atoms or d + 5
    smooth = p.singular_at_origin
    use_fourier = cert.regime in ("sub2", "log", "known_lic") and not (p.kind == "power" and p.a > 4)
    eps = R / (8 * n) if smooth else None
    method = ("fourier" if use_fourier else "direct") + ("+mollified" if smooth else "")
    worst, failures = math.inf, 0
    for seed in range(seeds):
        sep = 2.5 * eps if smooth else None
        mu = random_test_measure(R - (eps or 0.0), n, "mass+center", seed, d, min_separation=sep)
        if use_fourier:
            e = energy_fourier(p, mu, mollifier_eps=eps).value
        elif smooth:
            e = energy_direct_mollified(p, mu, eps)
        else:
            e = energy_direct(p, mu)
        worst = min(worst, e)
        failures += not e > 0
    return SpotCheck(seeds, failures, worst, R, method)


# ---------------------------------------------------------------------------
# scans


def scan_grid(lo: float, hi: float, steps: int, spacing: str = "uniform", toward: str = "hi",
              closest: float = 1e-6) -> np.ndarray:
    """Grid on ``[lo, hi]``; ``geometric`` spacing clusters toward one end, excluding it.

    The ``geometric`` points are ``e + (o - e) q^k`` for ``k = 0..steps-1``, ending at
    distance ``closest·|o - e|`` from the clustering end ``e``.
    """
    if steps < 1 or not hi > lo:
        raise ValidationError("scan needs hi > lo and steps >= 1")
    if spacing == "uniform":
        return np.linspace(lo, hi, steps)
    if spacing != "geometric":
        raise ValidationError(f"unknown spacing {spacing!r}")
    e, o = (hi, lo) if toward == "hi" else (lo, hi)
    q = closest ** (1 / (steps - 1)) if steps > 1 else 1.0
    return e + (o - e) * q ** np.arange(steps, dtype=float)


def _scan_one(args: tuple[str, float, float, int]) -> dict[str, Any]:
    kind, a, b, d = args
    row: dict[str, Any] = {"a": float(a), "b": float(b), "d": int(d)}
    try:
        p = PotentialSpec.logpower(b, d) if kind == "logpower" else PotentialSpec.power(a, b, d)
        c = certify(p)
        row.update(regime=c.regime, R_star=c.R_star, R_lic_lb=c.R_lic_lb, certified=c.certified,
                   message="")
    except (UnsupportedError, ValidationError) as exc:
        row.update(regime="unsupported", R_star=math.nan, R_lic_lb=math.nan, certified=False,
                   message=str(exc))
    return row


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("LICERT_THREADS", "1")))
    except ValueError:
        return 1


def scan(axis: str, values: Sequence[float], fixed: float, d: int, kind: str = "power",
         workers: int | None = None) -> list[dict[str, Any]]:
    """Certify each grid point; ``axis`` names the varying parameter (``a`` or ``b``)."""
    if axis not in ("a", "b"):
        raise ValidationError("scan axis must be 'a' or 'b'")
    if len(values) == 0:
        raise ValidationError("scan range is empty")
    jobs = [(kind, v, fixed, d) if axis == "a" else (kind, fixed, v, d) for v in values]
    if kind == "logpower":
        jobs = [(kind, math.nan, v if axis == "b" else fixed, d) for v in values]
    workers = workers or default_workers()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(_scan_one, jobs))
    return [_scan_one(j) for j in jobs]


def certified_interval(rows: list[dict[str, Any]], axis: str) -> dict[str, Any] | None:
    """Hull of the certified grid points, labelled as non-sharp."""
    vals = [r[axis] for r in rows if r["certified"]]
    if not vals:
        return None
    return {"label": INTERVAL_LABEL, "lo": float(min(vals)), "hi": float(max(vals)), "points": len(vals)}
