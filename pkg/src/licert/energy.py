"""Interaction energies on the physical and Fourier sides, fields and EL residuals."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Any

import numpy as np
from scipy import interpolate, special
from scipy.spatial.distance import pdist

from . import potentials, specfun
from .errors import MomentConditionError, UnsupportedError, ValidationError
from .measures import SignedMeasure
from .potentials import PotentialSpec
from .spectral import QuadratureSpec, RadialSpectrum


def _check_dim(p: PotentialSpec, mu: SignedMeasure) -> None:
    if p.d != mu.d:
        raise ValidationError(f"potential is {p.d}-dimensional but the measure is {mu.d}-dimensional")


def energy_direct(p: PotentialSpec, mu: SignedMeasure) -> float:
    """``½ Σ_i Σ_j w_i w_j W(x_i - x_j)`` including the diagonal.

    Coincident atoms are merged first; any atom then meets ``W(0) = +inf`` for a
    singular kernel, so the energy is ``+inf``.
    """
    _check_dim(p, mu)
    mu = mu.canonical()
    if mu.n == 0:
        return 0.0
    if p.singular_at_origin:
        return math.inf
    w = mu.weights
    total = float(w @ w) * p.value_at_origin()
    if mu.n > 1:
        dist = pdist(mu.points)
        iu, ju = np.triu_indices(mu.n, k=1)
        total += 2.0 * float(np.sum(w[iu] * w[ju] * potentials.w_eval(p, dist)))
    return 0.5 * total


def particle_energy(p: PotentialSpec, X: np.ndarray) -> float:
    """Equal-weight energy ``(1/2N²) Σ_{i≠j} W(x_i - x_j)`` without self terms."""
    n = X.shape[0]
    if n < 2:
        return 0.0
    dist = pdist(X)
    if np.any(dist == 0.0) and p.singular_at_origin:
        return math.inf
    return float(np.sum(potentials.w_eval(p, dist))) / (n * n)


@dataclass(frozen=True)
class EnergyReport:
    value: float
    error_estimate: float
    nodes_used: int
    note: str = "error estimate is heuristic (panel refinement)"

    def to_json(self) -> dict[str, Any]:
        return {"value": self.value, "error_estimate": self.error_estimate,
                "nodes_used": self.nodes_used, "note": self.note}


def energy_fourier(p: PotentialSpec, mu: SignedMeasure, q: QuadratureSpec | None = None,
                   mollifier_eps: float | None = None,
                   spectrum: RadialSpectrum | None = None) -> EnergyReport:
    """``½ ∫ Ŵ(ξ) |ν̂(ξ)|² dξ`` with ``ν = μ`` or ``ν = μ * φ_ε``.

    Raises :class:`MomentConditionError` when ``μ`` lacks the vanishing moments
    of the kernel's representability level. A precomputed ``spectrum`` may be
    passed to reuse node evaluations across kernels.
    """
    _check_dim(p, mu)
    terms = potentials.fourier_terms(p)
    need = potentials.fourier_level(p)
    spec = spectrum or RadialSpectrum(mu, mollifier_eps, q)
    if spec.level < need:
        raise MomentConditionError(
            f"{p.describe()} needs {need} vanishing moments (mass"
            + (", first moment" if need > 1 else "") + f"); the measure has {spec.level}")
    if spec.empty:
        return EnergyReport(0.0, 0.0, 0)
    if spec.eps is None and spec.diag > 0 and p.singular_at_origin:
        # Ŵ decays no faster than |ξ|^{-d} while |μ̂|² does not decay
        return EnergyReport(math.inf, 0.0, 0, "discrete measure against a singular kernel")
    value, err = 0.0, 0.0
    for coef, e, L in terms:
        if coef == 0.0:
            continue
        v, de = spec.space_integral(e, L)
        value += coef * v
        err += abs(coef) * de
    return EnergyReport(0.5 * value, 0.5 * err, spec.nodes_used)


# ---------------------------------------------------------------------------
# mollified measures on the physical side


def _sphere_weight_rule(d: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes ``u`` and weights for the normalized ``(1-u²)^{(d-3)/2}`` average."""
    if d == 1:
        return np.array([-1.0, 1.0]), np.array([0.5, 0.5])
    if d == 2:
        u, w = special.roots_chebyt(n)
    elif d == 3:
        u, w = np.polynomial.legendre.leggauss(n)
    else:
        al = (d - 3) / 2
        u, w = special.roots_jacobi(n, al, al)
    return u, w / w.sum()


def _theta_average(g, s: float, t: np.ndarray, d: int, n: int) -> np.ndarray:
    """Average of ``g(|s e - t ω|)`` over unit ``ω`` where ``g`` vanishes past 1.

    Integrates in the polar angle over the part of the sphere where the
    argument is below 1, so narrow caps are resolved.
    """
    if d == 1:
        return 0.5 * (g(np.abs(s - t)) + g(s + t))
    out = np.zeros_like(t)
    with np.errstate(divide="ignore", invalid="ignore"):
        cos_max = (s * s + t * t - 1.0) / (2 * s * t)
    th_max = np.where(s * t == 0, math.pi, np.arccos(np.clip(cos_max, -1.0, 1.0)))
    x, wx = np.polynomial.legendre.leggauss(n)
    norm = math.sqrt(math.pi) * math.gamma((d - 1) / 2) / math.gamma(d / 2)
    for i, (ti, tm) in enumerate(zip(t, th_max)):
        if tm <= 0:
            continue
        th = 0.5 * tm * (x + 1)
        wt = 0.5 * tm * wx * np.sin(th) ** (d - 2)
        v = np.sqrt(np.maximum(s * s + ti * ti - 2 * s * ti * np.cos(th), 0.0))
        out[i] = wt @ g(v) / norm
    return out


@lru_cache(maxsize=None)
def _mollifier_autocorrelation(d: int) -> interpolate.CubicSpline:
    """Spline of ``ψ = φ * φ`` on ``[0, 2]`` computed in physical space."""
    phi = lambda r: specfun.mollifier(r, d)
    s_grid = np.linspace(0.0, 2.0, 801)
    vals = np.empty_like(s_grid)
    area = specfun.sphere_area(d)
    for i, s in enumerate(s_grid):
        lo = max(0.0, s - 1.0)
        t, wt = specfun.gauss_legendre(96, lo, 1.0)
        avg = _theta_average(phi, s, t, d, 96)
        vals[i] = area * float(wt @ (phi(t) * t ** (d - 1) * avg)) if d > 1 else float(
            wt @ (phi(t) * (phi(np.abs(s - t)) + phi(s + t))))
    vals[-1] = 0.0
    return interpolate.CubicSpline(s_grid, vals, bc_type=((1, 0.0), (1, 0.0)))


def mollifier_autocorrelation(s: np.ndarray, d: int, eps: float = 1.0) -> np.ndarray:
    """``(φ_ε * φ_ε)(s)``, a radial bump supported on ``[0, 2ε]``."""
    s = np.asarray(s, dtype=float) / eps
    out = np.where(s < 2.0, _mollifier_autocorrelation(d)(np.minimum(s, 2.0)), 0.0)
    return np.maximum(out, 0.0) * eps ** (-d)


def smoothed_kernel(p: PotentialSpec, rho: float, eps: float, nodes: int = 48) -> float:
    """``(W * φ_ε * φ_ε)(ρ e)`` for ``ρ = 0`` or ``ρ > 2ε``."""
    d = p.d
    area = specfun.sphere_area(d)
    if rho == 0.0:
        total = 0.0
        for coef, s, L in potentials.power_terms(p):
            if L:
                raise UnsupportedError("smoothed diagonal for logarithmic kernels is not implemented")
            gam = s + d - 1
            x, w = special.roots_jacobi(nodes, 0.0, gam)
            t = eps * (x + 1)  # weight (1+x)^gam on [-1,1] -> t^gam on [0, 2eps]
            wt = w * eps ** (gam + 1)
            total += coef * area * float(wt @ mollifier_autocorrelation(t, d, eps))
        return total
    if rho <= 2 * eps * (1 + 1e-12):
        raise UnsupportedError("smoothed kernel needs atom separation above 2*eps")
    t, wt = specfun.gauss_legendre(nodes, 0.0, 2 * eps)
    u, wu = _sphere_weight_rule(d, nodes)
    dist = np.sqrt(np.maximum(rho * rho + t[:, None] ** 2 + 2 * rho * t[:, None] * u[None, :], 0.0))
    avg = np.asarray(potentials.w_eval(p, dist)) @ wu
    dens = mollifier_autocorrelation(t, d, eps)
    if d == 1:
        return float(wt @ (dens * avg * 2.0))
    return area * float(wt @ (dens * t ** (d - 1) * avg))


def energy_direct_mollified(p: PotentialSpec, mu: SignedMeasure, eps: float) -> float:
    """Physical-side energy of ``μ * φ_ε`` from the smoothed pair kernel."""
    _check_dim(p, mu)
    mu = mu.canonical()
    if mu.n == 0:
        return 0.0
    w = mu.weights
    total = float(w @ w) * smoothed_kernel(p, 0.0, eps)
    if mu.n > 1:
        dist = pdist(mu.points)
        iu, ju = np.triu_indices(mu.n, k=1)
        vals = np.array([smoothed_kernel(p, float(r), eps) for r in dist])
        total += 2.0 * float(np.sum(w[iu] * w[ju] * vals))
    return 0.5 * total


# ---------------------------------------------------------------------------
# fields


def potential_field(p: PotentialSpec, rho: SignedMeasure, x) -> float | np.ndarray:
    """``(W * ρ)(x) = Σ_j w_j W(x - x_j)`` at one point or an (m, d) array."""
    x = np.asarray(x, dtype=float)
    single = x.ndim <= 1 and not (rho.d == 1 and x.ndim == 1 and x.size > 1)
    pts = x.reshape(-1, rho.d)
    mu = rho.canonical()
    dist = np.linalg.norm(pts[:, None, :] - mu.points[None, :, :], axis=2)
    vals = np.asarray(potentials.w_eval(p, dist))
    with np.errstate(invalid="ignore"):
        out = vals @ mu.weights
    return float(out[0]) if single else out


@dataclass(frozen=True)
class ELReport:
    C0: float
    on_support_max_dev: float
    off_support_min_gap: float
    test_points: int

    def to_json(self) -> dict[str, Any]:
        return {"C0": self.C0, "on_support_max_dev": self.on_support_max_dev,
                "off_support_min_gap": self.off_support_min_gap, "test_points": self.test_points}


def el_residual(p: PotentialSpec, rho: SignedMeasure, test) -> ELReport:
    """Euler–Lagrange residuals of a candidate minimizer ``ρ``."""
    _check_dim(p, rho)
    if np.any(rho.weights < 0) or abs(float(np.sum(rho.weights)) - 1.0) > 1e-10:
        raise ValidationError("el_residual needs a probability measure")
    C0 = 2.0 * energy_direct(p, rho)
    on = np.asarray(potential_field(p, rho, rho.points))
    test = np.asarray(test, dtype=float).reshape(-1, rho.d)
    if test.shape[0]:
        off = float(np.min(np.asarray(potential_field(p, rho, test)) - C0))
    else:
        off = math.inf
    return ELReport(C0, float(np.max(np.abs(on - C0))), off, int(test.shape[0]))
