"""Closed-form minimizers used as ground truth, and the field of a uniform shell."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np
from scipy import integrate, special
from scipy.stats import norm, qmc

from . import potentials, specfun
from .errors import DomainError, ValidationError
from .measures import SignedMeasure
from .potentials import PotentialSpec


def frank_bracket(a: float) -> float:
    """``R_a^{a-2}`` for the one-dimensional ``W_{a,2}`` minimizer (equal to 1 at a=2)."""
    return (math.gamma((3 - a) / 2) * math.sin((a - 1) * math.pi / 2)
            / (math.gamma((4 - a) / 2) * (a - 1) * math.sqrt(math.pi)))


def fm_bracket(a: float, d: int) -> float:
    """``R_a^{a-2}`` for the shell minimizer of ``W_{a,2}`` in dimension ``d ≥ 2``."""
    return (math.gamma((d + 1) / 2) * math.gamma((2 * d + a - 2) / 2)
            / (2 ** (a - 2) * math.gamma((d + a - 1) / 2) * math.gamma(d)))


def frank_radius(a: float) -> float:
    """Support radius of the ``W_{a,2}`` minimizer in one dimension, ``2 < a < 3``."""
    if not 2 < a < 3:
        raise DomainError("frank_radius needs 2 < a < 3")
    return frank_bracket(a) ** (1.0 / (a - 2))


def fm_shell_radius(a: float, d: int) -> float:
    """Radius of the spherical-shell minimizer of ``W_{a,2}``, ``2 < a < 4``, ``d ≥ 2``."""
    if not 2 < a < 4:
        raise DomainError("fm_shell_radius needs 2 < a < 4")
    if int(d) != d or d < 2:
        raise DomainError("fm_shell_radius needs d >= 2")
    return fm_bracket(a, d) ** (1.0 / (a - 2))


def richardson_derivative(f, x: float, h: float = 1e-2, levels: int = 5) -> float:
    """Central differences at steps ``h, h/2, ...`` combined by Richardson extrapolation."""
    table = []
    for i in range(levels):
        hi = h / 2**i
        row = [(f(x + hi) - f(x - hi)) / (2 * hi)]
        for j in range(1, i + 1):
            prev = table[i - 1][j - 1]
            row.append(row[j - 1] + (row[j - 1] - prev) / (4**j - 1))
        table.append(row)
    return table[-1][-1]


def w2ln_radius(d: int) -> float:
    """Radius of the ``W_{2,ln}`` minimizer (density for d=1, shell for d≥2)."""
    if int(d) != d or d < 1:
        raise DomainError("dimension must be a positive integer")
    if d == 1:
        return math.exp(-0.5 + richardson_derivative(frank_bracket, 2.0))
    return math.exp(-0.5 + 0.5 * specfun.digamma(d) - math.log(2) - 0.5 * specfun.digamma((d + 1) / 2))


@dataclass(frozen=True)
class ExplicitMinimizer:
    """``density1d``: ``C (R² - x²)_+^{exponent}`` on the line; ``shell``: uniform on ``∂B(0;R)``."""

    kind: str
    d: int
    radius: float
    exponent: float = -0.5
    normalizer: float = math.nan

    def __post_init__(self) -> None:
        if self.kind not in ("density1d", "shell"):
            raise ValidationError(f"unknown minimizer kind {self.kind!r}")
        if not self.radius > 0:
            raise ValidationError("radius must be positive")
        if self.kind == "density1d":
            if self.d != 1:
                raise ValidationError("density1d is one-dimensional")
            if not -1 < self.exponent < 0:
                raise ValidationError("density exponent must lie in (-1, 0)")
            R, g = self.radius, self.exponent
            # the "alg" weight (x+R)^g (R-x)^g is (R²-x²)^g
            mass, _ = integrate.quad(lambda x: 1.0, -R, R, weight="alg", wvar=(g, g))
            c = 1.0 / mass
        else:
            c = 1.0 / (specfun.sphere_area(self.d) * self.radius ** (self.d - 1))
        object.__setattr__(self, "normalizer", c)

    def to_json(self) -> dict[str, Any]:
        return {"kind": self.kind, "d": self.d, "radius": self.radius, "exponent": self.exponent,
                "normalizer": self.normalizer}


def w2ln_minimizer(d: int) -> ExplicitMinimizer:
    if d == 1:
        return ExplicitMinimizer("density1d", 1, w2ln_radius(1), -0.5)
    return ExplicitMinimizer("shell", d, w2ln_radius(d))


def frank_minimizer(a: float) -> ExplicitMinimizer:
    return ExplicitMinimizer("density1d", 1, frank_radius(a), -(a - 1) / 2)


def fm_minimizer(a: float, d: int) -> ExplicitMinimizer:
    return ExplicitMinimizer("shell", d, fm_shell_radius(a, d))


def _sphere_points(n: int, d: int) -> np.ndarray:
    if d == 2:
        th = 2 * math.pi * np.arange(n) / n
        return np.stack([np.cos(th), np.sin(th)], axis=1)
    if d == 3:
        # Fibonacci lattice
        k = np.arange(n) + 0.5
        z = 1 - 2 * k / n
        phi = math.pi * (3 - math.sqrt(5)) * k
        s = np.sqrt(1 - z * z)
        return np.stack([s * np.cos(phi), s * np.sin(phi), z], axis=1)
    u = qmc.Sobol(d, scramble=True, seed=0).random(n)
    g = norm.ppf(np.clip(u, 1e-12, 1 - 1e-12))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def sample_explicit(m: ExplicitMinimizer, n: int) -> SignedMeasure:
    """Quadrature-type probability measure approximating ``m``.

    The density is sampled at Gauss–Jacobi nodes of its own weight, which for
    exponent ``-1/2`` are ``R sin θ`` at equispaced ``θ`` with equal weights.
    """
    if n < 8:
        raise ValidationError("sample_explicit needs n >= 8")
    if m.kind == "density1d":
        g = m.exponent
        x, w = special.roots_jacobi(n, g, g)
        if g == -0.5:
            w = np.full(n, 1.0 / n)
        pts = (m.radius * x)[:, None]
        return SignedMeasure(pts, w / w.sum())
    return SignedMeasure(m.radius * _sphere_points(n, m.d), np.full(n, 1.0 / n))


def _u_rule(d: int, n: int, alpha: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Rule for ``∫_{-1}^1 f(u) (1-u)^α (1+u)^β du`` normalized by the sphere weight."""
    beta = (d - 3) / 2
    al = beta if alpha is None else alpha
    u, w = special.roots_jacobi(n, al, beta)
    norm_ = 2 ** (d - 2) * special.beta((d - 1) / 2, (d - 1) / 2)  # ∫(1-u²)^β du
    return u, w / norm_


def sphere_average(p: PotentialSpec, R: float, r: float, d: int | None = None, nodes: int = 96) -> float:
    """``(W * σ_R)(x)`` at ``|x| = r``, where ``σ_R`` is the uniform probability on ``∂B(0;R)``.

    Uses Gauss–Jacobi quadrature in ``u = cos θ``. At ``r = R`` each power term
    gets its own rule matched to the endpoint singularity. Returns ``inf`` when
    the integral diverges and ``nan`` when a logarithmic term meets the
    coincident-radius singularity.
    """
    d = p.d if d is None else d
    if not R > 0 or r < 0:
        raise DomainError("need R > 0 and r >= 0")
    if d == 1:
        return 0.5 * (float(potentials.w_eval(p, abs(r - R))) + float(potentials.w_eval(p, r + R)))
    if r == 0.0:
        return float(potentials.w_eval(p, R))
    if r != R:
        u, w = _u_rule(d, nodes)
        dist = np.sqrt(np.maximum(r * r + R * R - 2 * r * R * u, 0.0))
        return float(w @ np.asarray(potentials.w_eval(p, dist)))
    if p.kind == "truncdiff":
        u, w = _u_rule(d, nodes)
        return float(w @ np.asarray(potentials.w_eval(p, R * np.sqrt(2 * (1 - u)))))
    total = 0.0
    for coef, s, L in potentials.power_terms(p):
        if L:
            if p.singular_at_origin:
                return math.nan
            u, w = _u_rule(d, nodes)
            dist = R * np.sqrt(2 * (1 - u))
            total += coef * float(w @ (dist**s * np.log(dist)))
            continue
        alpha = s / 2 + (d - 3) / 2
        if alpha <= -1:
            return math.inf
        # dist^s = (2R²)^{s/2} (1-u)^{s/2}
        u, w = _u_rule(d, nodes, alpha)
        total += coef * (2 * R * R) ** (s / 2) * float(np.sum(w))
    return total
