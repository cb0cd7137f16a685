"""Radial integrals of power spectra of discrete (optionally mollified) measures.

For ``ν = μ * φ_ε`` (or ``ν = μ``) the quantity

    A(r) = ∫_{S^{d-1}} |ν̂(rω)|² dω

is computed exactly from pair distances, since the sphere average of a plane
wave is a Bessel function. Integrals ``∫ |ξ|^e (ln|ξ|)^L |ν̂(ξ)|² dξ`` are then
one-dimensional and split into three pieces:

* ``[0, r0]``: a power series in ``r`` whose first ``level`` terms vanish by the
  moment conditions, integrated term by term.
* ``[r0, T]``: composite Gauss–Legendre panels.
* ``[T, ∞)``: the diagonal part in closed form and the oscillatory pair part
  through the Hankel expansion plus integration by parts. For mollified
  measures the tail is below the neglected-tail bound and is dropped.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Any

import numpy as np
from scipy import special

from . import specfun
from .errors import MomentConditionError, ValidationError
from .measures import SignedMeasure, vanishing_level

_SERIES_TERMS = 32
_HANKEL_TERMS = 14
_IBP_TERMS = 60
_CHUNK = 1 << 18


@dataclass(frozen=True)
class QuadratureSpec:
    """Parameters of the radial and angular rules.

    ``radial_split`` (``r0``), ``tail_cutoff`` (``T``) and ``panel_width``
    default to values scaled by the largest pair distance. ``mode`` selects how
    the sphere average on ``[r0, T]`` is done: ``exact`` (Bessel reduction),
    ``tensor`` (product rule, d ≤ 3) or ``montecarlo`` (seeded directions).
    """

    radial_nodes: int = 16
    radial_split: float | None = None
    tail_cutoff: float | None = None
    panel_width: float | None = None
    angular_order: int = 16
    mode: str = "exact"
    samples: int = 2048
    seed: int = 0

    def __post_init__(self) -> None:
        if self.radial_nodes < 2 or self.angular_order < 1 or self.samples < 1:
            raise ValidationError("quadrature counts must be positive (radial_nodes >= 2)")
        for name in ("radial_split", "tail_cutoff", "panel_width"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise ValidationError(f"{name} must be positive")
        if self.mode not in ("exact", "tensor", "montecarlo"):
            raise ValidationError(f"unknown quadrature mode {self.mode!r}")

    def to_json(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> QuadratureSpec:
        if not isinstance(obj, dict):
            raise ValidationError("quadrature config must be an object")
        unknown = set(obj) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValidationError(f"unknown quadrature fields {sorted(unknown)}")
        return cls(**obj)


def _hankel_coefficients(nu: float, count: int) -> np.ndarray:
    a = np.empty(count)
    a[0] = 1.0
    for m in range(1, count):
        a[m] = a[m - 1] * (4 * nu * nu - (2 * m - 1) ** 2) / (8 * m)
    return a


def oscillatory_tail(q: np.ndarray, omega: np.ndarray, T: float, L: int) -> np.ndarray:
    """``∫_T^∞ r^{-q} (ln r)^L e^{iωr} dr`` by the integration-by-parts series.

    Accurate when ``ωT`` is large (≥ 40 is used here); ``L`` is 0 or 1.
    """
    q = np.broadcast_to(np.asarray(q, dtype=float), np.shape(omega)).copy()
    omega = np.asarray(omega, dtype=float)
    X = 1j * omega * T
    lnT = math.log(T)
    P = np.ones_like(q)
    dP = np.zeros_like(q)
    Xk = X.copy()
    total = np.zeros(omega.shape, dtype=complex)
    prev = np.full(omega.shape, np.inf)
    active = np.ones(omega.shape, dtype=bool)
    for k in range(_IBP_TERMS):
        coef = dP - P * lnT if L else -P
        term = coef / Xk
        mag = np.abs(term)
        active &= mag < prev
        total += np.where(active, term, 0.0)
        prev = mag
        if not np.any(active & (mag > 1e-18 * np.abs(total))):
            break
        dP = dP * (q + k) + P
        P = P * (q + k)
        Xk = Xk * X
    return np.exp(X) * T ** (1.0 - q) * total


class RadialSpectrum:
    """Precomputed ``A(r)`` data for one measure and mollifier scale."""

    def __init__(self, mu: SignedMeasure, eps: float | None = None,
                 quad: QuadratureSpec | None = None) -> None:
        quad = quad or QuadratureSpec()
        if eps is not None and not eps > 0:
            raise ValidationError("mollifier scale must be positive")
        mu = mu.canonical()
        self.d = mu.d
        self.eps = eps
        self.quad = quad
        self.level = vanishing_level(mu)
        w, X = mu.weights, mu.points
        self.diag = float(w @ w)
        iu, ju = np.triu_indices(mu.n, k=1)
        diff = X[iu] - X[ju]
        self.pair_vec = diff
        self.rho = np.linalg.norm(diff, axis=1)
        self.c = 2.0 * w[iu] * w[ju]
        self.empty = mu.n == 0
        self._setup_grid()
        self._middle: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}

    # ------------------------------------------------------------------ setup
    def _setup_grid(self) -> None:
        q = self.quad
        rho_max = float(self.rho.max()) if self.rho.size else 0.0
        rho_min = float(self.rho.min()) if self.rho.size else 0.0
        scale = max(rho_max, self.eps or 0.0, 1e-300)
        if self.empty or scale <= 1e-300:
            scale = 1.0
        self.scale = scale
        self.r0 = q.radial_split or 1.0 / (2 * math.pi * scale)
        h = q.panel_width or 0.5 / scale
        if q.tail_cutoff is not None:
            T = max(q.tail_cutoff, self.r0)
        elif self.eps is not None:
            T = 60.0 / self.eps
        elif self.rho.size:
            T = max(40.0 / (2 * math.pi * rho_min), self.r0 + 4 * h)
        else:
            T = self.r0
        n_panels = max(int(math.ceil((T - self.r0) / h)), 0)
        self.T = self.r0 + n_panels * h
        self.edges = self.r0 + h * np.arange(n_panels + 1)

    def _series_coefficients(self) -> np.ndarray:
        """``P_n`` with ``A(r)/|S| · m(r) = Σ_n P_n r^{2n}`` near the origin."""
        d, K = self.d, _SERIES_TERMS
        k = np.arange(K)
        alpha = (-1.0) ** k * math.pi ** (2 * k) * math.gamma(d / 2) / (
            special.factorial(k) * special.gamma(k + d / 2))
        S = np.array([self.diag * (kk == 0) + float(self.c @ self.rho ** (2 * kk)) for kk in k])
        S[: self.level] = 0.0
        P = alpha * S
        if self.eps is not None:
            m = specfun.mollifier_moments(d, K)
            beta = alpha * m * self.eps ** (2 * k)
            phi2 = np.convolve(beta, beta)[:K]
            P = np.convolve(P, phi2)[:K]
        return P

    def _angular_mean(self, r: np.ndarray) -> np.ndarray:
        """``A(r)/|S|`` on the middle nodes."""
        q = self.quad
        out = np.full(r.shape, self.diag)
        if not self.rho.size:
            return out
        if q.mode == "exact" or self.d == 1:
            step = max(1, _CHUNK // self.rho.size)
            for i in range(0, r.size, step):
                rr = r[i : i + step]
                out[i : i + step] += specfun.sphere_mean_kernel(
                    2 * math.pi * np.outer(rr, self.rho), self.d) @ self.c
            return out
        if q.mode == "montecarlo":
            rng = np.random.default_rng(q.seed)
            dirs = rng.standard_normal((q.samples, self.d))
            dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
            proj = self.pair_vec @ dirs.T
            for i, ri in enumerate(r):
                out[i] += float(self.c @ np.cos(2 * math.pi * ri * proj).mean(axis=1))
            return out
        if self.d > 3:
            raise ValidationError("tensor angular rules are implemented for d <= 3")
        rho_max = float(self.rho.max())
        for i, ri in enumerate(r):
            n = max(q.angular_order, int(math.ceil(2 * math.pi * ri * rho_max)) + 24)
            dirs, wts = _sphere_rule(self.d, n)
            proj = self.pair_vec @ dirs.T
            out[i] += float(self.c @ (np.cos(2 * math.pi * ri * proj) @ wts))
        return out

    def _middle_nodes(self, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        if n not in self._middle:
            if self.edges.size < 2:
                empty = np.zeros(0)
                self._middle[n] = (empty, empty, empty)
            else:
                r, w = specfun.composite_gauss_legendre(self.edges, n)
                vals = self._angular_mean(r)
                if self.eps is not None:
                    vals = vals * specfun.mollifier_fourier(r, self.d, self.eps) ** 2
                self._middle[n] = (r, w, vals)
        return self._middle[n]

    @property
    def nodes_used(self) -> int:
        return int(sum(v[0].size for v in self._middle.values()))

    # --------------------------------------------------------------- pieces
    def _origin(self, p: float, L: int) -> float:
        P = self._series_coefficients()
        r0 = self.r0
        total = 0.0
        for n, coef in enumerate(P):
            if coef == 0.0:
                continue
            m = p + 2 * n
            if m <= -1:
                raise MomentConditionError(
                    f"integrand r^{p:g} is not integrable at 0 with {self.level} vanishing moments")
            base = r0 ** (m + 1) / (m + 1)
            total += coef * (base if L == 0 else base * (math.log(r0) - 1.0 / (m + 1)))
        return total

    def _diag_tail(self, p: float, L: int) -> float:
        if self.diag == 0.0:
            return 0.0
        if p >= -1:
            return math.inf
        T, s = self.T, p + 1
        if L == 0:
            return self.diag * T**s / (-s)
        return self.diag * T**s * (-math.log(T) / s + 1.0 / (s * s))

    def _pair_tail(self, p: float, L: int) -> tuple[float, float]:
        if not self.rho.size:
            return 0.0, 0.0
        d = self.d
        nu = d / 2 - 1
        omega = 2 * math.pi * self.rho
        a = _hankel_coefficients(nu, _HANKEL_TERMS + 1)
        pref = math.gamma(d / 2) * 2**nu * math.sqrt(2 / math.pi)
        total = np.zeros_like(omega)
        last = np.zeros_like(omega)
        for m in range(_HANKEL_TERMS):
            if a[m] == 0.0:
                break
            qm = nu + 0.5 + m - p
            phase = -nu * math.pi / 2 - math.pi / 4 + m * math.pi / 2
            g = oscillatory_tail(qm, omega, self.T, L)
            last = pref * a[m] * omega ** (-nu - 0.5 - m) * np.real(np.exp(1j * phase) * g)
            total += last
        err = 0.0
        if a[_HANKEL_TERMS - 1] != 0.0:
            err = float(np.abs(self.c) @ np.abs(last))
        return float(self.c @ total), err

    # ----------------------------------------------------------------- public
    def radial_integral(self, p: float, L: int = 0) -> tuple[float, float]:
        """``∫_0^∞ r^p (ln r)^L A(r)/|S| dr`` and a heuristic error estimate."""
        if L not in (0, 1):
            raise ValidationError("only L in {0, 1} is supported")
        if self.empty:
            return 0.0, 0.0
        origin = self._origin(p, L)
        n = self.quad.radial_nodes
        r, w, vals = self._middle_nodes(n)
        r2, w2, vals2 = self._middle_nodes(max(2, n // 2))
        f = r**p * np.log(r) ** L if r.size else r
        f2 = r2**p * np.log(r2) ** L if r2.size else r2
        middle = float(w @ (f * vals))
        err = abs(middle - float(w2 @ (f2 * vals2)))
        if self.eps is None:
            diag = self._diag_tail(p, L)
            if math.isinf(diag):
                return math.inf, 0.0
            pair, perr = self._pair_tail(p, L)
            tail = diag + pair
            err += perr
        else:
            tail = 0.0
            kT = self.eps * self.T
            bound = specfun.mollifier_fourier_tail_bound(kT, self.d) ** 2
            mass = self.diag + float(np.abs(self.c).sum())
            if p + 1 < 0:
                err += mass * bound * self.T ** (p + 1) / (-p - 1) * max(1.0, abs(math.log(self.T))) ** L
        return origin + middle + tail, err

    def space_integral(self, e: float, L: int = 0) -> tuple[float, float]:
        """``∫_{R^d} |ξ|^e (ln|ξ|)^L |ν̂(ξ)|² dξ`` and an error estimate."""
        val, err = self.radial_integral(e + self.d - 1, L)
        s = specfun.sphere_area(self.d)
        return s * val, s * err


def _sphere_rule(d: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Directions and weights (summing to 1) of a product rule on S^{d-1}."""
    if d == 2:
        th = 2 * math.pi * np.arange(n) / n
        return np.stack([np.cos(th), np.sin(th)], axis=1), np.full(n, 1.0 / n)
    u, wu = np.polynomial.legendre.leggauss(n)
    m = 2 * n
    ph = 2 * math.pi * np.arange(m) / m
    su = np.sqrt(1 - u * u)
    dirs = np.stack([
        np.outer(su, np.cos(ph)).ravel(),
        np.outer(su, np.sin(ph)).ravel(),
        np.repeat(u, m),
    ], axis=1)
    wts = np.repeat(wu / 2, m) / m
    return dirs, wts
