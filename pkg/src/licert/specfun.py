"""Special functions, Fourier coefficients of power kernels and bump profiles.

Conventions
-----------
The Fourier transform is ``f̂(ξ) = ∫ f(x) exp(-2πi x·ξ) dx``. With it,
``F[|x|^{-s}/s] = c_pf(s) |ξ|^{s-d}`` and
``F[-(|x|^{-s}/s) ln|x|] = (c_pf_tilde(s) + c_pf(s) ln|ξ|) |ξ|^{s-d}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import interpolate, special

from .errors import DomainError


def _is_pole(s: float) -> bool:
    return s <= 0 and float(s).is_integer()


def gamma(s: float) -> float:
    """Γ(s) for real ``s`` off the poles {0, -1, -2, ...}."""
    if _is_pole(s):
        raise DomainError(f"gamma has a pole at {s}")
    return float(special.gamma(s))


def digamma(s: float) -> float:
    """ψ(s) = Γ'(s)/Γ(s) for real ``s`` off the poles."""
    if _is_pole(s):
        raise DomainError(f"digamma has a pole at {s}")
    return float(special.psi(s))


def _rgamma_prime(z: float) -> float:
    # d/dz 1/Γ(z) = -ψ(z)/Γ(z); at z=-k the limit is (-1)^k k!
    if _is_pole(z):
        k = int(-z)
        return float((-1) ** k * math.factorial(k))
    return float(-special.psi(z) * special.rgamma(z))


def _check_dim(d: int) -> None:
    if int(d) != d or d < 1:
        raise DomainError(f"dimension must be a positive integer, got {d}")


def sphere_area(d: int) -> float:
    """|∂B(0;1)| in R^d."""
    return 2.0 * math.pi ** (d / 2) / math.gamma(d / 2)


def ball_volume(d: int, radius: float = 1.0) -> float:
    return math.pi ** (d / 2) / math.gamma(d / 2 + 1) * radius**d


def c_pf(s: float, d: int) -> float:
    """Coefficient with ``F[|x|^{-s}/s] = c_pf(s, d) |ξ|^{s-d}``.

    At ``s = 0`` the removable limit ``π^{-d/2} Γ(d/2) / 2`` is returned,
    matching the logarithmic kernel ``-ln|x|``. The zeros at ``s = -2, -4, ...``
    are exact.
    """
    _check_dim(d)
    if s >= d:
        raise DomainError(f"c_pf requires s < d (got s={s}, d={d})")
    if s == 0:
        return math.pi ** (-d / 2) * math.gamma(d / 2) / 2.0
    val = float(math.pi ** (s - d / 2) * special.gamma((d - s) / 2) * special.rgamma(s / 2) / s)
    return val if val != 0.0 else 0.0


def c_pf_prime(s: float, d: int) -> float:
    """Derivative of :func:`c_pf` in ``s``, finite at the zeros of ``c_pf``."""
    _check_dim(d)
    if s >= d:
        raise DomainError(f"c_pf requires s < d (got s={s}, d={d})")
    if s == 0:
        raise DomainError("c_pf_prime is evaluated away from s = 0")
    base = math.pi ** (s - d / 2) * float(special.gamma((d - s) / 2)) / s
    dlog_base = math.log(math.pi) - 0.5 * float(special.psi((d - s) / 2)) - 1.0 / s
    g = float(special.rgamma(s / 2))
    return base * (dlog_base * g + 0.5 * _rgamma_prime(s / 2))


def c_pf_tilde(s: float, d: int) -> float:
    """``c_pf(s)/s + c_pf'(s)``, the coefficient of the log kernel transform."""
    return c_pf(s, d) / s + c_pf_prime(s, d)


# ----------------------------------------------------------------------------
# radial Fourier kernel


def sphere_mean_kernel(t: np.ndarray, d: int) -> np.ndarray:
    """Average of ``exp(i t ω·e)`` over unit ``ω``: ``Γ(d/2)(2/t)^ν J_ν(t)``."""
    t = np.asarray(t, dtype=float)
    if d == 1:
        return np.cos(t)
    if d == 3:
        return np.sinc(t / math.pi)
    if d == 2:
        return special.j0(t)
    nu = d / 2 - 1
    with np.errstate(divide="ignore", invalid="ignore"):
        out = math.gamma(d / 2) * (2.0 / t) ** nu * special.jv(nu, t)
    return np.where(np.abs(t) < 1e-12, 1.0, out)


def gauss_legendre(n: int, lo: float = 0.0, hi: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    x, w = _gl_unit(n)
    half = 0.5 * (hi - lo)
    return lo + half * (x + 1.0), half * w


@lru_cache(maxsize=64)
def _gl_unit(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def composite_gauss_legendre(edges: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of an ``n``-point rule on each interval of ``edges``."""
    x, w = _gl_unit(n)
    edges = np.asarray(edges, dtype=float)
    lo, hi = edges[:-1, None], edges[1:, None]
    half = 0.5 * (hi - lo)
    nodes = lo + half * (x[None, :] + 1.0)
    weights = half * w[None, :]
    return nodes.ravel(), weights.ravel()


# ----------------------------------------------------------------------------
# bump profiles


@dataclass(frozen=True)
class BumpProfile:
    """Mollifier ``φ_ε`` (kind ``"mollifier"``) or truncation ``Φ_R``."""

    kind: str
    scale: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in ("mollifier", "truncation"):
            raise DomainError(f"unknown bump kind {self.kind!r}")
        if not self.scale > 0:
            raise DomainError("bump scale must be positive")


MOLLIFIER_DESCRIPTION = "phi(x) = N_d exp(-1/(1-|x|^2)) on |x|<1"
TRUNCATION_DESCRIPTION = "Phi(r) = q(2-r)/(q(2-r)+q(r-1)), q(t) = exp(-1/t) for t>0"


def _bump_raw(r: np.ndarray) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    inside = r < 1.0
    out = np.zeros_like(r)
    ri = r[inside]
    out[inside] = np.exp(-1.0 / (1.0 - ri * ri))
    return out


@lru_cache(maxsize=None)
def mollifier_normalizer(d: int) -> float:
    """``N_d`` making ``N_d exp(-1/(1-|x|^2))`` a unit-mass density on R^d."""
    _check_dim(d)
    r, w = composite_gauss_legendre(np.linspace(0.0, 1.0, 41), 32)
    return 1.0 / (sphere_area(d) * float(w @ (_bump_raw(r) * r ** (d - 1))))


def mollifier(r: np.ndarray, d: int, eps: float = 1.0) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    return mollifier_normalizer(d) * eps ** (-d) * _bump_raw(r / eps)


def truncation(t: np.ndarray) -> np.ndarray:
    """Unit-scale ``Φ``: 1 on [0,1], 0 on [2,∞), smooth monotone transition."""
    return truncation_derivatives(t)[0]


def truncation_derivatives(t: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``Φ, Φ', Φ''`` of the unit-scale truncation."""
    t = np.asarray(t, dtype=float)
    phi = np.where(t <= 1.0, 1.0, 0.0)
    d1 = np.zeros_like(t)
    d2 = np.zeros_like(t)
    mid = (t > 1.0) & (t < 2.0)
    if np.any(mid):
        tm = t[mid]
        # Φ = 1/(1+e^g) with g = 1/(2-t) - 1/(t-1)
        g = 1.0 / (2.0 - tm) - 1.0 / (tm - 1.0)
        g1 = 1.0 / (2.0 - tm) ** 2 + 1.0 / (tm - 1.0) ** 2
        g2 = 2.0 / (2.0 - tm) ** 3 - 2.0 / (tm - 1.0) ** 3
        s = special.expit(-g)
        s1mins = special.expit(g)
        ss = s * s1mins
        phi[mid] = s
        d1[mid] = -ss * g1
        d2[mid] = (1.0 - 2.0 * s) * ss * g1 * g1 - ss * g2
    return phi, d1, d2


def bump_eval(p: BumpProfile, r: np.ndarray, d: int = 1) -> np.ndarray:
    """Value of ``φ_ε`` or ``Φ_R`` at radius ``r``."""
    if p.kind == "mollifier":
        return mollifier(r, d, p.scale)
    return truncation(np.asarray(r, dtype=float) / p.scale)


# ----------------------------------------------------------------------------
# Fourier transform of the mollifier

_FT_NODES = 640
_FT_KMAX = 60.0
_FT_STEP = 0.005


def _radial_ft(f_vals: np.ndarray, r: np.ndarray, w: np.ndarray, k: np.ndarray, d: int,
               chunk: int = 400) -> np.ndarray:
    k = np.atleast_1d(np.asarray(k, dtype=float))
    base = sphere_area(d) * w * f_vals * r ** (d - 1)
    out = np.empty_like(k)
    for i in range(0, k.size, chunk):
        kk = k[i : i + chunk]
        out[i : i + chunk] = sphere_mean_kernel(2 * math.pi * np.outer(kk, r), d) @ base
    return out


def mollifier_fourier_direct(k: np.ndarray, d: int) -> np.ndarray:
    """``φ̂(k)`` at unit scale by Gauss–Legendre quadrature (no interpolation)."""
    r, w = gauss_legendre(_FT_NODES, 0.0, 1.0)
    return _radial_ft(mollifier(r, d), r, w, k, d)


@lru_cache(maxsize=None)
def _mollifier_ft_spline(d: int) -> interpolate.CubicSpline:
    k = np.arange(0.0, _FT_KMAX + _FT_STEP / 2, _FT_STEP)
    vals = mollifier_fourier_direct(k, d)
    return interpolate.CubicSpline(k, vals, bc_type=((1, 0.0), "not-a-knot"))


def mollifier_fourier(k: np.ndarray, d: int, eps: float = 1.0) -> np.ndarray:
    """``φ̂_ε(k) = φ̂(εk)``; cached spline on ``[0, 60]``, direct quadrature beyond."""
    k = np.abs(np.asarray(k, dtype=float)) * eps
    scalar = k.ndim == 0
    k = np.atleast_1d(k)
    out = np.empty_like(k)
    inside = k <= _FT_KMAX
    out[inside] = _mollifier_ft_spline(d)(k[inside])
    if np.any(~inside):
        out[~inside] = mollifier_fourier_direct(k[~inside], d)
    return out[0] if scalar else out


def truncation_fourier(k: np.ndarray, d: int, R: float = 1.0) -> np.ndarray:
    """``Φ̂_R(k) = R^d Φ̂(Rk)`` by composite Gauss–Legendre quadrature."""
    r, w = composite_gauss_legendre(np.linspace(0.0, 2.0, 17), 32)
    return R**d * _radial_ft(truncation(r), r, w, np.asarray(k) * R, d)


def bump_fourier(p: BumpProfile, xi: np.ndarray, d: int) -> np.ndarray:
    """Radial Fourier transform of the profile at ``|ξ| = xi``."""
    _check_dim(d)
    if p.kind == "mollifier":
        return mollifier_fourier(xi, d, p.scale)
    return truncation_fourier(xi, d, p.scale)


@lru_cache(maxsize=None)
def mollifier_moments(d: int, count: int = 48) -> np.ndarray:
    """``m_{2j} = ∫ |x|^{2j} φ(x) dx`` for ``j < count``."""
    r, w = gauss_legendre(_FT_NODES, 0.0, 1.0)
    base = sphere_area(d) * w * mollifier(r, d) * r ** (d - 1)
    out = np.array([base @ r ** (2 * j) for j in range(count)])
    out.setflags(write=False)
    return out


def _series_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = a.shape[-1]
    out = np.zeros_like(a)
    for k in range(n):
        out[..., k] = np.sum(a[..., : k + 1] * b[..., k::-1], axis=-1)
    return out


def _series_recip(a: np.ndarray) -> np.ndarray:
    n = a.shape[-1]
    out = np.zeros_like(a)
    out[..., 0] = 1.0 / a[..., 0]
    for k in range(1, n):
        out[..., k] = -out[..., 0] * np.sum(a[..., 1 : k + 1] * out[..., k - 1 :: -1], axis=-1)
    return out


def _series_exp(h: np.ndarray) -> np.ndarray:
    n = h.shape[-1]
    out = np.zeros_like(h)
    out[..., 0] = np.exp(h[..., 0])
    j = np.arange(n)
    for k in range(1, n):
        out[..., k] = np.sum(j[1 : k + 1] * h[..., 1 : k + 1] * out[..., k - 1 :: -1], axis=-1) / k
    return out


def _series_deriv(a: np.ndarray) -> np.ndarray:
    out = np.zeros_like(a)
    n = a.shape[-1]
    out[..., :-1] = a[..., 1:] * np.arange(1, n)
    return out


@lru_cache(maxsize=None)
def laplacian_power_l1(m: int, d: int) -> float:
    """``‖Δ^m φ‖_{L¹}``, giving ``|φ̂(k)| ≤ ‖Δ^m φ‖_{L¹} / (2πk)^{2m}``.

    Derivatives come from truncated Taylor arithmetic at each quadrature node.
    """
    nodes, weights = composite_gauss_legendre(np.linspace(0.0, 1.0, 401), 24)
    order = 2 * m + 1
    r0 = nodes[:, None]
    # 1 - (r0+t)^2 as a series in t
    poly = np.zeros((nodes.size, order))
    poly[:, 0] = 1.0 - nodes**2
    poly[:, 1] = -2.0 * nodes
    if order > 2:
        poly[:, 2] = -1.0
    f = _series_exp(-_series_recip(poly))
    inv_r = np.zeros_like(poly)
    inv_r[:, 0] = 1.0
    inv_r[:, 1] = 1.0
    inv_r = _series_recip(inv_r * np.concatenate([r0, np.ones((nodes.size, order - 1))], axis=1))
    for _ in range(m):
        df = _series_deriv(f)
        f = _series_deriv(df) + (d - 1) * _series_mul(inv_r, df)
    vals = np.abs(np.nan_to_num(f[:, 0], nan=0.0))
    total = sphere_area(d) * mollifier_normalizer(d) * float(weights @ (vals * nodes ** (d - 1)))
    # quadrature of a kinked |.|; inflate slightly so the bound stays an upper bound
    return total * (1.0 + 1e-3)


def mollifier_fourier_tail_bound(k: float, d: int, m: int = 3) -> float:
    """Upper bound on ``|φ̂(κ)|`` valid for every ``κ ≥ k``."""
    return laplacian_power_l1(m, d) / (2 * math.pi * k) ** (2 * m)


FT_GRID_MAX = _FT_KMAX
