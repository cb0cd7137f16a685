"""Interaction kernels, their radial derivatives, Laplacians and Fourier transforms.

A kernel is described by :class:`PotentialSpec`. Radial values are plain floats
(or arrays) with ``math.inf`` marking the singularity at the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from . import specfun
from .errors import DomainError, UnsupportedError, ValidationError

KINDS = ("power", "logpower", "repulsive", "truncdiff")


def _power_term(r: np.ndarray, s: float) -> np.ndarray:
    """``r^s/s``, read as ``ln r`` when ``s = 0``."""
    if s == 0:
        return np.log(r)
    return r**s / s


@dataclass(frozen=True)
class PotentialSpec:
    """Kernel selector.

    ``power``: ``|x|^a/a - |x|^b/b`` with ``-d < b < a``.
    ``logpower``: ``(|x|^b/b) ln|x|`` with ``b > -d``, ``b != 0``.
    ``repulsive``: ``-|x|^b/b`` with ``b > -d``.
    ``truncdiff``: ``(|x|^a - |x|^4) Φ(x)`` with ``a > 4``.
    """

    kind: str
    d: int
    a: float | None = None
    b: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValidationError(f"unknown potential kind {self.kind!r}")
        if int(self.d) != self.d or self.d < 1:
            raise ValidationError(f"dimension must be a positive integer, got {self.d}")
        object.__setattr__(self, "d", int(self.d))
        for name in ("a", "b"):
            v = getattr(self, name)
            if v is not None:
                if not math.isfinite(v):
                    raise ValidationError(f"{name} must be finite")
                object.__setattr__(self, name, float(v))
        a, b, d = self.a, self.b, self.d
        if self.kind == "power":
            if a is None or b is None or not (-d < b < a):
                raise ValidationError(f"power kernel needs -d < b < a, got a={a}, b={b}, d={d}")
        elif self.kind == "logpower":
            if b is None or not b > -d or b == 0:
                raise ValidationError(f"logpower kernel needs b > -d and b != 0, got b={b}")
        elif self.kind == "repulsive":
            if b is None or not b > -d:
                raise ValidationError(f"repulsive kernel needs b > -d, got b={b}")
        elif a is None or not a > 4:
            raise ValidationError(f"truncdiff kernel needs a > 4, got a={a}")

    @classmethod
    def power(cls, a: float, b: float, d: int) -> PotentialSpec:
        return cls("power", d, a, b)

    @classmethod
    def logpower(cls, b: float, d: int) -> PotentialSpec:
        return cls("logpower", d, None, b)

    @classmethod
    def repulsive(cls, b: float, d: int) -> PotentialSpec:
        return cls("repulsive", d, None, b)

    @classmethod
    def truncdiff(cls, a: float, d: int) -> PotentialSpec:
        return cls("truncdiff", d, a, None)

    @property
    def singular_at_origin(self) -> bool:
        return self.kind != "truncdiff" and self.b <= 0

    def value_at_origin(self) -> float:
        return math.inf if self.singular_at_origin else 0.0

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"kind": self.kind, "d": self.d}
        if self.a is not None:
            out["a"] = self.a
        if self.b is not None:
            out["b"] = self.b
        return out

    @classmethod
    def from_json(cls, obj: Any) -> PotentialSpec:
        if not isinstance(obj, dict) or "kind" not in obj or "d" not in obj:
            raise ValidationError("potential must be an object with 'kind' and 'd'")
        try:
            return cls(obj["kind"], obj["d"], obj.get("a"), obj.get("b"))
        except TypeError as exc:
            raise ValidationError(str(exc)) from exc

    def describe(self) -> str:
        if self.kind == "power":
            return f"W_{{a,b}} with a={self.a:.12g}, b={self.b:.12g}, d={self.d}"
        if self.kind == "logpower":
            return f"W_{{b,ln}} with b={self.b:.12g}, d={self.d}"
        if self.kind == "repulsive":
            return f"-|x|^b/b with b={self.b:.12g}, d={self.d}"
        return f"(|x|^a-|x|^4)Phi with a={self.a:.12g}, d={self.d}"


def _as_array(r):
    arr = np.asarray(r, dtype=float)
    return arr, arr.ndim == 0


def _ret(out: np.ndarray, scalar: bool):
    return float(out) if scalar else out


def w_eval(p: PotentialSpec, r) -> float | np.ndarray:
    """``W`` at radius ``r ≥ 0``; ``+inf`` at the origin for singular kernels."""
    r, scalar = _as_array(r)
    if np.any(r < 0):
        raise DomainError("radius must be nonnegative")
    pos = r > 0
    rp = np.where(pos, r, 1.0)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if p.kind == "power":
            val = _power_term(rp, p.a) - _power_term(rp, p.b)
        elif p.kind == "logpower":
            val = rp**p.b / p.b * np.log(rp)
        elif p.kind == "repulsive":
            val = -_power_term(rp, p.b)
        else:
            val = rp**4 * np.expm1((p.a - 4.0) * np.log(rp)) * specfun.truncation(rp)
    out = np.where(pos, val, p.value_at_origin())
    return _ret(out, scalar)


def _require_positive(r: np.ndarray) -> None:
    if np.any(r <= 0):
        raise DomainError("derivatives are defined for r > 0 only")


def w_grad_radial(p: PotentialSpec, r) -> float | np.ndarray:
    """``W'(r)``, so ``∇W(x) = W'(|x|) x/|x|``."""
    r, scalar = _as_array(r)
    _require_positive(r)
    if p.kind == "power":
        out = r ** (p.a - 1) - r ** (p.b - 1)
    elif p.kind == "logpower":
        out = r ** (p.b - 1) * (np.log(r) + 1.0 / p.b)
    elif p.kind == "repulsive":
        out = -(r ** (p.b - 1))
    else:
        phi, dphi, _ = specfun.truncation_derivatives(r)
        diff = r**4 * np.expm1((p.a - 4.0) * np.log(r))
        ddiff = p.a * r ** (p.a - 1) - 4.0 * r**3
        out = ddiff * phi + diff * dphi
    return _ret(out, scalar)


def w_second_radial(p: PotentialSpec, r) -> float | np.ndarray:
    """``W''(r)``."""
    r, scalar = _as_array(r)
    _require_positive(r)
    a, b = p.a, p.b
    if p.kind == "power":
        out = (a - 1) * r ** (a - 2) - (b - 1) * r ** (b - 2)
    elif p.kind == "logpower":
        out = r ** (b - 2) * ((b - 1) * np.log(r) + 1.0 + (b - 1) / b)
    elif p.kind == "repulsive":
        out = -(b - 1) * r ** (b - 2)
    else:
        phi, dphi, d2phi = specfun.truncation_derivatives(r)
        diff = r**4 * np.expm1((a - 4.0) * np.log(r))
        ddiff = a * r ** (a - 1) - 4.0 * r**3
        d2diff = a * (a - 1) * r ** (a - 2) - 12.0 * r**2
        out = d2diff * phi + 2.0 * ddiff * dphi + diff * d2phi
    return _ret(out, scalar)


def w_laplacian(p: PotentialSpec, r) -> float | np.ndarray:
    """``ΔW = W'' + (d-1) W'/r`` at radius ``r > 0``."""
    r, scalar = _as_array(r)
    _require_positive(r)
    d, a, b = p.d, p.a, p.b
    if p.kind == "power":
        out = (a + d - 2) * r ** (a - 2) - (b + d - 2) * r ** (b - 2)
    elif p.kind == "logpower":
        out = (b + d - 2) * r ** (b - 2) * np.log(r) + (2 * b + d - 2) / b * r ** (b - 2)
    elif p.kind == "repulsive":
        out = -(b + d - 2) * r ** (b - 2)
    else:
        out = np.asarray(w_second_radial(p, r)) + (d - 1) * np.asarray(w_grad_radial(p, r)) / r
    return _ret(out, scalar)


def power_terms(p: PotentialSpec) -> list[tuple[float, float, int]]:
    """``W(r) = Σ coef r^s (ln r)^L`` as ``(coef, s, L)`` triples."""
    def term(s: float, sign: float) -> tuple[float, float, int]:
        return (sign, 0.0, 1) if s == 0 else (sign / s, s, 0)

    if p.kind == "power":
        return [term(p.a, 1.0), term(p.b, -1.0)]
    if p.kind == "logpower":
        return [(1.0 / p.b, p.b, 1)]
    if p.kind == "repulsive":
        return [term(p.b, -1.0)]
    raise UnsupportedError("truncdiff has no pure power expansion")


def fourier_level(p: PotentialSpec) -> int:
    """Number of vanishing moments needed for the Fourier energy formula."""
    def level(s: float) -> int:
        if s >= 4:
            raise UnsupportedError(f"exponent {s:g} >= 4 is not Fourier representable here")
        return 0 if s < 0 else (1 if s < 2 else 2)

    if p.kind == "power":
        return max(level(p.a), level(p.b))
    if p.kind in ("logpower", "repulsive"):
        return level(p.b)
    raise UnsupportedError("truncdiff is bounded via certify.eta_estimate, not w_hat")


def fourier_terms(p: PotentialSpec) -> list[tuple[float, float, int]]:
    """``Ŵ(ξ) = Σ coef |ξ|^e (ln|ξ|)^L`` as ``(coef, e, L)`` triples."""
    fourier_level(p)
    d = p.d
    if p.kind == "power":
        return [(specfun.c_pf(-p.b, d), -d - p.b, 0), (-specfun.c_pf(-p.a, d), -d - p.a, 0)]
    if p.kind == "logpower":
        return [(specfun.c_pf_tilde(-p.b, d), -d - p.b, 0), (specfun.c_pf(-p.b, d), -d - p.b, 1)]
    return [(specfun.c_pf(-p.b, d), -d - p.b, 0)]


def w_hat(p: PotentialSpec, xi) -> float | np.ndarray:
    """Radial Fourier transform ``Ŵ(|ξ|)`` for ``|ξ| > 0``."""
    xi, scalar = _as_array(xi)
    if np.any(xi <= 0):
        raise DomainError("w_hat is evaluated at |xi| > 0")
    out = np.zeros_like(xi)
    for coef, e, L in fourier_terms(p):
        if coef != 0.0:
            out = out + coef * xi**e * np.log(xi) ** L
    return _ret(out, scalar)
