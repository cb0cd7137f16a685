"""Finite signed measures: moments, Fourier transforms, mollification, sampling."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from . import specfun
from .errors import ValidationError


@dataclass(frozen=True, eq=False)
class SignedMeasure:
    """``Σ_i w_i δ_{x_i}`` in R^d. Arrays are copied and frozen on construction."""

    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self) -> None:
        pts = np.array(self.points, dtype=float)
        w = np.array(self.weights, dtype=float).reshape(-1)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2 or pts.shape[1] < 1:
            raise ValidationError("points must be an (n, d) array")
        if pts.shape[0] != w.shape[0]:
            raise ValidationError(f"{pts.shape[0]} points but {w.shape[0]} weights")
        if not (np.all(np.isfinite(pts)) and np.all(np.isfinite(w))):
            raise ValidationError("points and weights must be finite")
        pts.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    @classmethod
    def empty(cls, d: int) -> SignedMeasure:
        return cls(np.zeros((0, d)), np.zeros(0))

    @classmethod
    def dirac(cls, x: Sequence[float] | float, weight: float = 1.0) -> SignedMeasure:
        return cls(np.atleast_1d(np.asarray(x, dtype=float)).reshape(1, -1), [weight])

    @property
    def d(self) -> int:
        return self.points.shape[1]

    @property
    def n(self) -> int:
        return self.points.shape[0]

    def shifted(self, v: Sequence[float]) -> SignedMeasure:
        return SignedMeasure(self.points + np.asarray(v, dtype=float), self.weights)

    def scaled_weights(self, c: float) -> SignedMeasure:
        return SignedMeasure(self.points, c * self.weights)

    def __add__(self, other: SignedMeasure) -> SignedMeasure:
        if other.d != self.d:
            raise ValidationError("dimension mismatch")
        return SignedMeasure(np.vstack([self.points, other.points]),
                             np.concatenate([self.weights, other.weights]))

    def __sub__(self, other: SignedMeasure) -> SignedMeasure:
        return self + other.scaled_weights(-1.0)

    def canonical(self) -> SignedMeasure:
        """Merge coincident atoms, drop zero weights, sort points lexicographically."""
        if self.n == 0:
            return self
        uniq, inv = np.unique(self.points, axis=0, return_inverse=True)
        w = np.zeros(uniq.shape[0])
        np.add.at(w, inv.reshape(-1), self.weights)
        keep = w != 0.0
        return SignedMeasure(uniq[keep], w[keep])

    def to_json(self) -> dict[str, Any]:
        return {"dim": self.d, "points": self.points.tolist(), "weights": self.weights.tolist()}

    @classmethod
    def from_json(cls, obj: Any) -> SignedMeasure:
        if not isinstance(obj, dict) or not {"dim", "points", "weights"} <= set(obj):
            raise ValidationError("measure must be an object with dim, points, weights")
        d = obj["dim"]
        if not isinstance(d, int) or d < 1:
            raise ValidationError("dim must be a positive integer")
        pts, w = obj["points"], obj["weights"]
        if not isinstance(pts, list) or not isinstance(w, list):
            raise ValidationError("points and weights must be lists")
        if len(pts) == 0:
            raise ValidationError("measure has no atoms")
        if any(not isinstance(p, list) or len(p) != d for p in pts):
            raise ValidationError(f"every point must have {d} coordinates")
        try:
            return cls(np.array(pts, dtype=float).reshape(len(pts), d), np.array(w, dtype=float))
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"bad measure data: {exc}") from exc


def load_measure(path: str) -> SignedMeasure:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read measure file: {exc}") from exc
    if not text.strip():
        raise ValidationError(f"measure file {path} is empty")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"measure file is not valid JSON: {exc}") from exc
    return SignedMeasure.from_json(obj)


@dataclass(frozen=True)
class MomentReport:
    mass: float
    center: np.ndarray
    second: float
    support_radius: float

    def to_json(self) -> dict[str, Any]:
        return {"mass": self.mass, "center": self.center.tolist(), "second": self.second,
                "support_radius": self.support_radius}


def moments(mu: SignedMeasure) -> MomentReport:
    w, x = mu.weights, mu.points
    r = np.linalg.norm(x, axis=1)
    support = float(np.max(r[w != 0])) if np.any(w != 0) else 0.0
    return MomentReport(
        mass=float(np.sum(w)),
        center=w @ x if mu.n else np.zeros(mu.d),
        second=float(np.abs(w) @ (r * r)),
        support_radius=support,
    )


def vanishing_level(mu: SignedMeasure, rtol: float = 1e-12) -> int:
    """0, 1 or 2: how many of (mass, first moment) vanish, in order."""
    if mu.n == 0:
        return 2
    scale = float(np.sum(np.abs(mu.weights)))
    if scale == 0.0:
        return 2
    if abs(float(np.sum(mu.weights))) > rtol * scale:
        return 0
    spread = scale * max(1.0, float(np.max(np.linalg.norm(mu.points, axis=1))))
    if np.max(np.abs(mu.weights @ mu.points)) > rtol * spread:
        return 1
    return 2


def recenter(mu: SignedMeasure) -> SignedMeasure:
    """Translate so that ``∫ x dμ / ∫ dμ = 0``."""
    mass = float(np.sum(mu.weights))
    if mass == 0.0:
        raise ValidationError("cannot recenter a measure of zero mass")
    c = (mu.weights @ mu.points) / mass
    return SignedMeasure(mu.points - c, mu.weights)


def fourier_at(mu: SignedMeasure, xi) -> complex | np.ndarray:
    """``μ̂(ξ) = Σ_j w_j exp(-2πi x_j·ξ)`` for one vector or an (m, d) array."""
    xi = np.asarray(xi, dtype=float)
    if mu.d == 1 and xi.ndim <= 1:
        # in one dimension a flat array is a list of frequencies
        single = xi.ndim == 0
        xi2 = xi.reshape(-1, 1)
    else:
        single = xi.ndim == 1
        xi2 = np.atleast_2d(xi)
        if xi2.shape[1] != mu.d:
            raise ValidationError("frequency dimension does not match the measure")
    phase = -2j * math.pi * (xi2 @ mu.points.T)
    out = np.exp(phase) @ mu.weights
    return complex(out[0]) if single else out


@dataclass(frozen=True)
class GridSpec:
    """Tensor grid ``[lo, hi]^d`` with ``n`` points per axis."""

    lo: float
    hi: float
    n: int

    def axes(self, d: int) -> list[np.ndarray]:
        return [np.linspace(self.lo, self.hi, self.n)] * d

    def cell_volume(self, d: int) -> float:
        return ((self.hi - self.lo) / (self.n - 1)) ** d


def mollify_density_on_grid(mu: SignedMeasure, eps: float, grid: GridSpec) -> tuple[np.ndarray, np.ndarray]:
    """Sample ``(φ_ε * μ)`` on a tensor grid. Returns ``(coords, values)``.

    ``coords`` has shape ``(n,)*d + (d,)`` and ``values`` shape ``(n,)*d``.
    """
    if not eps > 0:
        raise ValidationError("eps must be positive")
    mesh = np.stack(np.meshgrid(*grid.axes(mu.d), indexing="ij"), axis=-1)
    flat = mesh.reshape(-1, mu.d)
    vals = np.zeros(flat.shape[0])
    for x, w in zip(mu.points, mu.weights):
        vals += w * specfun.mollifier(np.linalg.norm(flat - x, axis=1), mu.d, eps)
    return mesh, vals.reshape(mesh.shape[:-1])


def uniform_ball(n: int, R: float, d: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` i.i.d. uniform points in ``B(0;R)``."""
    v = rng.standard_normal((n, d))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    rad = R * rng.random(n) ** (1.0 / d)
    return v * rad[:, None]


def _separated_points(n: int, R: float, d: int, sep: float, rng: np.random.Generator) -> np.ndarray:
    """Sequential rejection sampling, restarted when a placement gets stuck."""
    for _ in range(500):
        pts: list[np.ndarray] = []
        for _ in range(200 * n):
            x = uniform_ball(1, R, d, rng)[0]
            if all(np.linalg.norm(x - y) >= sep for y in pts):
                pts.append(x)
                if len(pts) == n:
                    return np.array(pts)
    raise ValidationError("could not place atoms with the requested separation")


def _project(w: np.ndarray, A: np.ndarray) -> np.ndarray:
    for _ in range(2):
        w = w - A.T @ np.linalg.solve(A @ A.T, A @ w)
    return w


def random_test_measure(R: float, n: int, vanish: str = "mass+center", seed: int = 0, d: int = 1,
                        min_separation: float | None = None) -> SignedMeasure:
    """Random atoms in ``B̄(0;R)`` with weights projected onto the moment constraints.

    ``vanish`` is ``"none"``, ``"mass"`` or ``"mass+center"``. Atoms are kept at
    least ``min_separation`` apart (default ``R/n``) so Fourier quadratures see a
    bounded frequency ratio. Weights are scaled to ``Σ|w| = 1``.
    """
    if vanish not in ("none", "mass", "mass+center"):
        raise ValidationError(f"unknown vanish option {vanish!r}")
    n_constraints = {"none": 0, "mass": 1, "mass+center": 1 + d}[vanish]
    if n <= n_constraints:
        raise ValidationError(f"need n > {n_constraints} atoms for vanish={vanish} in d={d}")
    if not R > 0:
        raise ValidationError("R must be positive")
    sep = R / n if min_separation is None else min_separation
    rng = np.random.default_rng(seed)
    X = _separated_points(n, R, d, sep, rng)
    w = rng.standard_normal(n)
    if n_constraints:
        rows = [np.ones(n)]
        if vanish == "mass+center":
            rows.extend(X.T)
        A = np.array(rows)
        w = _project(w, A)
        w = _project(w / np.sum(np.abs(w)), A)
    else:
        w = w / np.sum(np.abs(w))
    return SignedMeasure(X, w)


def random_probability(R: float, n: int, seed: int, d: int) -> SignedMeasure:
    """Equal-weight probability measure on ``n`` uniform points of ``B(0;R)``."""
    rng = np.random.default_rng(seed)
    return SignedMeasure(uniform_ball(n, R, d, rng), np.full(n, 1.0 / n))
