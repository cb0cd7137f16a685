"""Equal-weight particle gradient descent for the interaction energy."""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy.spatial.distance import pdist, squareform

from . import potentials
from .energy import particle_energy
from .errors import ValidationError
from .measures import SignedMeasure, uniform_ball
from .potentials import PotentialSpec


@dataclass(frozen=True)
class FlowConfig:
    """Descent settings.

    ``init`` is ``"uniform_ball"`` or ``"ring"`` (radius ``init_radius``), or
    ``"custom"`` with positions from ``custom``. ``armijo`` is
    ``(shrink, slope)``; after an accepted step the next trial step grows by
    ``growth`` and is replaced by the Barzilai–Borwein estimate when that is
    larger.
    """

    n_particles: int = 200
    max_iters: int = 5000
    init: str = "uniform_ball"
    init_radius: float = 1.0
    step0: float = 0.1
    armijo: tuple[float, float] = (0.5, 1e-4)
    tol_grad: float = 1e-8
    seed: int = 0
    growth: float = 2.0
    max_step: float = 1e6
    custom: SignedMeasure | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        shrink, slope = self.armijo
        if self.n_particles < 2 or self.max_iters < 0:
            raise ValidationError("need n_particles >= 2 and max_iters >= 0")
        if not (0 < shrink < 1 and 0 < slope < 1):
            raise ValidationError("armijo factors must lie in (0, 1)")
        if not (self.step0 > 0 and self.tol_grad > 0 and self.init_radius > 0 and self.growth >= 1):
            raise ValidationError("step0, tol_grad and init_radius must be positive")
        if self.init not in ("uniform_ball", "ring", "custom"):
            raise ValidationError(f"unknown init {self.init!r}")
        if self.init == "custom" and self.custom is None:
            raise ValidationError("custom init needs a measure")

    def to_json(self) -> dict[str, Any]:
        out = {k: getattr(self, k) for k in self.__dataclass_fields__ if k != "custom"}
        out["armijo"] = list(self.armijo)
        return out

    @classmethod
    def from_json(cls, obj: dict[str, Any], custom: SignedMeasure | None = None) -> FlowConfig:
        if not isinstance(obj, dict):
            raise ValidationError("flow config must be an object")
        known = set(cls.__dataclass_fields__) - {"custom"}
        unknown = set(obj) - known
        if unknown:
            raise ValidationError(f"unknown flow fields {sorted(unknown)}")
        kw = dict(obj)
        if "armijo" in kw:
            kw["armijo"] = tuple(kw["armijo"])
        return cls(custom=custom, **kw)


@dataclass(frozen=True)
class FlowResult:
    measure: SignedMeasure
    energy_trace: list[float]
    grad_trace: list[float]
    grad_norm: float
    support_radius: float
    iterations: int
    converged: bool
    center_drift: float
    message: str = ""

    def to_json(self) -> dict[str, Any]:
        return {
            "measure": self.measure.to_json(),
            "energy": self.energy_trace[-1] if self.energy_trace else math.nan,
            "grad_norm": self.grad_norm,
            "support_radius": self.support_radius,
            "iterations": self.iterations,
            "converged": self.converged,
            "center_drift": self.center_drift,
            "message": self.message,
        }

    def trace_csv(self) -> str:
        buf = io.StringIO()
        buf.write("iter,energy,grad_norm\n")
        for i, (e, g) in enumerate(zip(self.energy_trace, self.grad_trace)):
            buf.write(f"{i},{e:.17g},{g:.17g}\n")
        return buf.getvalue()


def _initial_positions(p: PotentialSpec, cfg: FlowConfig) -> np.ndarray:
    rng = np.random.default_rng(cfg.seed)
    n, d = cfg.n_particles, p.d
    if cfg.init == "custom":
        X = np.array(cfg.custom.points, dtype=float)
        if X.shape[1] != d:
            raise ValidationError("custom init dimension does not match the potential")
        return X
    if cfg.init == "ring":
        if d == 1:
            return cfg.init_radius * np.where(np.arange(n) % 2 == 0, 1.0, -1.0)[:, None]
        th = 2 * math.pi * np.arange(n) / n
        X = np.zeros((n, d))
        X[:, 0] = cfg.init_radius * np.cos(th)
        X[:, 1] = cfg.init_radius * np.sin(th)
        return X
    return uniform_ball(n, cfg.init_radius, d, rng)


def velocity(p: PotentialSpec, X: np.ndarray) -> np.ndarray:
    """``v_i = -(1/N) Σ_{j≠i} ∇W(x_i - x_j)``; equals ``-N ∇_{x_i} E``."""
    n = X.shape[0]
    diff = X[:, None, :] - X[None, :, :]
    dist = squareform(pdist(X))
    np.fill_diagonal(dist, 1.0)
    coef = np.asarray(potentials.w_grad_radial(p, dist)) / dist
    np.fill_diagonal(coef, 0.0)
    return -np.einsum("ij,ijk->ik", coef, diff) / n


def _center(X: np.ndarray) -> np.ndarray:
    return X.mean(axis=0)


def _radius(X: np.ndarray) -> float:
    return float(np.max(np.linalg.norm(X - _center(X), axis=1)))


def minimize(p: PotentialSpec, cfg: FlowConfig) -> FlowResult:
    """Monotone gradient descent on equal-weight particle positions.

    A trial step is accepted when the Armijo condition
    ``E(X + t v) ≤ E(X) - slope · t · |v|²/N`` holds and no two particles
    collide; otherwise ``t`` shrinks. Twenty consecutive failures down to
    machine-small ``t`` end the run as not converged.
    """
    X = _initial_positions(p, cfg)
    n = X.shape[0]
    c_start = _center(X)
    shrink, slope = cfg.armijo
    E = particle_energy(p, X)
    if not math.isfinite(E):
        raise ValidationError("initial configuration has infinite energy (coincident particles)")
    v = velocity(p, X)
    g = float(np.sqrt(np.sum(v * v) / n))
    energies, grads = [E], [g]
    t = cfg.step0
    converged = g < cfg.tol_grad
    message = "gradient tolerance reached" if converged else ""
    it = 0
    while not converged and it < cfg.max_iters:
        vv = float(np.sum(v * v)) / n
        accepted = False
        while t > 1e-300:
            Y = X + t * v
            EY = particle_energy(p, Y)
            if math.isfinite(EY) and EY <= E - slope * t * vv:
                accepted = True
                break
            t *= shrink
        if not accepted:
            message = "step size underflow: no descent step accepted"
            break
        it += 1
        vY = velocity(p, Y)
        s, yv = Y - X, v - vY  # y = grad difference up to the factor N
        sy = float(np.sum(s * yv))
        bb = float(np.sum(s * s)) / sy if sy > 0 else 0.0
        X, E, v = Y, EY, vY
        g = float(np.sqrt(np.sum(v * v) / n))
        energies.append(E)
        grads.append(g)
        t = min(max(t * cfg.growth, bb), cfg.max_step)
        if g < cfg.tol_grad:
            converged = True
            message = "gradient tolerance reached"
    if not converged and not message:
        message = "iteration limit reached"
    drift = float(np.linalg.norm(_center(X) - c_start))
    Xc = X - _center(X)
    mu = SignedMeasure(Xc, np.full(n, 1.0 / n))
    return FlowResult(mu, energies, grads, g, _radius(Xc), it, converged, drift, message)


def support_radius(res: FlowResult, quantile: float = 1.0) -> float:
    """Smallest radius about the center of mass holding ``quantile`` of the mass."""
    if not 0 < quantile <= 1:
        raise ValidationError("quantile must lie in (0, 1]")
    X = res.measure.points
    r = np.sort(np.linalg.norm(X - X.mean(axis=0), axis=1))
    k = max(int(math.ceil(quantile * r.size - 1e-9)), 1)
    return float(r[k - 1])
