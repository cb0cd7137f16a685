"""Interaction energies with power-law kernels: evaluation, minimization and
uniqueness certification."""

from .errors import (
    ConvergenceError,
    DomainError,
    MomentConditionError,
    UnsupportedError,
    ValidationError,
)
from .measures import SignedMeasure, moments, random_test_measure, recenter
from .potentials import PotentialSpec

__all__ = [
    "ConvergenceError",
    "DomainError",
    "MomentConditionError",
    "PotentialSpec",
    "SignedMeasure",
    "UnsupportedError",
    "ValidationError",
    "moments",
    "random_test_measure",
    "recenter",
]

__version__ = "0.1.0"
