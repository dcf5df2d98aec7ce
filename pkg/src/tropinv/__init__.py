"""Tropical invariants of separable polynomials, marked trees of their roots,
and skeletons of the superelliptic curves ``y^n = f(x)``."""

from .errors import (
    CapabilityError,
    DomainError,
    InconsistencyError,
    InputError,
    NotSeparableError,
    ParseError,
    TropinvError,
)
from .valued_field import INF, PAdicRational, PuiseuxElement, val

__version__ = "0.1.0"

__all__ = [
    "INF",
    "PAdicRational",
    "PuiseuxElement",
    "val",
    "TropinvError",
    "InputError",
    "ParseError",
    "DomainError",
    "NotSeparableError",
    "CapabilityError",
    "InconsistencyError",
]
