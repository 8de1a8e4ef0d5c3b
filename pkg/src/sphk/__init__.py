"""Fundamental solutions of powers of the shifted Laplacian on complex symmetric spaces."""

from .errors import (
    DomainError,
    InsufficientDecayError,
    QuadratureError,
    SingularInputError,
    SphkError,
    TailToleranceError,
    UnsupportedAlgebraError,
)
from .rootsys import RootSystemData, build_root_system, pairing, pi_plus_eval

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "InsufficientDecayError",
    "QuadratureError",
    "RootSystemData",
    "SingularInputError",
    "SphkError",
    "TailToleranceError",
    "UnsupportedAlgebraError",
    "build_root_system",
    "pairing",
    "pi_plus_eval",
]
