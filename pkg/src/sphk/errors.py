"""Exception types shared across the package."""


class SphkError(Exception):
    """Base class for all package errors."""


class UnsupportedAlgebraError(SphkError, ValueError):
    pass


class DomainError(SphkError, ValueError):
    """Argument outside the domain where a formula is valid."""


class SingularInputError(DomainError):
    """Point on a root hyperplane or chamber wall where a formula is singular."""


class QuadratureError(SphkError, RuntimeError):
    """A numerical integral failed to reach its tolerance."""


class InsufficientDecayError(QuadratureError):
    pass


class TailToleranceError(QuadratureError):
    """Truncated lattice sum whose tail estimate exceeds the requested tolerance."""
