"""Exception types shared across the package."""


class AlgebraError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(AlgebraError):
    """Vector, matrix, or exponent lengths do not line up."""


class RingMismatchError(AlgebraError):
    """Operands belong to different rings."""


class DomainError(AlgebraError):
    """Input is outside an operation's mathematical domain."""


class ExactnessError(AlgebraError):
    """A complex that was required to be exact has nonzero homology."""


class CertificationError(AlgebraError):
    """An internal consistency certificate failed."""


class ParseError(AlgebraError):
    """Malformed textual input (monomials, job documents)."""
