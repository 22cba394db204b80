"""
Exception hierarchy for the Artin billiard scattering package.

Each error also derives from the builtin it most resembles, so callers that
only know about ValueError or ArithmeticError still catch them.
"""


class ArtinError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(ArtinError, ValueError):
    """A settings record or run configuration violates its invariants."""


class PoleError(ArtinError, ValueError):
    """Evaluation requested at a pole of Γ, ζ or θ."""


class DomainError(ArtinError, ValueError):
    """Argument outside the domain of an operation."""


class BranchPointError(DomainError):
    """Momentum requested at the branch point E = 1/4."""


class AccuracyError(ArtinError, ArithmeticError):
    """A kernel could not reach its tolerance within its budget."""


class ConvergenceError(ArtinError, ArithmeticError):
    """An iterative refinement hit its iteration cap."""


class BudgetError(ArtinError, RuntimeError):
    """A configured size limit (height, samples, modes, divisors) was exceeded."""


class ZeroCountError(ArtinError, RuntimeError):
    """Zeros found disagree with the Riemann-von Mangoldt count."""


class SchemaError(ArtinError, ValueError):
    """A data file does not have the columns a consumer expects."""
