"""Exception hierarchy shared by every module of the package."""


class UnivalentError(Exception):
    """Base class for all package errors."""


class ModeError(UnivalentError, TypeError):
    """Operands mix exact and approximate arithmetic."""


class TruncationError(UnivalentError, ValueError):
    """A result would retain no terms, or an input is truncated too early."""


class NormalizationError(UnivalentError, ValueError):
    """A series violates a required normalization (constant term, a_1 = 1, ...)."""


class DomainError(UnivalentError, ValueError):
    """A parameter lies outside the admissible domain."""


class SingularityError(UnivalentError, ValueError):
    """A derivative vanishes where local univalence is required."""


class TailError(UnivalentError, ValueError):
    """Truncation tail cannot be controlled on the requested grid."""


class ConvergenceError(UnivalentError, RuntimeError):
    """An iteration hit its cap without meeting tolerance."""

    def __init__(self, message, history=None):
        super().__init__(message)
        self.history = list(history or [])


class IntegrationError(UnivalentError, RuntimeError):
    """Step halving could not reach the requested tolerance."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class SpecError(UnivalentError, ValueError):
    """A functional specification is malformed."""


class ConfigError(UnivalentError, ValueError):
    """A scan configuration is invalid."""
