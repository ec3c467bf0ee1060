"""Exception types shared across abclab."""


class AbclabError(Exception):
    """Base class for all library errors."""


class DomainError(AbclabError, ValueError):
    """Input lies outside the mathematical domain of an operation (m = 0, square d, ...)."""


class UsageError(AbclabError, ValueError):
    """Bad parameters supplied by the caller (bound < 2, empty input, ...)."""


class SupportError(DomainError):
    """A point lies on the support of the divisor being evaluated."""


class NumericError(AbclabError, ArithmeticError):
    """A floating-point routine failed to converge or to stay off a singularity."""

    def __init__(self, message, best_residual=None):
        super().__init__(message)
        self.best_residual = best_residual
