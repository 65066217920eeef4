"""Exception hierarchy shared across the package."""


class EndPeriodicError(Exception):
    """Base class for all package errors."""


class InvalidInputError(EndPeriodicError, ValueError):
    """Malformed or out-of-domain input."""


class PreconditionError(EndPeriodicError, ValueError):
    """A documented precondition of an operation was violated."""


class ConvergenceError(EndPeriodicError, RuntimeError):
    """Iterative eigensolve did not reach the requested residual."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


class VerificationError(EndPeriodicError, RuntimeError):
    """A certificate check failed; carries the offending values."""

    def __init__(self, message: str, expected=None, actual=None):
        super().__init__(message)
        self.expected = expected
        self.actual = actual


class InternalConsistencyError(EndPeriodicError, RuntimeError):
    """A structural guarantee of the construction was violated."""
