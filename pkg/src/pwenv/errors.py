"""Exception types shared across the toolkit."""


class PwenvError(Exception):
    """Base class for all toolkit errors."""


class InvalidArgumentError(PwenvError, ValueError):
    """An argument violates a documented precondition."""


class InvalidWeightError(InvalidArgumentError):
    """A weight exponent is outside the integrable range (alpha <= -1)."""


class DivergesError(PwenvError, ArithmeticError):
    """A requested integral is divergent or numerically not summable.

    The message names the smoothness (hence decay) needed for convergence,
    or carries the diagnostic that made the tail non-Cauchy.
    """


class NotInEpError(InvalidArgumentError):
    """Function is outside the space the norm is defined on (type > pi)."""


class NotHardyError(InvalidArgumentError):
    """Spectrum violates the half-plane support condition."""


class PoleError(InvalidArgumentError):
    """Evaluation at the pole of a Moebius map."""


class DomainError(InvalidArgumentError):
    """Point lies outside the domain of the requested identity."""


class NoDecompositionError(PwenvError):
    """No admissible atomic decomposition within the residual tolerance."""

    def __init__(self, message, best_residual=None):
        super().__init__(message)
        self.best_residual = best_residual


class ConsistencyError(PwenvError, RuntimeError):
    """Two computations that must agree did not (internal cross-check)."""
