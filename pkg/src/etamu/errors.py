"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class DegenerateChannelError(ValueError):
    """H = 0 (eta = 1 in format I, eta = 0 in format II) on the integer-form path."""


class ConvergenceError(RuntimeError):
    """An iterative method exhausted its budget.

    ``best`` holds the best estimate reached, ``residual`` its quality measure.
    """

    def __init__(self, message, best=None, residual=None):
        super().__init__(message)
        self.best = best
        self.residual = residual


class QuadratureError(RuntimeError):
    """Adaptive quadrature could not certify the requested tolerance."""

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class CurveEvaluationError(RuntimeError):
    """A sweep point failed; ``snr_db`` names it."""

    def __init__(self, snr_db, cause):
        super().__init__(f"evaluation failed at {snr_db:g} dB: {cause}")
        self.snr_db = snr_db
        self.cause = cause
